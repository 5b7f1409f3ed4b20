#include "versus/distill/format.hpp"

#include <charconv>
#include <sstream>

#include "versus/core/errors.hpp"
#include "versus/gateway/grammar.hpp"

namespace versus {

nlohmann::json DistillRecord::to_json() const {
    return nlohmann::json{{"task_tag", task},
                          {"input_text", input_text},
                          {"target_text", target_text},
                          {"provenance", {{"run_id", run_id}, {"trace_digest", trace_digest}}}};
}

DistillRecord DistillRecord::from_json(const nlohmann::json& j) {
    DistillRecord r;
    r.task = j.at("task_tag").get<std::string>();
    r.input_text = j.at("input_text").get<std::string>();
    r.target_text = j.at("target_text").get<std::string>();
    r.run_id = j.at("provenance").value("run_id", "");
    r.trace_digest = j.at("provenance").value("trace_digest", "");
    return r;
}

std::string render_compare_example(const ComparisonRow& row) {
    std::string out = "ROW\t" + grammar_field(row.attribute) + '\t' +
                      to_string(row.contrast_level) + '\n';
    auto emit = [&](char side, const std::vector<ValueEntry>& cell) {
        for (const auto& entry : cell) {
            out += "VAL\t";
            out += side;
            out += '\t';
            out += grammar_field(entry.value);
            out += '\t';
            out += std::to_string(entry.support_count);
            out += '\n';
        }
    };
    emit('A', row.cell_a);
    emit('B', row.cell_b);
    return out;
}

std::optional<CompareExample> parse_compare_example(const std::string& text) {
    CompareExample out;
    bool row_seen = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        std::size_t begin = 0;
        while (true) {
            std::size_t tab = line.find('\t', begin);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(begin));
                break;
            }
            fields.push_back(line.substr(begin, tab - begin));
            begin = tab + 1;
        }
        if (fields.size() == 3 && fields[0] == "ROW") {
            if (row_seen) return std::nullopt;  // one row per example
            out.attribute = fields[1];
            try {
                out.level = contrast_level_from_string(fields[2]);
            } catch (const Error&) {
                return std::nullopt;
            }
            row_seen = true;
        } else if (fields.size() == 4 && fields[0] == "VAL") {
            if (!row_seen) return std::nullopt;
            if (fields[1] != "A" && fields[1] != "B") return std::nullopt;
            ValueEntry entry;
            entry.value = fields[2];
            int support = 0;
            auto [ptr, ec] =
                std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), support);
            if (ec != std::errc() || ptr != fields[3].data() + fields[3].size() || support < 1)
                return std::nullopt;
            entry.support_count = support;
            (fields[1] == "A" ? out.cell_a : out.cell_b).push_back(std::move(entry));
        }
    }
    if (!row_seen) return std::nullopt;
    return out;
}

bool target_parses(const std::string& task, const std::string& target_text) {
    try {
        if (task == "EXTRACT") {
            parse_stage_output(StageTag::EXTRACT, target_text);
            return true;
        }
        if (task == "ATTRIBUTE_MERGE") {
            parse_stage_output(StageTag::ATTRIBUTE_MERGE, target_text);
            return true;
        }
        if (task == "COMPARE") return parse_compare_example(target_text).has_value();
    } catch (const Error&) {
        return false;
    }
    return false;
}

}  // namespace versus
