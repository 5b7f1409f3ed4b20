#include "versus/pipeline/trace.hpp"

#include "versus/core/digest.hpp"

namespace versus {

nlohmann::json StageTrace::to_json() const {
    return nlohmann::json{
        {"id", id},
        {"stage", std::string(to_string(stage))},
        {"input_digest", input_digest},
        {"output_digest", output_digest},
        {"critiques_applied", critiques_applied},
        {"duration_ms", duration_ms},
        {"input_text", input_text},
        {"output_text", output_text},
    };
}

StageTrace StageTrace::from_json(const nlohmann::json& j) {
    StageTrace t;
    t.id = j.at("id").get<std::string>();
    t.stage = stage_tag_from_string(j.at("stage").get<std::string>());
    t.input_digest = j.at("input_digest").get<std::string>();
    t.output_digest = j.at("output_digest").get<std::string>();
    t.critiques_applied = j.value("critiques_applied", std::vector<std::string>{});
    t.duration_ms = j.value("duration_ms", std::int64_t{0});
    t.input_text = j.value("input_text", "");
    t.output_text = j.value("output_text", "");
    return t;
}

std::string TraceLog::append(StageTag stage, const std::string& input_text,
                             const std::string& output_text, std::int64_t duration_ms) {
    StageTrace t;
    t.stage = stage;
    t.input_text = input_text;
    t.output_text = output_text;
    t.input_digest = digest_hex(input_text);
    t.output_digest = digest_hex(output_text);
    t.duration_ms = duration_ms;
    t.id = std::string(to_string(stage)) + "-" + std::to_string(entries_.size()) + "-" +
           t.input_digest.substr(0, 8);
    entries_.push_back(std::move(t));
    return entries_.back().id;
}

void TraceLog::warn(std::string message) { warnings_.push_back(std::move(message)); }

void TraceLog::update_output(const std::string& id, const std::string& output_text) {
    for (auto& t : entries_) {
        if (t.id == id) {
            t.output_text = output_text;
            t.output_digest = digest_hex(output_text);
            return;
        }
    }
}

void TraceLog::add_critique(const std::string& id, const std::string& description) {
    for (auto& t : entries_) {
        if (t.id == id) {
            t.critiques_applied.push_back(description);
            return;
        }
    }
}

std::vector<std::string> TraceLog::ids() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& t : entries_) out.push_back(t.id);
    return out;
}

}  // namespace versus
