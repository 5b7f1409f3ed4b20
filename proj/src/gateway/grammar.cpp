#include "versus/gateway/grammar.hpp"

#include <charconv>
#include <sstream>

#include "versus/core/errors.hpp"
#include "versus/core/normalize.hpp"

namespace versus {

namespace {

std::vector<std::string> split_lines(const std::string& raw) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(raw);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

// Splits on tabs; when max_fields > 0 the last field keeps any further tabs.
std::vector<std::string> split_tabs(const std::string& line, int max_fields = 0) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        if (max_fields > 0 && static_cast<int>(fields.size()) == max_fields - 1) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        std::size_t tab = line.find('\t', begin);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        fields.push_back(line.substr(begin, tab - begin));
        begin = tab + 1;
    }
}

bool parse_int(const std::string& s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_side(const std::string& s, char& side) {
    if (s == "A" || s == "B") {
        side = s[0];
        return true;
    }
    return false;
}

bool parse_index_list(const std::string& s, std::vector<int>& out) {
    out.clear();
    std::size_t begin = 0;
    while (begin <= s.size()) {
        std::size_t comma = s.find(',', begin);
        std::string piece =
            comma == std::string::npos ? s.substr(begin) : s.substr(begin, comma - begin);
        int v = 0;
        if (!parse_int(piece, v)) return false;
        out.push_back(v);
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    return !out.empty();
}

std::string join_indices(const std::vector<int>& indices) {
    std::string out;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(indices[i]);
    }
    return out;
}

StructuredExtractionList parse_extractions(const std::string& raw) {
    StructuredExtractionList out;
    for (const auto& line : split_lines(raw)) {
        auto fields = split_tabs(line, 3);
        if (fields.size() != 3) continue;
        ExtractionRecord rec{fields[0], fields[1], fields[2]};
        if (trim(rec.attribute).empty() || trim(rec.value).empty() || trim(rec.evidence).empty())
            continue;
        out.items.push_back(std::move(rec));
    }
    return out;
}

std::string render_extractions(const std::vector<ExtractionRecord>& items) {
    std::string out;
    for (const auto& rec : items) {
        out += grammar_field(rec.attribute);
        out += '\t';
        out += grammar_field(rec.value);
        out += '\t';
        out += grammar_field(rec.evidence);
        out += '\n';
    }
    return out;
}

constexpr std::string_view kRatingPrefix = "RATING: ";
constexpr std::string_view kNoRecords = "NO_RECORDS";

bool has_no_records_marker(const std::string& raw) {
    std::istringstream in(raw);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line) == kNoRecords) return true;
    }
    return false;
}

}  // namespace

std::string grammar_field(std::string_view field) {
    std::string out(field);
    for (char& c : out) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

StageOutput parse_stage_output(StageTag tag, const std::string& raw) {
    switch (tag) {
        case StageTag::EXTRACT: {
            auto list = parse_extractions(raw);
            // An empty extraction list is legitimate (a tile with no
            // attribute statements) but must be stated via NO_RECORDS.
            if (list.items.empty() && !has_no_records_marker(raw))
                throw ParseError("EXTRACT: no records found", raw);
            return list;
        }
        case StageTag::REVISE: {
            auto list = parse_extractions(raw);
            if (list.items.empty() && !has_no_records_marker(raw))
                throw ParseError("REVISE: no records found", raw);
            return ReviseResult{std::move(list.items)};
        }
        case StageTag::ATTRIBUTE_MERGE: {
            AttributeMergeResult out;
            for (const auto& line : split_lines(raw)) {
                auto fields = split_tabs(line);
                if (fields.size() < 2 || fields[0] != "CLUSTER") continue;
                AttributeGroup group;
                bool center_seen = false;
                bool bad = false;
                for (std::size_t i = 1; i < fields.size(); ++i) {
                    std::string member = fields[i];
                    if (!member.empty() && member[0] == '*') {
                        member.erase(member.begin());
                        if (center_seen) {
                            bad = true;
                            break;
                        }
                        center_seen = true;
                        group.center = member;
                    }
                    if (trim(member).empty()) {
                        bad = true;
                        break;
                    }
                    group.members.push_back(std::move(member));
                }
                if (bad || !center_seen || group.members.empty()) continue;
                out.groups.push_back(std::move(group));
            }
            if (out.groups.empty() && !has_no_records_marker(raw))
                throw ParseError("ATTRIBUTE_MERGE: no CLUSTER records found", raw);
            return out;
        }
        case StageTag::VALUE_MERGE: {
            ValueMergeResult out;
            bool any_record = false;
            for (const auto& line : split_lines(raw)) {
                auto fields = split_tabs(line);
                if (fields.empty()) continue;
                if (fields[0] == "GROUP" && fields.size() == 4) {
                    ValueGroupRecord rec;
                    if (!parse_side(fields[1], rec.side)) continue;
                    if (!parse_int(fields[2], rec.rep_index)) continue;
                    if (!parse_index_list(fields[3], rec.member_indices)) continue;
                    out.groups.push_back(std::move(rec));
                    any_record = true;
                } else if (fields[0] == "CONFLICT" && fields.size() == 3) {
                    ValueConflictRecord rec;
                    if (!parse_side(fields[1], rec.side)) continue;
                    std::vector<int> pair;
                    if (!parse_index_list(fields[2], pair) || pair.size() != 2) continue;
                    rec.group_i = pair[0];
                    rec.group_j = pair[1];
                    out.conflicts.push_back(rec);
                    any_record = true;
                }
            }
            if (!any_record && !has_no_records_marker(raw))
                throw ParseError("VALUE_MERGE: no GROUP records found", raw);
            return out;
        }
        case StageTag::CONTRAST: {
            ContrastResult out;
            for (const auto& line : split_lines(raw)) {
                auto fields = split_tabs(line);
                if (fields.size() != 4 || fields[0] != "ROW") continue;
                ContrastRecord rec;
                rec.attribute = fields[1];
                if (trim(rec.attribute).empty()) continue;
                if (fields[2] == "HIGH")
                    rec.level = ContrastLevel::HIGH;
                else if (fields[2] == "LOW")
                    rec.level = ContrastLevel::LOW;
                else if (fields[2] == "NONE")
                    rec.level = ContrastLevel::NONE;
                else
                    continue;
                if (!parse_int(fields[3], rec.rank_hint)) continue;
                out.rows.push_back(std::move(rec));
            }
            if (out.rows.empty() && !has_no_records_marker(raw))
                throw ParseError("CONTRAST: no ROW records found", raw);
            return out;
        }
        case StageTag::USEFULNESS:
        case StageTag::AUTORATE: {
            for (const auto& line : split_lines(raw)) {
                std::string t = trim(line);
                if (t.rfind(kRatingPrefix, 0) == 0) {
                    std::string label = trim(t.substr(kRatingPrefix.size()));
                    // drop trailing prose after the label token
                    if (auto space = label.find(' '); space != std::string::npos)
                        label = label.substr(0, space);
                    if (!label.empty()) return RatingResult{label};
                }
            }
            throw ParseError("no RATING line found", raw);
        }
        case StageTag::CRITIQUE: {
            CritiqueResult out;
            bool any_line = false;
            for (const auto& line : split_lines(raw)) {
                auto fields = split_tabs(line, 4);
                if (fields.empty() || fields[0] != "CRITIQUE") continue;
                any_line = true;
                if (fields.size() != 4) continue;
                CritiqueRecord rec{fields[1], fields[2], fields[3]};
                if (trim(rec.kind).empty() || trim(rec.target).empty()) continue;
                out.items.push_back(std::move(rec));
            }
            // "CRITIQUE: NONE" means a clean payload.
            if (!any_line && trim(raw) != "CRITIQUE: NONE")
                throw ParseError("CRITIQUE: unrecognized response", raw);
            return out;
        }
    }
    throw ParseError("unknown stage tag", raw);
}

std::string render_stage_output(StageTag tag, const StageOutput& value) {
    switch (tag) {
        case StageTag::EXTRACT: {
            const auto& items = std::get<StructuredExtractionList>(value).items;
            return items.empty() ? std::string(kNoRecords) + "\n" : render_extractions(items);
        }
        case StageTag::REVISE: {
            const auto& items = std::get<ReviseResult>(value).items;
            return items.empty() ? std::string(kNoRecords) + "\n" : render_extractions(items);
        }
        case StageTag::ATTRIBUTE_MERGE: {
            if (std::get<AttributeMergeResult>(value).groups.empty())
                return std::string(kNoRecords) + "\n";
            std::string out;
            for (const auto& group : std::get<AttributeMergeResult>(value).groups) {
                out += "CLUSTER";
                for (const auto& member : group.members) {
                    out += '\t';
                    if (member == group.center) out += '*';
                    out += grammar_field(member);
                }
                out += '\n';
            }
            return out;
        }
        case StageTag::VALUE_MERGE: {
            const auto& vm = std::get<ValueMergeResult>(value);
            if (vm.groups.empty() && vm.conflicts.empty()) return std::string(kNoRecords) + "\n";
            std::string out;
            for (const auto& group : vm.groups) {
                out += "GROUP\t";
                out += group.side;
                out += '\t';
                out += std::to_string(group.rep_index);
                out += '\t';
                out += join_indices(group.member_indices);
                out += '\n';
            }
            for (const auto& conflict : vm.conflicts) {
                out += "CONFLICT\t";
                out += conflict.side;
                out += '\t';
                out += std::to_string(conflict.group_i);
                out += ',';
                out += std::to_string(conflict.group_j);
                out += '\n';
            }
            return out;
        }
        case StageTag::CONTRAST: {
            if (std::get<ContrastResult>(value).rows.empty())
                return std::string(kNoRecords) + "\n";
            std::string out;
            for (const auto& row : std::get<ContrastResult>(value).rows) {
                out += "ROW\t";
                out += grammar_field(row.attribute);
                out += '\t';
                out += to_string(row.level);
                out += '\t';
                out += std::to_string(row.rank_hint);
                out += '\n';
            }
            return out;
        }
        case StageTag::USEFULNESS:
        case StageTag::AUTORATE:
            return std::string(kRatingPrefix) + std::get<RatingResult>(value).label + "\n";
        case StageTag::CRITIQUE: {
            const auto& items = std::get<CritiqueResult>(value).items;
            if (items.empty()) return "CRITIQUE: NONE";
            std::string out;
            for (const auto& rec : items) {
                out += "CRITIQUE\t";
                out += grammar_field(rec.kind);
                out += '\t';
                out += grammar_field(rec.target);
                out += '\t';
                out += grammar_field(rec.note);
                out += '\n';
            }
            return out;
        }
    }
    return {};
}

const char* to_string(StageTag tag) {
    switch (tag) {
        case StageTag::EXTRACT: return "EXTRACT";
        case StageTag::ATTRIBUTE_MERGE: return "ATTRIBUTE_MERGE";
        case StageTag::VALUE_MERGE: return "VALUE_MERGE";
        case StageTag::CONTRAST: return "CONTRAST";
        case StageTag::USEFULNESS: return "USEFULNESS";
        case StageTag::CRITIQUE: return "CRITIQUE";
        case StageTag::REVISE: return "REVISE";
        case StageTag::AUTORATE: return "AUTORATE";
    }
    return "EXTRACT";
}

StageTag stage_tag_from_string(const std::string& s) {
    if (s == "EXTRACT") return StageTag::EXTRACT;
    if (s == "ATTRIBUTE_MERGE") return StageTag::ATTRIBUTE_MERGE;
    if (s == "VALUE_MERGE") return StageTag::VALUE_MERGE;
    if (s == "CONTRAST") return StageTag::CONTRAST;
    if (s == "USEFULNESS") return StageTag::USEFULNESS;
    if (s == "CRITIQUE") return StageTag::CRITIQUE;
    if (s == "REVISE") return StageTag::REVISE;
    if (s == "AUTORATE") return StageTag::AUTORATE;
    throw ConfigError("unknown stage tag: " + s);
}

}  // namespace versus
