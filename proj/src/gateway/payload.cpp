#include "versus/gateway/payload.hpp"

#include <charconv>
#include <sstream>

#include "versus/core/normalize.hpp"
#include "versus/gateway/grammar.hpp"

namespace versus {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

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

void field_line(std::string& out, std::string_view key, std::string_view value) {
    out += key;
    out += '\t';
    out += grammar_field(value);
    out += '\n';
}

}  // namespace

std::string render_payload(const ExtractPayload& p) {
    std::string out;
    field_line(out, "ENTITY", p.entity_name);
    for (const auto& s : p.sentences) field_line(out, "S", s);
    return out;
}

std::optional<ExtractPayload> parse_extract_payload(const std::string& text) {
    ExtractPayload p;
    bool entity_seen = false;
    for (const auto& line : split_lines(text)) {
        auto fields = split_tabs(line, 2);
        if (fields.size() != 2) continue;
        if (fields[0] == "ENTITY") {
            p.entity_name = fields[1];
            entity_seen = true;
        } else if (fields[0] == "S") {
            p.sentences.push_back(fields[1]);
        }
    }
    if (!entity_seen) return std::nullopt;
    return p;
}

std::string render_payload(const AttributeMergePayload& p) {
    std::string out;
    field_line(out, "ENTITY_A", p.entity_a);
    field_line(out, "ENTITY_B", p.entity_b);
    for (const auto& a : p.attributes) field_line(out, "ATTR", a);
    return out;
}

std::optional<AttributeMergePayload> parse_attribute_merge_payload(const std::string& text) {
    AttributeMergePayload p;
    bool a_seen = false;
    bool b_seen = false;
    for (const auto& line : split_lines(text)) {
        auto fields = split_tabs(line, 2);
        if (fields.size() != 2) continue;
        if (fields[0] == "ENTITY_A") {
            p.entity_a = fields[1];
            a_seen = true;
        } else if (fields[0] == "ENTITY_B") {
            p.entity_b = fields[1];
            b_seen = true;
        } else if (fields[0] == "ATTR") {
            p.attributes.push_back(fields[1]);
        }
    }
    if (!a_seen || !b_seen) return std::nullopt;
    return p;
}

std::string render_payload(const ValueMergePayload& p) {
    std::string out;
    field_line(out, "ATTRIBUTE", p.attribute);
    for (std::size_t i = 0; i < p.values_a.size(); ++i) {
        out += "V\tA\t" + std::to_string(i + 1) + '\t' + grammar_field(p.values_a[i]) + '\n';
    }
    for (std::size_t i = 0; i < p.values_b.size(); ++i) {
        out += "V\tB\t" + std::to_string(i + 1) + '\t' + grammar_field(p.values_b[i]) + '\n';
    }
    return out;
}

std::optional<ValueMergePayload> parse_value_merge_payload(const std::string& text) {
    ValueMergePayload p;
    bool attr_seen = false;
    for (const auto& line : split_lines(text)) {
        auto fields = split_tabs(line, 4);
        if (fields.size() >= 2 && fields[0] == "ATTRIBUTE") {
            p.attribute = fields[1];
            attr_seen = true;
        } else if (fields.size() == 4 && fields[0] == "V") {
            char side = 'A';
            int index = 0;
            if (!parse_side(fields[1], side) || !parse_int(fields[2], index)) return std::nullopt;
            auto& values = side == 'A' ? p.values_a : p.values_b;
            if (index != static_cast<int>(values.size()) + 1) return std::nullopt;
            values.push_back(fields[3]);
        }
    }
    if (!attr_seen) return std::nullopt;
    return p;
}

std::string render_payload(const ContrastPayload& p) {
    std::string out;
    for (const auto& row : p.rows) {
        field_line(out, "ATTRIBUTE", row.attribute);
        for (const auto& v : row.values) {
            out += "V\t";
            out += v.side;
            out += '\t';
            out += grammar_field(v.value);
            out += '\t';
            out += std::to_string(v.support);
            out += '\n';
        }
    }
    return out;
}

std::optional<ContrastPayload> parse_contrast_payload(const std::string& text) {
    ContrastPayload p;
    for (const auto& line : split_lines(text)) {
        auto fields = split_tabs(line);
        if (fields.size() >= 2 && fields[0] == "ATTRIBUTE") {
            p.rows.push_back(ContrastPayloadRow{fields[1], {}});
        } else if (fields.size() == 4 && fields[0] == "V") {
            if (p.rows.empty()) return std::nullopt;
            ContrastValue v;
            if (!parse_side(fields[1], v.side)) return std::nullopt;
            v.value = fields[2];
            if (!parse_int(fields[3], v.support)) return std::nullopt;
            p.rows.back().values.push_back(std::move(v));
        }
    }
    if (p.rows.empty()) return std::nullopt;
    return p;
}

std::string render_payload(const UsefulnessPayload& p) {
    std::string out;
    field_line(out, "ENTITY_A", p.entity_a);
    field_line(out, "ENTITY_B", p.entity_b);
    field_line(out, "ATTRIBUTE", p.attribute);
    for (const auto& v : p.values_a) {
        out += "V\tA\t" + grammar_field(v) + '\n';
    }
    for (const auto& v : p.values_b) {
        out += "V\tB\t" + grammar_field(v) + '\n';
    }
    return out;
}

std::optional<UsefulnessPayload> parse_usefulness_payload(const std::string& text) {
    UsefulnessPayload p;
    bool attr_seen = false;
    for (const auto& line : split_lines(text)) {
        auto fields = split_tabs(line, 3);
        if (fields.size() >= 2 && fields[0] == "ENTITY_A") {
            p.entity_a = split_tabs(line, 2)[1];
        } else if (fields.size() >= 2 && fields[0] == "ENTITY_B") {
            p.entity_b = split_tabs(line, 2)[1];
        } else if (fields.size() >= 2 && fields[0] == "ATTRIBUTE") {
            p.attribute = split_tabs(line, 2)[1];
            attr_seen = true;
        } else if (fields.size() == 3 && fields[0] == "V") {
            char side = 'A';
            if (!parse_side(fields[1], side)) return std::nullopt;
            (side == 'A' ? p.values_a : p.values_b).push_back(fields[2]);
        }
    }
    if (!attr_seen) return std::nullopt;
    return p;
}

std::string render_payload(const AutoratePayload& p) {
    std::string out;
    field_line(out, "ENTITY_A", p.entity_a);
    field_line(out, "ENTITY_B", p.entity_b);
    field_line(out, "ATTRIBUTE", p.attribute);
    field_line(out, "CONTRAST", to_string(p.contrast_level));
    for (const auto& v : p.values) {
        out += "V\t";
        out += v.side;
        out += '\t';
        out += grammar_field(v.value);
        out += '\t';
        out += grammar_field(v.evidence);
        out += '\n';
    }
    return out;
}

std::optional<AutoratePayload> parse_autorate_payload(const std::string& text) {
    AutoratePayload p;
    bool attr_seen = false;
    for (const auto& line : split_lines(text)) {
        auto fields = split_tabs(line, 4);
        if (fields.size() >= 2 && fields[0] == "ENTITY_A") {
            p.entity_a = split_tabs(line, 2)[1];
        } else if (fields.size() >= 2 && fields[0] == "ENTITY_B") {
            p.entity_b = split_tabs(line, 2)[1];
        } else if (fields.size() >= 2 && fields[0] == "ATTRIBUTE") {
            p.attribute = split_tabs(line, 2)[1];
            attr_seen = true;
        } else if (fields.size() >= 2 && fields[0] == "CONTRAST") {
            try {
                p.contrast_level = contrast_level_from_string(trim(split_tabs(line, 2)[1]));
            } catch (...) {
                return std::nullopt;
            }
        } else if (fields.size() == 4 && fields[0] == "V") {
            RatedValue v;
            if (!parse_side(fields[1], v.side)) return std::nullopt;
            v.value = fields[2];
            v.evidence = fields[3];
            p.values.push_back(std::move(v));
        }
    }
    if (!attr_seen) return std::nullopt;
    return p;
}

std::string render_payload(const CritiquePayload& p) {
    std::string out;
    field_line(out, "SCOPE", p.scope);
    field_line(out, "ENTITY_A", p.entity_a);
    field_line(out, "ENTITY_B", p.entity_b);
    if (!p.own_entity.empty()) field_line(out, "OWN", p.own_entity);
    for (const auto& item : p.extract_items) {
        out += "E\t" + std::to_string(item.index) + '\t' + grammar_field(item.attribute) + '\t' +
               grammar_field(item.value) + '\t' + grammar_field(item.evidence) + '\n';
    }
    for (const auto& row : p.rows) {
        out += "R\t" + std::to_string(row.index) + '\t' + grammar_field(row.attribute) + '\t' +
               to_string(row.contrast_level) + '\n';
    }
    for (const auto& v : p.row_values) {
        out += "RV\t" + std::to_string(v.row_index) + '\t';
        out += v.side;
        out += '\t' + std::to_string(v.value_index) + '\t' + grammar_field(v.value) + '\t' +
               grammar_field(v.evidence) + '\n';
    }
    return out;
}

std::optional<CritiquePayload> parse_critique_payload(const std::string& text) {
    CritiquePayload p;
    bool scope_seen = false;
    for (const auto& line : split_lines(text)) {
        auto head = split_tabs(line, 2);
        if (head.size() != 2) continue;
        if (head[0] == "SCOPE") {
            p.scope = trim(head[1]);
            scope_seen = true;
        } else if (head[0] == "ENTITY_A") {
            p.entity_a = head[1];
        } else if (head[0] == "ENTITY_B") {
            p.entity_b = head[1];
        } else if (head[0] == "OWN") {
            p.own_entity = head[1];
        } else if (head[0] == "E") {
            auto fields = split_tabs(line, 5);
            if (fields.size() != 5) return std::nullopt;
            CritiqueExtractItem item;
            if (!parse_int(fields[1], item.index)) return std::nullopt;
            item.attribute = fields[2];
            item.value = fields[3];
            item.evidence = fields[4];
            p.extract_items.push_back(std::move(item));
        } else if (head[0] == "R") {
            auto fields = split_tabs(line, 4);
            if (fields.size() != 4) return std::nullopt;
            CritiqueCompareRow row;
            if (!parse_int(fields[1], row.index)) return std::nullopt;
            row.attribute = fields[2];
            try {
                row.contrast_level = contrast_level_from_string(trim(fields[3]));
            } catch (...) {
                return std::nullopt;
            }
            p.rows.push_back(std::move(row));
        } else if (head[0] == "RV") {
            auto fields = split_tabs(line, 6);
            if (fields.size() != 6) return std::nullopt;
            CritiqueCompareValue v;
            if (!parse_int(fields[1], v.row_index)) return std::nullopt;
            if (!parse_side(fields[2], v.side)) return std::nullopt;
            if (!parse_int(fields[3], v.value_index)) return std::nullopt;
            v.value = fields[4];
            v.evidence = fields[5];
            p.row_values.push_back(std::move(v));
        }
    }
    if (!scope_seen || (p.scope != "EXTRACT" && p.scope != "COMPARE")) return std::nullopt;
    return p;
}

std::string render_payload(const RevisePayload& p) {
    std::string out;
    field_line(out, "KIND", p.kind);
    field_line(out, "ENTITY", p.entity_name);
    field_line(out, "ATTR", p.attribute);
    field_line(out, "VALUE", p.value);
    field_line(out, "EVIDENCE", p.evidence);
    for (const auto& s : p.sources) field_line(out, "SRC", s);
    return out;
}

std::optional<RevisePayload> parse_revise_payload(const std::string& text) {
    RevisePayload p;
    bool kind_seen = false;
    for (const auto& line : split_lines(text)) {
        auto fields = split_tabs(line, 2);
        if (fields.size() != 2) continue;
        if (fields[0] == "KIND") {
            p.kind = trim(fields[1]);
            kind_seen = true;
        } else if (fields[0] == "ENTITY") {
            p.entity_name = fields[1];
        } else if (fields[0] == "ATTR") {
            p.attribute = fields[1];
        } else if (fields[0] == "VALUE") {
            p.value = fields[1];
        } else if (fields[0] == "EVIDENCE") {
            p.evidence = fields[1];
        } else if (fields[0] == "SRC") {
            p.sources.push_back(fields[1]);
        }
    }
    if (!kind_seen) return std::nullopt;
    return p;
}

std::optional<std::string> payload_block(const std::string& prompt) {
    auto lines = split_lines(prompt);
    std::string block;
    bool inside = false;
    bool found = false;
    for (const auto& line : lines) {
        if (!inside && trim(line) == "<<<") {
            inside = true;
            found = true;
            continue;
        }
        if (inside && trim(line) == ">>>") {
            inside = false;
            continue;
        }
        if (inside) {
            block += line;
            block += '\n';
        }
    }
    if (!found) return std::nullopt;
    return block;
}

}  // namespace versus
