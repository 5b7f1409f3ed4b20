#include "versus/core/json_codec.hpp"

#include "versus/core/errors.hpp"

namespace versus {

const char* to_string(ContrastLevel level) {
    switch (level) {
        case ContrastLevel::HIGH: return "HIGH";
        case ContrastLevel::LOW: return "LOW";
        case ContrastLevel::NONE: return "NONE";
    }
    return "NONE";
}

ContrastLevel contrast_level_from_string(const std::string& s) {
    if (s == "HIGH") return ContrastLevel::HIGH;
    if (s == "LOW") return ContrastLevel::LOW;
    if (s == "NONE") return ContrastLevel::NONE;
    throw ConfigError("unknown contrast level: " + s);
}

void to_json(json& j, const Entity& v) {
    j = json{{"id", v.id}, {"display_name", v.display_name}};
}

void from_json(const json& j, Entity& v) {
    j.at("id").get_to(v.id);
    j.at("display_name").get_to(v.display_name);
}

void to_json(json& j, const Sentence& v) {
    j = json{{"text", v.text},
             {"doc_url", v.doc_url},
             {"char_offset", v.char_offset},
             {"token_count", v.token_count}};
}

void from_json(const json& j, Sentence& v) {
    j.at("text").get_to(v.text);
    j.at("doc_url").get_to(v.doc_url);
    j.at("char_offset").get_to(v.char_offset);
    j.at("token_count").get_to(v.token_count);
}

void to_json(json& j, const SourceDocument& v) {
    j = json{{"url", v.url},
             {"entity_id", v.entity_id},
             {"search_rank", v.search_rank},
             {"raw_text", v.raw_text},
             {"essential_sentences", v.essential_sentences}};
}

void from_json(const json& j, SourceDocument& v) {
    j.at("url").get_to(v.url);
    j.at("entity_id").get_to(v.entity_id);
    j.at("search_rank").get_to(v.search_rank);
    j.at("raw_text").get_to(v.raw_text);
    if (j.contains("essential_sentences")) j.at("essential_sentences").get_to(v.essential_sentences);
}

void to_json(json& j, const Extraction& v) {
    j = json{{"attribute", v.attribute}, {"value", v.value},
             {"evidence", v.evidence},   {"source_url", v.source_url},
             {"entity_id", v.entity_id}, {"tile_id", v.tile_id}};
}

void from_json(const json& j, Extraction& v) {
    j.at("attribute").get_to(v.attribute);
    j.at("value").get_to(v.value);
    j.at("evidence").get_to(v.evidence);
    j.at("source_url").get_to(v.source_url);
    j.at("entity_id").get_to(v.entity_id);
    j.at("tile_id").get_to(v.tile_id);
}

void to_json(json& j, const ValueEntry& v) {
    j = json{{"value", v.value},
             {"evidence_spans", v.evidence_spans},
             {"source_urls", v.source_urls},
             {"support_count", v.support_count}};
}

void from_json(const json& j, ValueEntry& v) {
    j.at("value").get_to(v.value);
    j.at("evidence_spans").get_to(v.evidence_spans);
    j.at("source_urls").get_to(v.source_urls);
    j.at("support_count").get_to(v.support_count);
}

void to_json(json& j, const AttributeCluster& v) {
    j = json{{"canonical_attribute", v.canonical_attribute},
             {"member_attributes", v.member_attributes},
             {"values_a", v.values_a},
             {"values_b", v.values_b},
             {"merged_a", v.merged_a},
             {"merged_b", v.merged_b}};
}

void from_json(const json& j, AttributeCluster& v) {
    j.at("canonical_attribute").get_to(v.canonical_attribute);
    j.at("member_attributes").get_to(v.member_attributes);
    j.at("values_a").get_to(v.values_a);
    j.at("values_b").get_to(v.values_b);
    if (j.contains("merged_a")) j.at("merged_a").get_to(v.merged_a);
    if (j.contains("merged_b")) j.at("merged_b").get_to(v.merged_b);
}

void to_json(json& j, const ComparisonRow& v) {
    j = json{{"attribute", v.attribute},
             {"cell_a", v.cell_a},
             {"cell_b", v.cell_b},
             {"contrast_level", to_string(v.contrast_level)},
             {"importance", v.importance},
             {"rank_score", v.rank_score}};
}

void from_json(const json& j, ComparisonRow& v) {
    j.at("attribute").get_to(v.attribute);
    j.at("cell_a").get_to(v.cell_a);
    j.at("cell_b").get_to(v.cell_b);
    v.contrast_level = contrast_level_from_string(j.at("contrast_level").get<std::string>());
    j.at("importance").get_to(v.importance);
    j.at("rank_score").get_to(v.rank_score);
}

void to_json(json& j, const RunMetadata& v) {
    j = json{{"backend_id", v.backend_id},
             {"config_hash", v.config_hash},
             {"duration_ms", v.duration_ms},
             {"stage_trace_ids", v.stage_trace_ids}};
}

void from_json(const json& j, RunMetadata& v) {
    j.at("backend_id").get_to(v.backend_id);
    j.at("config_hash").get_to(v.config_hash);
    j.at("duration_ms").get_to(v.duration_ms);
    j.at("stage_trace_ids").get_to(v.stage_trace_ids);
}

void to_json(json& j, const ComparisonSummary& v) {
    j = json{{"entity_a", v.entity_a},
             {"entity_b", v.entity_b},
             {"rows", v.rows},
             {"run_metadata", v.run_metadata}};
}

void from_json(const json& j, ComparisonSummary& v) {
    j.at("entity_a").get_to(v.entity_a);
    j.at("entity_b").get_to(v.entity_b);
    j.at("rows").get_to(v.rows);
    j.at("run_metadata").get_to(v.run_metadata);
}

}  // namespace versus
