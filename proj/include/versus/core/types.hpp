#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace versus {

// One of the two options being compared.
struct Entity {
    std::string id;
    std::string display_name;

    bool operator==(const Entity&) const = default;
};

// An essential sentence, verbatim from its document at char_offset.
struct Sentence {
    std::string text;
    std::string doc_url;
    std::size_t char_offset = 0;
    int token_count = 0;

    bool operator==(const Sentence&) const = default;
};

struct SourceDocument {
    std::string url;
    std::string entity_id;
    int search_rank = 1;  // 1 = top result
    std::string raw_text;
    std::vector<Sentence> essential_sentences;

    bool operator==(const SourceDocument&) const = default;
};

// The atomic unit of attribution: one (attribute, value) pair with its
// verbatim evidence span. value is a substring of evidence, evidence a
// substring of the source document.
struct Extraction {
    std::string attribute;
    std::string value;
    std::string evidence;
    std::string source_url;
    std::string entity_id;
    std::string tile_id;

    bool operator==(const Extraction&) const = default;
};

// A kept value group inside a summary cell. evidence_spans[i] comes from the
// document at source_urls[i]; support_count is the number of backing
// extractions.
struct ValueEntry {
    std::string value;
    std::vector<std::string> evidence_spans;
    std::vector<std::string> source_urls;
    int support_count = 1;

    bool operator==(const ValueEntry&) const = default;
};

// A merged attribute with per-entity values. Extraction lists hold raw
// provenance; merged_a/merged_b are filled by the value-merge stage.
struct AttributeCluster {
    std::string canonical_attribute;
    std::vector<std::string> member_attributes;
    std::vector<Extraction> values_a;
    std::vector<Extraction> values_b;
    std::vector<ValueEntry> merged_a;
    std::vector<ValueEntry> merged_b;

    bool operator==(const AttributeCluster&) const = default;
};

enum class ContrastLevel { HIGH, LOW, NONE };

const char* to_string(ContrastLevel level);
ContrastLevel contrast_level_from_string(const std::string& s);

struct ComparisonRow {
    std::string attribute;
    std::vector<ValueEntry> cell_a;
    std::vector<ValueEntry> cell_b;
    ContrastLevel contrast_level = ContrastLevel::NONE;
    double importance = 0.0;  // popularity: sum of 1/search_rank over supporting docs
    double rank_score = 0.0;

    bool operator==(const ComparisonRow&) const = default;
};

struct RunMetadata {
    std::string backend_id;
    std::string config_hash;
    std::int64_t duration_ms = 0;
    std::vector<std::string> stage_trace_ids;

    bool operator==(const RunMetadata&) const = default;
};

// Final artifact: rows in rank order (rank_score desc, support desc,
// attribute asc), one row per canonical attribute.
struct ComparisonSummary {
    Entity entity_a;
    Entity entity_b;
    std::vector<ComparisonRow> rows;
    RunMetadata run_metadata;

    bool operator==(const ComparisonSummary&) const = default;
};

inline int entry_support(const std::vector<ValueEntry>& cell) {
    int total = 0;
    for (const auto& e : cell) total += e.support_count;
    return total;
}

inline int row_support(const ComparisonRow& row) {
    return entry_support(row.cell_a) + entry_support(row.cell_b);
}

}  // namespace versus
