#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "versus/core/types.hpp"
#include "versus/gateway/stage.hpp"

// Structured payloads embedded in stage prompts between the <<< / >>> fence
// lines. The engine renders them; the offline backend parses them back. Like
// the output grammar, records are tab-separated single-line fields.
namespace versus {

struct ExtractPayload {
    std::string entity_name;
    std::vector<std::string> sentences;

    bool operator==(const ExtractPayload&) const = default;
};

struct AttributeMergePayload {
    std::string entity_a;
    std::string entity_b;
    std::vector<std::string> attributes;

    bool operator==(const AttributeMergePayload&) const = default;
};

struct ValueMergePayload {
    std::string attribute;
    std::vector<std::string> values_a;
    std::vector<std::string> values_b;

    bool operator==(const ValueMergePayload&) const = default;
};

struct ContrastValue {
    char side = 'A';
    std::string value;
    int support = 1;

    bool operator==(const ContrastValue&) const = default;
};

struct ContrastPayloadRow {
    std::string attribute;
    std::vector<ContrastValue> values;

    bool operator==(const ContrastPayloadRow&) const = default;
};

struct ContrastPayload {
    std::vector<ContrastPayloadRow> rows;

    bool operator==(const ContrastPayload&) const = default;
};

struct UsefulnessPayload {
    std::string entity_a;
    std::string entity_b;
    std::string attribute;
    std::vector<std::string> values_a;
    std::vector<std::string> values_b;

    bool operator==(const UsefulnessPayload&) const = default;
};

struct RatedValue {
    char side = 'A';
    std::string value;
    std::string evidence;

    bool operator==(const RatedValue&) const = default;
};

struct AutoratePayload {
    std::string entity_a;
    std::string entity_b;
    std::string attribute;
    ContrastLevel contrast_level = ContrastLevel::NONE;
    std::vector<RatedValue> values;

    bool operator==(const AutoratePayload&) const = default;
};

struct CritiqueExtractItem {
    int index = 1;  // 1-based, target "E<index>"
    std::string attribute;
    std::string value;
    std::string evidence;

    bool operator==(const CritiqueExtractItem&) const = default;
};

struct CritiqueCompareValue {
    int row_index = 1;
    char side = 'A';
    int value_index = 1;  // target "R<row>.<side><value_index>"
    std::string value;
    std::string evidence;

    bool operator==(const CritiqueCompareValue&) const = default;
};

struct CritiqueCompareRow {
    int index = 1;  // target "R<index>"
    std::string attribute;
    ContrastLevel contrast_level = ContrastLevel::NONE;

    bool operator==(const CritiqueCompareRow&) const = default;
};

struct CritiquePayload {
    std::string scope;  // "EXTRACT" or "COMPARE"
    std::string entity_a;
    std::string entity_b;
    std::string own_entity;  // EXTRACT scope: whose extractions these are
    std::vector<CritiqueExtractItem> extract_items;
    std::vector<CritiqueCompareRow> rows;
    std::vector<CritiqueCompareValue> row_values;

    bool operator==(const CritiquePayload&) const = default;
};

struct RevisePayload {
    std::string kind;
    std::string entity_name;
    std::string attribute;
    std::string value;
    std::string evidence;
    std::vector<std::string> sources;  // relevant corpus sentences

    bool operator==(const RevisePayload&) const = default;
};

std::string render_payload(const ExtractPayload&);
std::string render_payload(const AttributeMergePayload&);
std::string render_payload(const ValueMergePayload&);
std::string render_payload(const ContrastPayload&);
std::string render_payload(const UsefulnessPayload&);
std::string render_payload(const AutoratePayload&);
std::string render_payload(const CritiquePayload&);
std::string render_payload(const RevisePayload&);

// Parsers return nullopt on malformed payloads.
std::optional<ExtractPayload> parse_extract_payload(const std::string& text);
std::optional<AttributeMergePayload> parse_attribute_merge_payload(const std::string& text);
std::optional<ValueMergePayload> parse_value_merge_payload(const std::string& text);
std::optional<ContrastPayload> parse_contrast_payload(const std::string& text);
std::optional<UsefulnessPayload> parse_usefulness_payload(const std::string& text);
std::optional<AutoratePayload> parse_autorate_payload(const std::string& text);
std::optional<CritiquePayload> parse_critique_payload(const std::string& text);
std::optional<RevisePayload> parse_revise_payload(const std::string& text);

// Extracts the fenced payload block from a full prompt (lines between a line
// equal to "<<<" and a line equal to ">>>"). Empty optional when absent.
std::optional<std::string> payload_block(const std::string& prompt);

}  // namespace versus
