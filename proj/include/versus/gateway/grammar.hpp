#pragma once

#include <string>
#include <variant>
#include <vector>

#include "versus/core/types.hpp"
#include "versus/gateway/stage.hpp"

// Line-oriented record grammar for structured stage output. Renderers and
// parsers are exact inverses; parsers additionally tolerate prose lines
// around the records. The full grammar is documented in docs/stage_grammar.md.
namespace versus {

struct ExtractionRecord {
    std::string attribute;
    std::string value;
    std::string evidence;

    bool operator==(const ExtractionRecord&) const = default;
};

// EXTRACT: one `ATTR<TAB>VALUE<TAB>EVIDENCE` line per item.
struct StructuredExtractionList {
    std::vector<ExtractionRecord> items;

    bool operator==(const StructuredExtractionList&) const = default;
};

// ATTRIBUTE_MERGE: `CLUSTER<TAB>member...` lines, the center marked with '*'.
struct AttributeGroup {
    std::string center;
    std::vector<std::string> members;  // includes the center

    bool operator==(const AttributeGroup&) const = default;
};

struct AttributeMergeResult {
    std::vector<AttributeGroup> groups;

    bool operator==(const AttributeMergeResult&) const = default;
};

// VALUE_MERGE: `GROUP<TAB>side<TAB>rep<TAB>i,j,...` plus
// `CONFLICT<TAB>side<TAB>g,h` lines. Indices are 1-based and refer to the
// payload's per-entity value numbering; conflict indices refer to groups in
// emission order per side.
struct ValueGroupRecord {
    char side = 'A';
    int rep_index = 1;
    std::vector<int> member_indices;

    bool operator==(const ValueGroupRecord&) const = default;
};

struct ValueConflictRecord {
    char side = 'A';
    int group_i = 1;
    int group_j = 2;

    bool operator==(const ValueConflictRecord&) const = default;
};

struct ValueMergeResult {
    std::vector<ValueGroupRecord> groups;
    std::vector<ValueConflictRecord> conflicts;

    bool operator==(const ValueMergeResult&) const = default;
};

// CONTRAST: `ROW<TAB>attribute<TAB>HIGH|LOW|NONE<TAB>rank_hint` lines.
struct ContrastRecord {
    std::string attribute;
    ContrastLevel level = ContrastLevel::NONE;
    int rank_hint = 0;

    bool operator==(const ContrastRecord&) const = default;
};

struct ContrastResult {
    std::vector<ContrastRecord> rows;

    bool operator==(const ContrastResult&) const = default;
};

// USEFULNESS and AUTORATE: a single `RATING: <LABEL>` line.
struct RatingResult {
    std::string label;

    bool operator==(const RatingResult&) const = default;
};

// CRITIQUE: `CRITIQUE<TAB>KIND<TAB>TARGET<TAB>NOTE` lines.
struct CritiqueRecord {
    std::string kind;
    std::string target;
    std::string note;

    bool operator==(const CritiqueRecord&) const = default;
};

struct CritiqueResult {
    std::vector<CritiqueRecord> items;

    bool operator==(const CritiqueResult&) const = default;
};

// REVISE: replacement extraction records, same line shape as EXTRACT.
struct ReviseResult {
    std::vector<ExtractionRecord> items;

    bool operator==(const ReviseResult&) const = default;
};

using StageOutput = std::variant<StructuredExtractionList, AttributeMergeResult, ValueMergeResult,
                                 ContrastResult, RatingResult, CritiqueResult, ReviseResult>;

// Parses raw backend text for a stage; throws ParseError (carrying the raw
// text) when no well-formed record is found.
StageOutput parse_stage_output(StageTag tag, const std::string& raw);

// Exact inverse of parse_stage_output for round-tripping and for the offline
// backend's emission path. Tab and newline characters inside fields are
// replaced by spaces (fields are single-line by contract).
std::string render_stage_output(StageTag tag, const StageOutput& value);

// Field sanitizer used by all renderers.
std::string grammar_field(std::string_view field);

}  // namespace versus
