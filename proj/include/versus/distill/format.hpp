#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "versus/core/types.hpp"

namespace versus {

// One supervised training example exported from a completed run. target_text
// is always the post-revision stage output in that task's grammar.
struct DistillRecord {
    std::string task;  // EXTRACT | ATTRIBUTE_MERGE | COMPARE
    std::string input_text;
    std::string target_text;
    std::string run_id;
    std::string trace_digest;

    nlohmann::json to_json() const;
    static DistillRecord from_json(const nlohmann::json& j);

    bool operator==(const DistillRecord&) const = default;
};

// COMPARE task grammar: one ROW line followed by its VAL lines.
//   ROW<TAB>attribute<TAB>HIGH|LOW|NONE
//   VAL<TAB>side<TAB>value<TAB>support
struct CompareExample {
    std::string attribute;
    ContrastLevel level = ContrastLevel::NONE;
    std::vector<ValueEntry> cell_a;  // evidence/urls not carried in the grammar
    std::vector<ValueEntry> cell_b;

    bool operator==(const CompareExample&) const = default;
};

std::string render_compare_example(const ComparisonRow& row);
std::optional<CompareExample> parse_compare_example(const std::string& text);

// Grammar check used at export time: does target_text parse for this task?
bool target_parses(const std::string& task, const std::string& target_text);

}  // namespace versus
