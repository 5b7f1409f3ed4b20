#pragma once

#include <nlohmann/json.hpp>

#include "versus/core/types.hpp"

// Canonical JSON encoding for every domain type. Field names are snake_case
// and match the struct members; this is the on-disk and inter-module format.
namespace versus {

using nlohmann::json;

void to_json(json& j, const Entity& v);
void from_json(const json& j, Entity& v);

void to_json(json& j, const Sentence& v);
void from_json(const json& j, Sentence& v);

void to_json(json& j, const SourceDocument& v);
void from_json(const json& j, SourceDocument& v);

void to_json(json& j, const Extraction& v);
void from_json(const json& j, Extraction& v);

void to_json(json& j, const ValueEntry& v);
void from_json(const json& j, ValueEntry& v);

void to_json(json& j, const AttributeCluster& v);
void from_json(const json& j, AttributeCluster& v);

void to_json(json& j, const ComparisonRow& v);
void from_json(const json& j, ComparisonRow& v);

void to_json(json& j, const RunMetadata& v);
void from_json(const json& j, RunMetadata& v);

void to_json(json& j, const ComparisonSummary& v);
void from_json(const json& j, ComparisonSummary& v);

}  // namespace versus
