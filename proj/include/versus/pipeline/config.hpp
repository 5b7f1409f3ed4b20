#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "versus/ingest/tiling.hpp"

namespace versus {

struct RankWeights {
    double contrast = 0.5;
    double popularity = 0.5;
};

struct PipelineConfig {
    TokenBudget budget;
    int webpages_per_entity = 10;   // intended retrieval depth, 5-20
    bool cr_enabled = true;
    int cr_max_iterations = 3;
    // A conflicting minority group is dropped when the majority group holds
    // strictly more than this share of their combined support. 0.5 means
    // strict majority; an exact tie keeps both groups.
    double majority_threshold = 0.5;
    RankWeights rank_weights;
    int top_k_rows = 10;

    bool parallel = false;  // OpenMP over tiles/clusters/rows
    int max_parallel = 8;   // gateway in-flight bound
    std::uint64_t seed = 0;
    std::string prompts_dir;  // empty = built-in templates

    void validate() const;  // throws ConfigError
    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& j);
    std::string hash() const;
};

}  // namespace versus
