#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "versus/gateway/gateway.hpp"
#include "versus/gateway/prompts.hpp"
#include "versus/ingest/corpus.hpp"
#include "versus/pipeline/config.hpp"

namespace versus {

struct BenchQuery {
    std::string entity_a;
    std::string entity_b;
    std::filesystem::path corpus_path;
};

struct BenchOptions {
    int warmup = 2;  // runs excluded from the measured window
    bool parallel = false;
};

struct LatencyBucket {
    std::int64_t upper_ms = 0;  // inclusive upper bound; 0 means "< 1ms"
    int count = 0;
};

struct BenchReport {
    std::string mode;  // "serial" or "parallel"
    double summaries_per_sec = 0.0;
    int measured = 0;
    int failures = 0;
    std::int64_t wall_ms = 0;
    std::vector<LatencyBucket> histogram;
    std::map<std::string, std::int64_t> stage_totals_ms;  // per-stage latency breakdown
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    std::string to_table() const;
};

// Wall-clock summaries/second over the post-warmup window. Failed runs are
// counted, excluded from the rate, and reported as warnings. Throws when no
// query survives warm-up exclusion.
BenchReport throughput_bench(const std::vector<BenchQuery>& queries, PipelineConfig config,
                             Gateway& gateway, const PromptLibrary& prompts,
                             const BenchOptions& options = {});

}  // namespace versus
