#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "versus/distill/format.hpp"

namespace versus {

// Sampling weights across the three exported tasks. The defaults reflect the
// 30:1:30 task mixture (row-level extract/compare vs summary-level merge).
struct TaskMix {
    double extract = 30.0;
    double attribute_merge = 1.0;
    double compare = 30.0;
};

struct ExportResult {
    int written = 0;
    std::map<std::string, int> per_task;
    std::vector<std::string> warnings;  // shortfalls, skipped records
};

// Largest-remainder apportionment of target_count over the mix weights.
// Order: EXTRACT, ATTRIBUTE_MERGE, COMPARE.
std::vector<int> apportion(const TaskMix& mix, int target_count);

// Samples examples per task (without replacement, deterministic under seed)
// from the given pools and writes JSON-lines to out. A task short of its
// quota yields a warning; other tasks are not inflated.
ExportResult export_training_mix(const std::vector<DistillRecord>& pool, const TaskMix& mix,
                                 int target_count, std::uint64_t seed, std::ostream& out);

// Reads distill.jsonl artifacts from completed run directories.
std::vector<DistillRecord> load_run_records(const std::vector<std::filesystem::path>& run_dirs,
                                            std::vector<std::string>* warnings = nullptr);

}  // namespace versus
