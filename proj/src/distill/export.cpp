#include "versus/distill/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "versus/core/errors.hpp"

namespace versus {

namespace {

const char* kTaskOrder[] = {"EXTRACT", "ATTRIBUTE_MERGE", "COMPARE"};

// Deterministic Fisher-Yates; mt19937_64 output is standard-fixed, and the
// index draw avoids distribution implementation differences.
template <typename T>
void shuffle_deterministic(std::vector<T>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace

std::vector<int> apportion(const TaskMix& mix, int target_count) {
    const double weights[] = {mix.extract, mix.attribute_merge, mix.compare};
    double total = weights[0] + weights[1] + weights[2];
    if (total <= 0.0) throw ConfigError("export: task mix weights must be positive");
    if (target_count < 0) throw ConfigError("export: target_count must be >= 0");

    std::vector<int> counts(3, 0);
    std::vector<std::pair<double, int>> remainders;  // (fraction, task index)
    int assigned = 0;
    for (int t = 0; t < 3; ++t) {
        double ideal = target_count * weights[t] / total;
        counts[static_cast<std::size_t>(t)] = static_cast<int>(std::floor(ideal));
        assigned += counts[static_cast<std::size_t>(t)];
        remainders.push_back({ideal - std::floor(ideal), t});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int extra = target_count - assigned, i = 0; extra > 0; --extra, ++i) {
        counts[static_cast<std::size_t>(remainders[static_cast<std::size_t>(i % 3)].second)] += 1;
    }
    return counts;
}

ExportResult export_training_mix(const std::vector<DistillRecord>& pool, const TaskMix& mix,
                                 int target_count, std::uint64_t seed, std::ostream& out) {
    ExportResult result;
    std::map<std::string, std::vector<DistillRecord>> by_task;
    for (const auto& rec : pool) {
        if (!target_parses(rec.task, rec.target_text)) {
            result.warnings.push_back("record skipped (target does not parse): task " + rec.task);
            continue;
        }
        by_task[rec.task].push_back(rec);
    }

    std::vector<int> quotas = apportion(mix, target_count);
    for (int t = 0; t < 3; ++t) {
        const std::string task = kTaskOrder[t];
        int quota = quotas[static_cast<std::size_t>(t)];
        auto& candidates = by_task[task];
        // distinct per-task stream so adding one task never reshuffles others
        shuffle_deterministic(candidates, seed * 1000003ULL + static_cast<std::uint64_t>(t));
        if (static_cast<int>(candidates.size()) < quota) {
            result.warnings.push_back("task " + task + " short of quota: have " +
                                      std::to_string(candidates.size()) + ", want " +
                                      std::to_string(quota));
            quota = static_cast<int>(candidates.size());
        }
        for (int i = 0; i < quota; ++i) {
            out << candidates[static_cast<std::size_t>(i)].to_json().dump() << "\n";
            ++result.written;
            ++result.per_task[task];
        }
    }
    return result;
}

std::vector<DistillRecord> load_run_records(const std::vector<std::filesystem::path>& run_dirs,
                                            std::vector<std::string>* warnings) {
    std::vector<DistillRecord> records;
    for (const auto& dir : run_dirs) {
        auto path = dir / "distill.jsonl";
        std::ifstream in(path);
        if (!in) {
            if (warnings) warnings->push_back("no distill.jsonl under " + dir.string());
            continue;
        }
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto parsed = nlohmann::json::parse(line, nullptr, false);
            if (parsed.is_discarded()) {
                if (warnings)
                    warnings->push_back(path.string() + ":" + std::to_string(line_no) +
                                        ": malformed JSON line skipped");
                continue;
            }
            try {
                records.push_back(DistillRecord::from_json(parsed));
            } catch (const nlohmann::json::exception& e) {
                if (warnings)
                    warnings->push_back(path.string() + ":" + std::to_string(line_no) + ": " +
                                        e.what());
            }
        }
    }
    return records;
}

}  // namespace versus
