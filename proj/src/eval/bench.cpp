#include "versus/eval/bench.hpp"

#include <chrono>
#include <sstream>

#include "versus/core/errors.hpp"
#include "versus/pipeline/run.hpp"

namespace versus {

namespace {

using Clock = std::chrono::steady_clock;

const std::int64_t kBucketBounds[] = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000};

std::vector<LatencyBucket> build_histogram(const std::vector<std::int64_t>& latencies) {
    std::vector<LatencyBucket> buckets;
    for (std::int64_t bound : kBucketBounds) buckets.push_back({bound, 0});
    buckets.push_back({-1, 0});  // overflow
    for (std::int64_t ms : latencies) {
        bool placed = false;
        for (auto& b : buckets) {
            if (b.upper_ms > 0 && ms < b.upper_ms) {
                ++b.count;
                placed = true;
                break;
            }
        }
        if (!placed) ++buckets.back().count;
    }
    return buckets;
}

}  // namespace

nlohmann::json BenchReport::to_json() const {
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& b : histogram) {
        hist.push_back({{"upper_ms", b.upper_ms}, {"count", b.count}});
    }
    return nlohmann::json{
        {"mode", mode},
        {"summaries_per_sec", summaries_per_sec},
        {"measured", measured},
        {"failures", failures},
        {"wall_ms", wall_ms},
        {"latency_histogram", hist},
        {"stage_totals_ms", stage_totals_ms},
        {"warnings", warnings},
    };
}

std::string BenchReport::to_table() const {
    std::ostringstream out;
    out << "mode: " << mode << "\n";
    out << "summaries/sec: " << summaries_per_sec << "  (measured " << measured << ", failures "
        << failures << ", wall " << wall_ms << " ms)\n";
    out << "per-stage totals:\n";
    for (const auto& [stage, ms] : stage_totals_ms) {
        out << "  " << stage << ": " << ms << " ms\n";
    }
    out << "latency histogram (ms):\n";
    for (const auto& b : histogram) {
        if (b.count == 0) continue;
        if (b.upper_ms > 0)
            out << "  < " << b.upper_ms << ": " << b.count << "\n";
        else
            out << "  >= " << kBucketBounds[sizeof(kBucketBounds) / sizeof(*kBucketBounds) - 1]
                << ": " << b.count << "\n";
    }
    return out.str();
}

BenchReport throughput_bench(const std::vector<BenchQuery>& queries, PipelineConfig config,
                             Gateway& gateway, const PromptLibrary& prompts,
                             const BenchOptions& options) {
    if (queries.empty()) throw ConfigError("bench: no queries");
    config.parallel = options.parallel;

    BenchReport report;
    report.mode = options.parallel ? "parallel" : "serial";

    // corpora load outside the measured window
    std::map<std::string, Corpus> corpora;
    for (const auto& q : queries) {
        std::string key = q.corpus_path.string();
        if (!corpora.count(key)) corpora.emplace(key, load_corpus(q.corpus_path));
    }

    int warmup = std::min<int>(options.warmup, static_cast<int>(queries.size()));
    for (int i = 0; i < warmup; ++i) {
        const auto& q = queries[static_cast<std::size_t>(i)];
        try {
            run_pipeline_on(corpora.at(q.corpus_path.string()), q.entity_a, q.entity_b, config,
                            gateway, prompts);
        } catch (const Error&) {
            // warm-up failures surface again in the measured window
        }
    }
    if (warmup >= static_cast<int>(queries.size()))
        throw ConfigError("bench: no queries left after warm-up exclusion");

    std::vector<std::int64_t> latencies;
    auto window_start = Clock::now();
    for (std::size_t i = static_cast<std::size_t>(warmup); i < queries.size(); ++i) {
        const auto& q = queries[i];
        auto start = Clock::now();
        try {
            RunResult run = run_pipeline_on(corpora.at(q.corpus_path.string()), q.entity_a,
                                            q.entity_b, config, gateway, prompts);
            latencies.push_back(std::chrono::duration_cast<std::chrono::milliseconds>(
                                    Clock::now() - start)
                                    .count());
            for (const auto& t : run.trace.entries())
                report.stage_totals_ms[to_string(t.stage)] += t.duration_ms;
            ++report.measured;
        } catch (const Error& e) {
            ++report.failures;
            report.warnings.push_back("query " + std::to_string(i) + " failed: " + e.what());
        }
    }
    report.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                                           window_start)
                         .count();
    if (report.measured == 0) throw ConfigError("bench: every measured query failed");
    double seconds = static_cast<double>(report.wall_ms) / 1000.0;
    report.summaries_per_sec =
        seconds > 0.0 ? report.measured / seconds
                      : static_cast<double>(report.measured) * 1000.0;  // sub-ms window
    report.histogram = build_histogram(latencies);
    return report;
}

}  // namespace versus
