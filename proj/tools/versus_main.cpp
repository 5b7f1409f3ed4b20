// versus: attributed A-vs-B comparison tables from a document corpus.
//
// Subcommands: run (build a summary), eval (score a run), bench (throughput),
// export (training-data JSONL). Exit codes: 0 ok, 2 config/usage, 3 corpus,
// 4 gateway, 5 stage failure, 6 eval input, 7 empty export.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "versus/core/digest.hpp"
#include "versus/core/errors.hpp"
#include "versus/core/json_codec.hpp"
#include "versus/distill/export.hpp"
#include "versus/eval/bench.hpp"
#include "versus/eval/metrics.hpp"
#include "versus/gateway/backend.hpp"
#include "versus/gateway/gateway.hpp"
#include "versus/gateway/remote.hpp"
#include "versus/pipeline/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCorpus = 3;
constexpr int kExitGateway = 4;
constexpr int kExitStage = 5;
constexpr int kExitEvalInput = 6;
constexpr int kExitEmptyExport = 7;

struct BackendOptions {
    std::string backend = "det";
    std::string endpoint;
    int timeout_ms = 30000;
    int max_parallel = 8;
    double rate_per_sec = 0.0;
};

void add_backend_options(CLI::App* cmd, BackendOptions& opts) {
    cmd->add_option("--backend", opts.backend, "completion backend")
        ->check(CLI::IsMember({"det", "remote"}));
    cmd->add_option("--endpoint", opts.endpoint, "remote endpoint url");
    cmd->add_option("--timeout-ms", opts.timeout_ms, "remote timeout");
    cmd->add_option("--max-parallel", opts.max_parallel, "max in-flight requests");
    cmd->add_option("--rate", opts.rate_per_sec, "remote rate limit (requests/sec, 0 = off)");
}

versus::Gateway make_gateway(const BackendOptions& opts, int context_window) {
    std::shared_ptr<versus::CompletionBackend> backend;
    if (opts.backend == "remote") {
        versus::RemoteConfig rc;
        rc.endpoint_url = opts.endpoint;
        rc.timeout_ms = opts.timeout_ms;
        rc.rate_per_sec = opts.rate_per_sec;
        backend = versus::make_remote_backend(rc);
    } else {
        backend = versus::make_deterministic_backend();
    }
    versus::GatewayConfig gc;
    gc.context_window = context_window;
    gc.max_parallel = opts.max_parallel;
    return versus::Gateway(std::move(backend), gc);
}

versus::PromptLibrary make_prompts(const std::string& dir) {
    return dir.empty() ? versus::PromptLibrary::embedded()
                       : versus::PromptLibrary::from_dir(dir);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw versus::ConfigError("cannot write " + path.string());
    out << text;
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int map_error(const std::exception& e) {
    if (dynamic_cast<const versus::ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const versus::CorpusError*>(&e)) return kExitCorpus;
    if (dynamic_cast<const versus::GatewayError*>(&e)) return kExitGateway;
    if (dynamic_cast<const versus::ParseError*>(&e)) return kExitStage;
    if (dynamic_cast<const versus::StageError*>(&e)) return kExitStage;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitConfig;
    return kExitStage;
}

// ---- run ----------------------------------------------------------------

struct RunArgs {
    std::string corpus;
    std::string a;
    std::string b;
    std::string cr = "on";
    int top_k = 10;
    std::uint64_t seed = 0;
    std::string out_dir = "runs";
    std::string run_id;
    std::string prompts_dir;
    bool parallel = false;
    BackendOptions backend;
    versus::PipelineConfig config;
};

int cmd_run(RunArgs& args) {
    try {
        args.config.cr_enabled = args.cr == "on";
        args.config.top_k_rows = args.top_k;
        args.config.seed = args.seed;
        args.config.parallel = args.parallel;
        args.config.max_parallel = args.backend.max_parallel;
        args.config.prompts_dir = args.prompts_dir;
        args.config.validate();

        auto gateway = make_gateway(args.backend, args.config.budget.context_window);
        auto prompts = make_prompts(args.prompts_dir);

        versus::Corpus corpus = versus::load_corpus(args.corpus);
        std::string corpus_digest = corpus.digest();
        versus::RunResult result = versus::run_pipeline_on(
            std::move(corpus), args.a, args.b, args.config, gateway, prompts);

        std::string run_id = args.run_id;
        if (run_id.empty()) {
            run_id = versus::digest_hex(corpus_digest + args.config.hash() +
                                        gateway.backend_id() + args.a + "|" + args.b);
        }
        auto dir = std::filesystem::path(args.out_dir) / run_id;
        std::filesystem::create_directories(dir);

        nlohmann::json summary_json = result.summary;
        write_text(dir / "summary.json", summary_json.dump(2) + "\n");
        write_text(dir / "summary.md", versus::render_summary_markdown(result.summary));

        std::string traces;
        for (const auto& t : result.trace.entries()) traces += t.to_json().dump() + "\n";
        write_text(dir / "traces.jsonl", traces);

        std::string audit;
        for (const auto& rec : result.cr_audit) audit += rec.dump() + "\n";
        write_text(dir / "cr_audit.jsonl", audit);

        std::string distill;
        for (auto rec : result.distill) {
            rec.run_id = run_id;
            distill += rec.to_json().dump() + "\n";
        }
        write_text(dir / "distill.jsonl", distill);

        nlohmann::json manifest{
            {"run_id", run_id},
            {"created_at", iso_timestamp()},
            {"entity_a", result.summary.entity_a.display_name},
            {"entity_b", result.summary.entity_b.display_name},
            {"backend_id", gateway.backend_id()},
            {"corpus_digest", corpus_digest},
            {"config", args.config.to_json()},
            {"artifacts",
             {{"summary", "summary.json"},
              {"summary_markdown", "summary.md"},
              {"traces", "traces.jsonl"},
              {"cr_audit", "cr_audit.jsonl"},
              {"distill", "distill.jsonl"}}},
            {"warnings", result.trace.warnings()},
        };
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");

        std::cout << "run " << run_id << ": " << result.summary.rows.size() << " rows -> "
                  << (dir / "summary.json").string() << "\n";
        for (const auto& w : result.trace.warnings()) std::cerr << "warning: " << w << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error(e);
    }
}

// ---- eval ---------------------------------------------------------------

struct EvalArgs {
    std::string run_dir;
    std::string ratings;
    int k = 5;
    bool ok_as_useful = false;
    std::string out;
    BackendOptions backend;
};

int cmd_eval(EvalArgs& args) {
    try {
        auto summary_path = std::filesystem::path(args.run_dir) / "summary.json";
        std::ifstream in(summary_path);
        if (!in) {
            std::cerr << "error: summary artifact not found: " << summary_path.string() << "\n";
            return kExitEvalInput;
        }
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "error: malformed summary artifact: " << e.what() << "\n";
            return kExitEvalInput;
        }
        versus::ComparisonSummary summary = j.get<versus::ComparisonSummary>();

        versus::RatingsTable ratings;
        const versus::RatingsTable* ratings_ptr = nullptr;
        if (!args.ratings.empty()) {
            try {
                ratings = versus::load_ratings_csv(args.ratings);
            } catch (const versus::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitEvalInput;
            }
            ratings_ptr = &ratings;
        }

        auto gateway = make_gateway(args.backend, 8192);
        auto prompts = versus::PromptLibrary::embedded();
        versus::EvalReport report = versus::evaluate_summary(gateway, prompts, summary, args.k,
                                                             args.ok_as_useful, ratings_ptr);

        std::string out_path = args.out.empty()
                                   ? (std::filesystem::path(args.run_dir) / "eval_report.json")
                                         .string()
                                   : args.out;
        write_text(out_path, report.to_json().dump(2) + "\n");
        std::cout << "pct_rows_useful=" << report.pct_rows_useful
                  << " redundancy=" << report.redundancy
                  << " inconsistency=" << report.inconsistency_count << " precision_at_"
                  << report.k << "=" << report.precision_at_k << "\n";
        if (report.agreement.human_human_defined)
            std::cout << "human_human_agreement=" << report.agreement.human_human << "\n";
        if (report.agreement.human_autorater_defined)
            std::cout << "human_autorater_agreement=" << report.agreement.human_autorater << "\n";
        std::cout << "report -> " << out_path << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error(e);
    }
}

// ---- bench --------------------------------------------------------------

struct BenchArgs {
    std::string corpus;
    std::string a;
    std::string b;
    int queries = 20;
    int warmup = 2;
    std::string modes = "serial";
    std::string out;
    std::string cr = "on";
    BackendOptions backend;
};

int cmd_bench(BenchArgs& args) {
    try {
        auto gateway = make_gateway(args.backend, 8192);
        auto prompts = versus::PromptLibrary::embedded();
        versus::PipelineConfig config;
        config.cr_enabled = args.cr == "on";
        config.max_parallel = args.backend.max_parallel;

        std::vector<versus::BenchQuery> queries(
            static_cast<std::size_t>(args.queries),
            versus::BenchQuery{args.a, args.b, args.corpus});

        std::vector<std::string> modes;
        if (args.modes == "both") {
            modes = {"serial", "parallel"};
        } else {
            modes = {args.modes};
        }
        nlohmann::json out = nlohmann::json::array();
        for (const auto& mode : modes) {
            versus::BenchOptions options;
            options.warmup = args.warmup;
            options.parallel = mode == "parallel";
            versus::BenchReport report =
                versus::throughput_bench(queries, config, gateway, prompts, options);
            std::cout << report.to_table() << "\n";
            out.push_back(report.to_json());
        }
        if (!args.out.empty()) write_text(args.out, out.dump(2) + "\n");
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error(e);
    }
}

// ---- export -------------------------------------------------------------

struct ExportArgs {
    std::vector<std::string> runs;
    int target = 61;
    std::uint64_t seed = 0;
    std::string out = "dataset.jsonl";
    std::string mix = "30:1:30";
};

int cmd_export(ExportArgs& args) {
    try {
        versus::TaskMix mix;
        {
            double w[3];
            if (std::sscanf(args.mix.c_str(), "%lf:%lf:%lf", &w[0], &w[1], &w[2]) != 3)
                throw versus::ConfigError("bad --mix, want EXTRACT:ATTRIBUTE_MERGE:COMPARE");
            mix.extract = w[0];
            mix.attribute_merge = w[1];
            mix.compare = w[2];
        }
        std::vector<std::filesystem::path> dirs(args.runs.begin(), args.runs.end());
        std::vector<std::string> warnings;
        auto pool = versus::load_run_records(dirs, &warnings);

        std::ofstream out(args.out);
        if (!out) throw versus::ConfigError("cannot write " + args.out);
        auto result = versus::export_training_mix(pool, mix, args.target, args.seed, out);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "wrote " << result.written << " examples to " << args.out;
        for (const auto& [task, count] : result.per_task)
            std::cout << " " << task << "=" << count;
        std::cout << "\n";
        if (result.written == 0 && args.target > 0) return kExitEmptyExport;
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error(e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attributed A-vs-B comparison summaries from a document corpus"};
    app.require_subcommand(1);
    app.set_config("--config", "", "declarative config file (key = value; flags win)");

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "build a comparison summary");
    run->add_option("--corpus", run_args.corpus, "corpus manifest path")->required();
    run->add_option("--a", run_args.a, "first entity (id or display name)")->required();
    run->add_option("--b", run_args.b, "second entity")->required();
    run->add_option("--cr", run_args.cr, "critique-and-revision loop")
        ->check(CLI::IsMember({"on", "off"}));
    run->add_option("--top-k", run_args.top_k, "rows kept in the final summary");
    run->add_option("--seed", run_args.seed, "run seed");
    run->add_option("--out", run_args.out_dir, "runs directory");
    run->add_option("--run-id", run_args.run_id, "override the content-addressed run id");
    run->add_option("--prompts-dir", run_args.prompts_dir, "prompt template directory");
    run->add_flag("--parallel", run_args.parallel, "parallelize data-parallel stages");
    run->add_option("--context-window", run_args.config.budget.context_window,
                    "model context window (tokens)");
    run->add_option("--prompt-reserve", run_args.config.budget.prompt_reserve,
                    "tokens reserved for instructions");
    run->add_option("--webpages-per-entity", run_args.config.webpages_per_entity,
                    "intended documents per entity (5-20)");
    run->add_option("--cr-max-iterations", run_args.config.cr_max_iterations,
                    "critique loop bound");
    run->add_option("--majority-threshold", run_args.config.majority_threshold,
                    "conflict drop threshold");
    add_backend_options(run, run_args.backend);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate a completed run");
    eval->add_option("--run", eval_args.run_dir, "run directory")->required();
    eval->add_option("--ratings", eval_args.ratings, "human ratings CSV");
    eval->add_option("--k", eval_args.k, "precision cutoff");
    eval->add_flag("--ok-as-useful", eval_args.ok_as_useful, "count OK rows as useful");
    eval->add_option("--out", eval_args.out, "report path (default: run dir)");
    add_backend_options(eval, eval_args.backend);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "throughput benchmark");
    bench->add_option("--corpus", bench_args.corpus, "corpus manifest path")->required();
    bench->add_option("--a", bench_args.a, "first entity")->required();
    bench->add_option("--b", bench_args.b, "second entity")->required();
    bench->add_option("--queries", bench_args.queries, "number of queries");
    bench->add_option("--warmup", bench_args.warmup, "warm-up runs excluded from the rate");
    bench->add_option("--modes", bench_args.modes, "serial, parallel or both")
        ->check(CLI::IsMember({"serial", "parallel", "both"}));
    bench->add_option("--cr", bench_args.cr, "critique loop during bench")
        ->check(CLI::IsMember({"on", "off"}));
    bench->add_option("--out", bench_args.out, "JSON report path");
    add_backend_options(bench, bench_args.backend);

    ExportArgs export_args;
    auto* exp = app.add_subcommand("export", "export training examples as JSONL");
    exp->add_option("--runs", export_args.runs, "completed run directories")
        ->required()
        ->delimiter(',');
    exp->add_option("--target", export_args.target, "total examples to export");
    exp->add_option("--seed", export_args.seed, "sampling seed");
    exp->add_option("--out", export_args.out, "output JSONL path");
    exp->add_option("--mix", export_args.mix, "task mix weights EXTRACT:MERGE:COMPARE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) return cmd_run(run_args);
    if (eval->parsed()) return cmd_eval(eval_args);
    if (bench->parsed()) return cmd_bench(bench_args);
    if (exp->parsed()) return cmd_export(export_args);
    return kExitConfig;
}
