#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "versus/core/types.hpp"
#include "versus/distill/format.hpp"
#include "versus/gateway/gateway.hpp"
#include "versus/gateway/prompts.hpp"
#include "versus/ingest/corpus.hpp"
#include "versus/pipeline/config.hpp"
#include "versus/pipeline/trace.hpp"

namespace versus {

struct RunResult {
    ComparisonSummary summary;
    TraceLog trace;
    std::vector<nlohmann::json> cr_audit;
    std::vector<DistillRecord> distill;
    Corpus corpus;
};

// Full composition: load -> essential sentences -> tile -> extract (x2, with
// the extraction critique loop when enabled) -> attribute merge -> compare
// (with the comparison critique loop) -> top-k truncation. The produced
// summary always passes validate_summary; a violation is a stage failure.
RunResult run_pipeline(const std::string& entity_a, const std::string& entity_b,
                       const std::filesystem::path& corpus_path, const PipelineConfig& config,
                       Gateway& gateway, const PromptLibrary& prompts);

// Same, over an already-loaded corpus (benchmark and fuzz harnesses).
RunResult run_pipeline_on(Corpus corpus, const std::string& entity_a,
                          const std::string& entity_b, const PipelineConfig& config,
                          Gateway& gateway, const PromptLibrary& prompts);

// Markdown table rendering of a summary (attribute | A | B | sources).
std::string render_summary_markdown(const ComparisonSummary& summary);

}  // namespace versus
