#pragma once

#include <vector>

#include "versus/cr/critique.hpp"
#include "versus/distill/format.hpp"
#include "versus/gateway/gateway.hpp"
#include "versus/gateway/prompts.hpp"
#include "versus/ingest/corpus.hpp"
#include "versus/ingest/tiling.hpp"
#include "versus/pipeline/config.hpp"
#include "versus/pipeline/trace.hpp"

namespace versus {

// The five LM stages over a loaded corpus. Stage outputs are deterministic in
// input order whether or not the data-parallel loops (per tile, per cluster,
// per row) run on OpenMP: work is joined by index and traces are appended
// sequentially after the join.
class PipelineEngine {
  public:
    PipelineEngine(Gateway& gateway, const PromptLibrary& prompts, const PipelineConfig& config,
                   const Corpus& corpus, const Entity& entity_a, const Entity& entity_b,
                   TraceLog& trace);

    // One gateway call per tile; a failed tile is skipped with a warning.
    std::vector<Extraction> lm_extract(const Entity& entity, const std::vector<Tile>& tiles);

    // Consolidates both entities' attributes into clusters (single call).
    std::vector<AttributeCluster> lm_attribute_merge(const std::vector<Extraction>& ex_a,
                                                     const std::vector<Extraction>& ex_b);

    // Groups one cluster's values per entity and drops conflicting minorities
    // under the configured majority threshold.
    AttributeCluster lm_value_merge(AttributeCluster cluster);

    // Labels contrast, computes popularity-based importance and rank order.
    std::vector<ComparisonRow> lm_contrast(const std::vector<AttributeCluster>& clusters);

    // Keeps the useful subsequence; removals recorded in the trace.
    std::vector<ComparisonRow> lm_usefulness(std::vector<ComparisonRow> rows);

    // lm_value_merge* -> lm_contrast -> lm_usefulness, plus the compare-scope
    // critique loop when enabled.
    std::vector<ComparisonRow> lm_compare(std::vector<AttributeCluster> clusters);

    // Extraction-scope critique loop; returns the revised extraction list.
    std::vector<Extraction> refine_extractions(const Entity& entity, const Entity& other,
                                               std::vector<Extraction> extractions);

    const std::vector<nlohmann::json>& cr_audit() const { return cr_.audit_log(); }
    std::vector<DistillRecord> take_distill_records() { return std::move(distill_); }

    // One EXTRACT training example per surviving tile trace (post-revision
    // output). Called once, after extraction and its critique loop.
    void collect_extract_distill();

  private:
    CompletionRequest make_request(StageTag tag, std::string prompt) const;
    void attach_extract_audit(std::size_t audit_begin);
    void rebuild_merge_trace(const std::vector<std::vector<std::string>>& surviving_members);

    Gateway& gateway_;
    const PromptLibrary& prompts_;
    const PipelineConfig& config_;
    const Corpus& corpus_;
    Entity entity_a_;
    Entity entity_b_;
    TraceLog& trace_;
    CrEngine cr_;

    std::vector<AttributeCluster> last_clusters_;
    std::string merge_trace_id_;
    std::string merge_payload_text_;
    std::string contrast_trace_id_;
    std::vector<std::pair<std::string, std::string>> tile_trace_ids_;  // (tile_id, trace_id)
    std::vector<DistillRecord> distill_;
};

}  // namespace versus
