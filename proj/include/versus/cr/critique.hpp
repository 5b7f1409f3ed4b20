#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "versus/core/types.hpp"
#include "versus/gateway/gateway.hpp"
#include "versus/gateway/prompts.hpp"
#include "versus/ingest/corpus.hpp"
#include "versus/pipeline/config.hpp"
#include "versus/pipeline/trace.hpp"

namespace versus {

enum class CritiqueKind {
    INSUFFICIENT_CONTEXT,
    WRONG_ENTITY,
    UNHELPFUL_ATTRIBUTE_EXTRACT,
    ORTHOGONAL_VALUES,
    INCONSISTENT_VALUES,
    UNHELPFUL_ATTRIBUTE_OR_VALUE,
    UNDER_OR_OVER_MERGED,
    LONG_COMPLEX_CLAIM,
};

enum class CritiqueScope { EXTRACT, COMPARE };

CritiqueScope scope_of(CritiqueKind kind);
const char* to_string(CritiqueKind kind);
std::optional<CritiqueKind> critique_kind_from_string(const std::string& s);

struct Critique {
    CritiqueKind kind = CritiqueKind::INSUFFICIENT_CONTEXT;
    std::string target;  // E<i>, R<i>, R<i>.<side><j> or R<i>,R<j>
    std::string note;

    bool operator==(const Critique&) const = default;
};

// Working payload for extraction-scope refinement.
struct ExtractScopePayload {
    Entity entity;
    Entity other_entity;
    std::vector<Extraction> extractions;
};

// Working payload for comparison-scope refinement. member_attributes[i] holds
// the attribute cluster behind rows[i]; merges during revision union the
// lists so the clustering stays auditable after the loop.
struct CompareScopePayload {
    Entity entity_a;
    Entity entity_b;
    std::vector<ComparisonRow> rows;
    std::vector<std::vector<std::string>> member_attributes;
};

struct RevisionOutcome {
    std::vector<Critique> applied;
    int iterations_used = 0;
    std::vector<std::string> warnings;
};

// Detect-then-revise engine for the eight defect kinds. Detection goes
// through the gateway (CRITIQUE stage); revision combines gateway calls for
// the generative kinds (context re-extraction, claim splitting) with
// mechanical edits (deletions, merges, realignment, majority filtering).
class CrEngine {
  public:
    CrEngine(Gateway& gateway, const PromptLibrary& prompts, const PipelineConfig& config,
             const Corpus* corpus, TraceLog& trace);

    std::vector<Critique> critique(const ExtractScopePayload& payload);
    std::vector<Critique> critique(const CompareScopePayload& payload);

    // Applies the critiques in deterministic order (extract kinds before
    // compare kinds, enum order, then target order); records the applied list
    // and any warnings into `outcome`.
    void revise(ExtractScopePayload& payload, const std::vector<Critique>& critiques,
                RevisionOutcome& outcome);
    void revise(CompareScopePayload& payload, const std::vector<Critique>& critiques,
                RevisionOutcome& outcome);

    // Alternates critique and revise until the critique list is empty, two
    // consecutive iterations report the identical critique set, or
    // max_iterations is reached. Never consults documents outside the run's
    // corpus.
    RevisionOutcome refine(ExtractScopePayload& payload, int max_iterations);
    RevisionOutcome refine(CompareScopePayload& payload, int max_iterations);

    // One audit record per critique processed: kind, target digest, action.
    const std::vector<nlohmann::json>& audit_log() const { return audit_; }

  private:
    struct Impl;
    Gateway& gateway_;
    const PromptLibrary& prompts_;
    const PipelineConfig& config_;
    const Corpus* corpus_;
    TraceLog& trace_;
    std::vector<nlohmann::json> audit_;
    // Targets (by content digest) whose rejected revision already used its
    // one re-queue; further critiques on them are dropped with a warning.
    std::vector<std::string> exhausted_targets_;

    std::vector<Critique> run_critique_stage(const std::string& payload_text);
    void audit(const Critique& c, const std::string& target_digest, const std::string& action);
};

// Deterministic ordering used before applying revisions.
void sort_critiques(std::vector<Critique>& critiques);

}  // namespace versus
