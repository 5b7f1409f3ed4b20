#include "versus/pipeline/run.hpp"

#include <chrono>
#include <set>
#include <sstream>

#include "versus/core/errors.hpp"
#include "versus/core/normalize.hpp"
#include "versus/core/validate.hpp"
#include "versus/ingest/sentences.hpp"
#include "versus/pipeline/stages.hpp"

namespace versus {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<Sentence> entity_sentences(Corpus& corpus, const Entity& entity, TraceLog& trace) {
    std::vector<Sentence> sentences;
    for (auto& doc : corpus.documents) {
        if (doc.entity_id != entity.id) continue;
        if (trim(doc.raw_text).empty()) {
            trace.warn("document " + doc.url + " has empty text, skipped");
            continue;
        }
        doc.essential_sentences = extract_essential_sentences(doc);
    }
    for (const auto* doc : corpus.docs_for(entity.id)) {
        sentences.insert(sentences.end(), doc->essential_sentences.begin(),
                         doc->essential_sentences.end());
    }
    return sentences;
}

}  // namespace

RunResult run_pipeline_on(Corpus corpus, const std::string& entity_a,
                          const std::string& entity_b, const PipelineConfig& config,
                          Gateway& gateway, const PromptLibrary& prompts) {
    config.validate();

    const Entity* a = corpus.find_entity(entity_a);
    const Entity* b = corpus.find_entity(entity_b);
    if (!a) throw CorpusError("corpus does not cover entity: " + entity_a);
    if (!b) throw CorpusError("corpus does not cover entity: " + entity_b);
    if (a->id == b->id) throw CorpusError("cannot compare an entity against itself");

    // canonical entity order: as listed in the manifest
    RunResult result;
    result.trace = TraceLog{};
    for (const auto& w : corpus.warnings) result.trace.warn(w);

    Entity ea = *a;
    Entity eb = *b;
    auto started = Clock::now();
    PipelineEngine engine(gateway, prompts, config, corpus, ea, eb, result.trace);

    std::vector<Extraction> ex_a;
    std::vector<Extraction> ex_b;
    for (const auto& [entity, other, sink] :
         {std::make_tuple(ea, eb, &ex_a), std::make_tuple(eb, ea, &ex_b)}) {
        std::vector<Sentence> sentences = entity_sentences(corpus, entity, result.trace);
        TilingResult tiling = tile_sentences(sentences, config.budget, entity.id);
        for (const auto& w : tiling.warnings) result.trace.warn(w);

        std::vector<Extraction> extractions = engine.lm_extract(entity, tiling.tiles);
        if (config.cr_enabled)
            extractions = engine.refine_extractions(entity, other, std::move(extractions));
        *sink = std::move(extractions);
    }
    engine.collect_extract_distill();

    std::vector<AttributeCluster> clusters = engine.lm_attribute_merge(ex_a, ex_b);
    std::vector<ComparisonRow> rows = engine.lm_compare(std::move(clusters));
    if (static_cast<int>(rows.size()) > config.top_k_rows)
        rows.resize(static_cast<std::size_t>(config.top_k_rows));

    result.summary.entity_a = ea;
    result.summary.entity_b = eb;
    result.summary.rows = std::move(rows);
    result.summary.run_metadata.backend_id = gateway.backend_id();
    result.summary.run_metadata.config_hash = config.hash();
    result.summary.run_metadata.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                                  Clock::now() - started)
                                                  .count();
    result.summary.run_metadata.stage_trace_ids = result.trace.ids();

    auto violations = validate_summary(result.summary, corpus.documents);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << violations.size() << " invariant violation(s): ";
        for (const auto& v : violations) msg << "[" << v.code << "] " << v.message << "; ";
        throw StageError("VALIDATE", msg.str());
    }

    result.cr_audit = engine.cr_audit();
    result.distill = engine.take_distill_records();
    result.corpus = std::move(corpus);
    return result;
}

RunResult run_pipeline(const std::string& entity_a, const std::string& entity_b,
                       const std::filesystem::path& corpus_path, const PipelineConfig& config,
                       Gateway& gateway, const PromptLibrary& prompts) {
    return run_pipeline_on(load_corpus(corpus_path), entity_a, entity_b, config, gateway,
                           prompts);
}

std::string render_summary_markdown(const ComparisonSummary& summary) {
    std::ostringstream out;
    out << "# " << summary.entity_a.display_name << " vs " << summary.entity_b.display_name
        << "\n\n";
    out << "| attribute | " << summary.entity_a.display_name << " | "
        << summary.entity_b.display_name << " | sources |\n";
    out << "| --- | --- | --- | --- |\n";
    auto cell_text = [](const std::vector<ValueEntry>& cell) {
        if (cell.empty()) return std::string("—");
        std::string out_text;
        for (std::size_t i = 0; i < cell.size(); ++i) {
            if (i) out_text += "; ";
            out_text += cell[i].value;
        }
        return out_text;
    };
    for (const auto& row : summary.rows) {
        std::set<std::string> urls;
        for (const auto* cell : {&row.cell_a, &row.cell_b}) {
            for (const auto& e : *cell) urls.insert(e.source_urls.begin(), e.source_urls.end());
        }
        std::string sources;
        for (const auto& url : urls) {
            if (!sources.empty()) sources += ", ";
            sources += url;
        }
        out << "| " << row.attribute << " | " << cell_text(row.cell_a) << " | "
            << cell_text(row.cell_b) << " | " << sources << " |\n";
    }
    return out.str();
}

}  // namespace versus
