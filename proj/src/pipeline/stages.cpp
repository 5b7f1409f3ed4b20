#include "versus/pipeline/stages.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "versus/core/digest.hpp"
#include "versus/core/errors.hpp"
#include "versus/core/normalize.hpp"
#include "versus/core/parallel.hpp"
#include "versus/gateway/payload.hpp"
#include "versus/ingest/tokenizer.hpp"
#include "versus/pipeline/majority.hpp"
#include "versus/pipeline/ranking.hpp"

namespace versus {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

// Cluster center: shortest member, ties lexicographic ("room" over "rooms").
std::string pick_center(const std::vector<std::string>& members) {
    return *std::min_element(members.begin(), members.end(),
                             [](const std::string& a, const std::string& b) {
                                 if (a.size() != b.size()) return a.size() < b.size();
                                 return a < b;
                             });
}

}  // namespace

PipelineEngine::PipelineEngine(Gateway& gateway, const PromptLibrary& prompts,
                               const PipelineConfig& config, const Corpus& corpus,
                               const Entity& entity_a, const Entity& entity_b, TraceLog& trace)
    : gateway_(gateway), prompts_(prompts), config_(config), corpus_(corpus),
      entity_a_(entity_a), entity_b_(entity_b), trace_(trace),
      cr_(gateway, prompts, config, &corpus, trace) {}

CompletionRequest PipelineEngine::make_request(StageTag tag, std::string prompt) const {
    CompletionRequest request;
    request.stage_tag = tag;
    request.temperature = 0.0;
    int prompt_tokens = default_tokenizer().count_tokens(prompt);
    request.max_output_tokens = std::max(64, gateway_.context_window() - prompt_tokens);
    request.prompt = std::move(prompt);
    return request;
}

std::vector<Extraction> PipelineEngine::lm_extract(const Entity& entity,
                                                   const std::vector<Tile>& tiles) {
    struct TileResult {
        std::string payload_text;
        std::string output_text;
        std::int64_t duration_ms = 0;
        std::vector<ExtractionRecord> records;
        std::string error;
    };
    std::vector<TileResult> results(tiles.size());

    for_each_index(tiles.size(), config_.parallel, [&](std::size_t i) {
        const Tile& tile = tiles[i];
        ExtractPayload payload;
        payload.entity_name = entity.display_name;
        for (const auto& s : tile.sentences) payload.sentences.push_back(s.text);
        results[i].payload_text = render_payload(payload);

        auto start = Clock::now();
        try {
            std::string prompt =
                prompts_.render(StageTag::EXTRACT, {{"PAYLOAD", results[i].payload_text}});
            StageOutput output = gateway_.complete_parsed(make_request(StageTag::EXTRACT, prompt));
            results[i].records = std::get<StructuredExtractionList>(output).items;
            results[i].output_text = render_stage_output(StageTag::EXTRACT, output);
        } catch (const Error& e) {
            results[i].error = e.what();
        }
        results[i].duration_ms = ms_since(start);
    });

    // join in tile order: deterministic regardless of scheduling
    std::vector<Extraction> extractions;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const Tile& tile = tiles[i];
        TileResult& r = results[i];
        if (!r.error.empty()) {
            trace_.warn("tile " + tile.id + " skipped: " + r.error);
            continue;
        }
        std::string trace_id =
            trace_.append(StageTag::EXTRACT, r.payload_text, r.output_text, r.duration_ms);
        tile_trace_ids_.emplace_back(tile.id, trace_id);

        std::vector<bool> sentence_used(tile.sentences.size(), false);
        for (const auto& rec : r.records) {
            // pair each record with the first unconsumed matching sentence so
            // identical sentences in different documents attribute separately
            const SourceDocument* home = nullptr;
            std::size_t fallback = tile.sentences.size();
            for (std::size_t si = 0; si < tile.sentences.size(); ++si) {
                if (!contains_nfc(tile.sentences[si].text, rec.evidence)) continue;
                if (sentence_used[si]) {
                    if (fallback == tile.sentences.size()) fallback = si;
                    continue;
                }
                sentence_used[si] = true;
                home = corpus_.find_document(tile.sentences[si].doc_url);
                break;
            }
            if (!home && fallback < tile.sentences.size())
                home = corpus_.find_document(tile.sentences[fallback].doc_url);
            if (!home) {
                for (const auto* doc : corpus_.docs_for(entity.id)) {
                    if (contains_nfc(doc->raw_text, rec.evidence)) {
                        home = doc;
                        break;
                    }
                }
            }
            if (!home) {
                trace_.warn("extraction dropped (evidence not in corpus): " + rec.attribute);
                continue;
            }
            if (!contains_nfc(rec.evidence, rec.value)) {
                trace_.warn("extraction dropped (value not inside evidence): " + rec.attribute);
                continue;
            }
            if (trim(rec.attribute).empty() || trim(rec.value).empty()) continue;
            extractions.push_back(Extraction{rec.attribute, rec.value, rec.evidence, home->url,
                                             entity.id, tile.id});
        }
    }
    return extractions;
}

std::vector<Extraction> PipelineEngine::refine_extractions(const Entity& entity,
                                                           const Entity& other,
                                                           std::vector<Extraction> extractions) {
    ExtractScopePayload payload{entity, other, std::move(extractions)};
    std::size_t audit_begin = cr_.audit_log().size();
    RevisionOutcome outcome = cr_.refine(payload, config_.cr_max_iterations);
    for (const auto& w : outcome.warnings) trace_.warn(w);
    attach_extract_audit(audit_begin);

    // refresh per-tile traces so they carry the revised records
    std::map<std::string, std::vector<ExtractionRecord>> by_tile;
    for (const auto& ex : payload.extractions)
        by_tile[ex.tile_id].push_back(ExtractionRecord{ex.attribute, ex.value, ex.evidence});
    for (const auto& [tile_id, trace_id] : tile_trace_ids_) {
        auto it = by_tile.find(tile_id);
        StructuredExtractionList list;
        if (it != by_tile.end()) list.items = it->second;
        trace_.update_output(trace_id, render_stage_output(StageTag::EXTRACT, list));
    }
    return std::move(payload.extractions);
}

void PipelineEngine::attach_extract_audit(std::size_t audit_begin) {
    const auto& audit = cr_.audit_log();
    for (std::size_t i = audit_begin; i < audit.size(); ++i) {
        const auto& rec = audit[i];
        std::string tile_id = rec.value("tile_id", "");
        std::string description =
            rec.value("kind", "") + " " + rec.value("target", "") + ": " + rec.value("action", "");
        if (tile_id.empty()) continue;
        for (const auto& [tid, trace_id] : tile_trace_ids_) {
            if (tid == tile_id) {
                trace_.add_critique(trace_id, description);
                break;
            }
        }
    }
}

std::vector<AttributeCluster> PipelineEngine::lm_attribute_merge(
    const std::vector<Extraction>& ex_a, const std::vector<Extraction>& ex_b) {
    std::vector<std::string> attributes;
    std::set<std::string> seen;
    for (const auto* side : {&ex_a, &ex_b}) {
        for (const auto& ex : *side) {
            if (seen.insert(ex.attribute).second) attributes.push_back(ex.attribute);
        }
    }
    if (attributes.empty()) return {};

    AttributeMergePayload payload;
    payload.entity_a = entity_a_.display_name;
    payload.entity_b = entity_b_.display_name;
    payload.attributes = attributes;
    merge_payload_text_ = render_payload(payload);

    auto start = Clock::now();
    AttributeMergeResult merged;
    try {
        std::string prompt =
            prompts_.render(StageTag::ATTRIBUTE_MERGE, {{"PAYLOAD", merge_payload_text_}});
        merged = std::get<AttributeMergeResult>(
            gateway_.complete_parsed(make_request(StageTag::ATTRIBUTE_MERGE, prompt)));
    } catch (const Error& e) {
        throw StageError("ATTRIBUTE_MERGE", e.what());
    }
    merge_trace_id_ = trace_.append(StageTag::ATTRIBUTE_MERGE, merge_payload_text_,
                                    render_stage_output(StageTag::ATTRIBUTE_MERGE, merged),
                                    ms_since(start));

    // assign every input attribute to exactly one cluster
    std::set<std::string> assigned;
    std::vector<std::vector<std::string>> groups;
    for (const auto& group : merged.groups) {
        std::vector<std::string> members;
        std::set<std::string> member_keys;
        for (const auto& member : group.members) {
            if (!seen.count(member)) {
                trace_.warn("attribute merge returned unknown attribute: " + member);
                continue;
            }
            if (assigned.count(member)) continue;
            assigned.insert(member);
            if (member_keys.insert(norm_key(member)).second) members.push_back(member);
        }
        if (!members.empty()) groups.push_back(std::move(members));
    }
    for (const auto& attr : attributes) {
        if (!assigned.count(attr)) {
            trace_.warn("attribute left unclustered by backend, kept as singleton: " + attr);
            groups.push_back({attr});
        }
    }

    std::vector<AttributeCluster> clusters;
    for (auto& members : groups) {
        AttributeCluster cluster;
        cluster.member_attributes = members;
        cluster.canonical_attribute = pick_center(members);
        std::set<std::string> keys;
        for (const auto& m : members) keys.insert(norm_key(m));
        for (const auto& ex : ex_a)
            if (keys.count(norm_key(ex.attribute))) cluster.values_a.push_back(ex);
        for (const auto& ex : ex_b)
            if (keys.count(norm_key(ex.attribute))) cluster.values_b.push_back(ex);
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

AttributeCluster PipelineEngine::lm_value_merge(AttributeCluster cluster) {
    ValueMergePayload payload;
    payload.attribute = cluster.canonical_attribute;
    for (const auto& ex : cluster.values_a) payload.values_a.push_back(ex.value);
    for (const auto& ex : cluster.values_b) payload.values_b.push_back(ex.value);
    std::string payload_text = render_payload(payload);

    auto start = Clock::now();
    ValueMergeResult merged;
    if (payload.values_a.size() <= 1 && payload.values_b.size() <= 1) {
        // nothing to group; synthesize the trivial result without a call
        if (!payload.values_a.empty())
            merged.groups.push_back(ValueGroupRecord{'A', 1, {1}});
        if (!payload.values_b.empty())
            merged.groups.push_back(ValueGroupRecord{'B', 1, {1}});
    } else {
        try {
            std::string prompt =
                prompts_.render(StageTag::VALUE_MERGE, {{"PAYLOAD", payload_text}});
            merged = std::get<ValueMergeResult>(
                gateway_.complete_parsed(make_request(StageTag::VALUE_MERGE, prompt)));
        } catch (const Error& e) {
            throw StageError("VALUE_MERGE", std::string("cluster '") +
                                                cluster.canonical_attribute + "': " + e.what());
        }
    }
    trace_.append(StageTag::VALUE_MERGE, payload_text,
                  render_stage_output(StageTag::VALUE_MERGE, merged), ms_since(start));

    auto build_side = [&](char side, const std::vector<Extraction>& extractions) {
        const int n = static_cast<int>(extractions.size());
        std::vector<ValueEntry> entries;
        std::vector<bool> covered(static_cast<std::size_t>(n), false);
        for (const auto& group : merged.groups) {
            if (group.side != side) continue;
            ValueEntry entry;
            bool first = true;
            int rep = group.rep_index;
            bool rep_valid = std::find(group.member_indices.begin(), group.member_indices.end(),
                                       rep) != group.member_indices.end();
            for (int idx : group.member_indices) {
                if (idx < 1 || idx > n) {
                    trace_.warn("value merge index out of range for attribute " +
                                cluster.canonical_attribute);
                    continue;
                }
                if (covered[static_cast<std::size_t>(idx - 1)]) continue;
                covered[static_cast<std::size_t>(idx - 1)] = true;
                const Extraction& ex = extractions[static_cast<std::size_t>(idx - 1)];
                if (first) {
                    entry.value = rep_valid && rep >= 1 && rep <= n
                                      ? extractions[static_cast<std::size_t>(rep - 1)].value
                                      : ex.value;
                    first = false;
                }
                entry.evidence_spans.push_back(ex.evidence);
                entry.source_urls.push_back(ex.source_url);
            }
            if (first) continue;
            entry.support_count = static_cast<int>(entry.source_urls.size());
            entries.push_back(std::move(entry));
        }
        for (int i = 0; i < n; ++i) {
            if (covered[static_cast<std::size_t>(i)]) continue;
            trace_.warn("value left ungrouped by backend, kept as singleton: " +
                        extractions[static_cast<std::size_t>(i)].value);
            const Extraction& ex = extractions[static_cast<std::size_t>(i)];
            entries.push_back(ValueEntry{ex.value, {ex.evidence}, {ex.source_url}, 1});
        }

        std::vector<std::pair<int, int>> conflicts;
        for (const auto& conflict : merged.conflicts) {
            if (conflict.side == side)
                conflicts.emplace_back(conflict.group_i - 1, conflict.group_j - 1);
        }
        auto filtered = apply_majority_filter(entries, conflicts, config_.majority_threshold);
        for (const auto& dropped : filtered.dropped)
            trace_.warn("minority value dropped for '" + cluster.canonical_attribute + "': " +
                        dropped.value);
        if (filtered.unresolved_tie)
            trace_.warn("tied conflicting values kept for '" + cluster.canonical_attribute + "'");
        return filtered.kept;
    };

    cluster.merged_a = build_side('A', cluster.values_a);
    cluster.merged_b = build_side('B', cluster.values_b);
    return cluster;
}

std::vector<ComparisonRow> PipelineEngine::lm_contrast(
    const std::vector<AttributeCluster>& clusters) {
    if (clusters.empty()) return {};

    ContrastPayload payload;
    for (const auto& cluster : clusters) {
        ContrastPayloadRow row;
        row.attribute = cluster.canonical_attribute;
        for (const auto& e : cluster.merged_a)
            row.values.push_back(ContrastValue{'A', e.value, e.support_count});
        for (const auto& e : cluster.merged_b)
            row.values.push_back(ContrastValue{'B', e.value, e.support_count});
        payload.rows.push_back(std::move(row));
    }
    std::string payload_text = render_payload(payload);

    auto start = Clock::now();
    ContrastResult contrast;
    try {
        std::string prompt = prompts_.render(StageTag::CONTRAST, {{"PAYLOAD", payload_text}});
        contrast = std::get<ContrastResult>(
            gateway_.complete_parsed(make_request(StageTag::CONTRAST, prompt)));
    } catch (const Error& e) {
        throw StageError("CONTRAST", e.what());
    }
    contrast_trace_id_ = trace_.append(StageTag::CONTRAST, payload_text,
                                       render_stage_output(StageTag::CONTRAST, contrast),
                                       ms_since(start));

    std::map<std::string, ContrastLevel> levels;
    for (const auto& rec : contrast.rows) levels[rec.attribute] = rec.level;

    std::vector<ComparisonRow> rows;
    for (const auto& cluster : clusters) {
        if (cluster.merged_a.empty() && cluster.merged_b.empty()) continue;
        ComparisonRow row;
        row.attribute = cluster.canonical_attribute;
        row.cell_a = cluster.merged_a;
        row.cell_b = cluster.merged_b;
        auto it = levels.find(grammar_field(cluster.canonical_attribute));
        if (it == levels.end()) {
            trace_.warn("contrast response missing attribute '" + cluster.canonical_attribute +
                        "', defaulting to NONE");
            row.contrast_level = ContrastLevel::NONE;
        } else {
            row.contrast_level = it->second;
        }
        rows.push_back(std::move(row));
    }
    score_and_sort_rows(rows, corpus_, config_.rank_weights);
    return rows;
}

std::vector<ComparisonRow> PipelineEngine::lm_usefulness(std::vector<ComparisonRow> rows) {
    struct RowResult {
        std::string payload_text;
        std::string output_text;
        std::int64_t duration_ms = 0;
        std::string label;
        std::string error;
    };
    std::vector<RowResult> results(rows.size());

    for_each_index(rows.size(), config_.parallel, [&](std::size_t i) {
        const ComparisonRow& row = rows[i];
        UsefulnessPayload payload;
        payload.entity_a = entity_a_.display_name;
        payload.entity_b = entity_b_.display_name;
        payload.attribute = row.attribute;
        for (const auto& e : row.cell_a) payload.values_a.push_back(e.value);
        for (const auto& e : row.cell_b) payload.values_b.push_back(e.value);
        results[i].payload_text = render_payload(payload);

        auto start = Clock::now();
        try {
            std::string prompt = prompts_.render(
                StageTag::USEFULNESS, {{"PAYLOAD", results[i].payload_text},
                                       {"ENTITY_A", payload.entity_a},
                                       {"ENTITY_B", payload.entity_b}});
            StageOutput output =
                gateway_.complete_parsed(make_request(StageTag::USEFULNESS, prompt));
            results[i].label = std::get<RatingResult>(output).label;
            results[i].output_text = render_stage_output(StageTag::USEFULNESS, output);
        } catch (const Error& e) {
            results[i].error = e.what();
        }
        results[i].duration_ms = ms_since(start);
    });

    std::vector<ComparisonRow> kept;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        RowResult& r = results[i];
        if (!r.error.empty()) throw StageError("USEFULNESS", r.error);
        if (r.label != "YES" && r.label != "NO")
            throw StageError("USEFULNESS", "unexpected label: " + r.label);
        trace_.append(StageTag::USEFULNESS, r.payload_text, r.output_text, r.duration_ms);
        if (r.label == "YES") {
            kept.push_back(std::move(rows[i]));
        } else {
            trace_.warn("row '" + rows[i].attribute + "' filtered: not useful");
        }
    }
    return kept;
}

void PipelineEngine::collect_extract_distill() {
    for (const auto& [tile_id, trace_id] : tile_trace_ids_) {
        for (const auto& t : trace_.entries()) {
            if (t.id == trace_id) {
                distill_.push_back(
                    DistillRecord{"EXTRACT", t.input_text, t.output_text, "", t.output_digest});
                break;
            }
        }
    }
}

void PipelineEngine::rebuild_merge_trace(
    const std::vector<std::vector<std::string>>& surviving_members) {
    if (merge_trace_id_.empty()) return;
    std::set<std::string> covered;
    AttributeMergeResult rebuilt;
    for (const auto& members : surviving_members) {
        if (members.empty()) continue;
        AttributeGroup group;
        group.members = members;
        group.center = pick_center(members);
        for (const auto& m : members) covered.insert(norm_key(m));
        rebuilt.groups.push_back(std::move(group));
    }
    // clusters filtered out downstream keep their original grouping
    for (const auto& cluster : last_clusters_) {
        bool overlap = std::any_of(cluster.member_attributes.begin(),
                                   cluster.member_attributes.end(), [&](const std::string& m) {
                                       return covered.count(norm_key(m)) > 0;
                                   });
        if (overlap) continue;
        AttributeGroup group;
        group.members = cluster.member_attributes;
        group.center = cluster.canonical_attribute;
        rebuilt.groups.push_back(std::move(group));
    }
    trace_.update_output(merge_trace_id_,
                         render_stage_output(StageTag::ATTRIBUTE_MERGE, rebuilt));
}

std::vector<ComparisonRow> PipelineEngine::lm_compare(std::vector<AttributeCluster> clusters) {
    last_clusters_ = clusters;

    // per-cluster value merge; traces append inside, so the loop runs in
    // cluster order and stays deterministic
    std::vector<AttributeCluster> merged(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        merged[i] = lm_value_merge(std::move(clusters[i]));
    }

    std::vector<ComparisonRow> rows = lm_contrast(merged);
    rows = lm_usefulness(std::move(rows));

    std::vector<std::vector<std::string>> members;
    std::map<std::string, const AttributeCluster*> by_canonical;
    for (const auto& c : merged) by_canonical[c.canonical_attribute] = &c;
    for (const auto& row : rows) {
        auto it = by_canonical.find(row.attribute);
        members.push_back(it != by_canonical.end() ? it->second->member_attributes
                                                   : std::vector<std::string>{row.attribute});
    }

    if (config_.cr_enabled && !rows.empty()) {
        CompareScopePayload payload;
        payload.entity_a = entity_a_;
        payload.entity_b = entity_b_;
        payload.rows = std::move(rows);
        payload.member_attributes = std::move(members);

        std::size_t audit_begin = cr_.audit_log().size();
        RevisionOutcome outcome = cr_.refine(payload, config_.cr_max_iterations);
        for (const auto& w : outcome.warnings) trace_.warn(w);
        for (std::size_t i = audit_begin; i < cr_.audit_log().size(); ++i) {
            const auto& rec = cr_.audit_log()[i];
            if (!contrast_trace_id_.empty())
                trace_.add_critique(contrast_trace_id_, rec.value("kind", "") + " " +
                                                            rec.value("target", "") + ": " +
                                                            rec.value("action", ""));
        }
        rows = std::move(payload.rows);
        members = std::move(payload.member_attributes);
    }

    rebuild_merge_trace(members);

    // distill records: the merge task plus one compare example per row
    if (!merge_trace_id_.empty()) {
        for (const auto& t : trace_.entries()) {
            if (t.id == merge_trace_id_) {
                distill_.push_back(DistillRecord{"ATTRIBUTE_MERGE", t.input_text, t.output_text,
                                                 "", t.output_digest});
                break;
            }
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ValueMergePayload input;
        input.attribute = rows[i].attribute;
        std::set<std::string> keys;
        for (const auto& m : members[i]) keys.insert(norm_key(m));
        for (const auto& cluster : last_clusters_) {
            if (!keys.count(norm_key(cluster.canonical_attribute))) continue;
            for (const auto& ex : cluster.values_a) input.values_a.push_back(ex.value);
            for (const auto& ex : cluster.values_b) input.values_b.push_back(ex.value);
        }
        std::string target = render_compare_example(rows[i]);
        distill_.push_back(
            DistillRecord{"COMPARE", render_payload(input), target, "", digest_hex(target)});
    }
    return rows;
}

}  // namespace versus
