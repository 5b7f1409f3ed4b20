#include "versus/cr/critique.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "versus/core/digest.hpp"
#include "versus/core/errors.hpp"
#include "versus/core/normalize.hpp"
#include "versus/gateway/payload.hpp"
#include "versus/ingest/sentences.hpp"
#include "versus/ingest/tokenizer.hpp"
#include "versus/lang/lexicon.hpp"
#include "versus/pipeline/majority.hpp"
#include "versus/pipeline/ranking.hpp"

namespace versus {

namespace {

// ---- target references ------------------------------------------------

std::optional<int> parse_index(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) return std::nullopt;
    return v;
}

std::optional<int> parse_e_target(const std::string& t) {
    if (t.size() < 2 || t[0] != 'E') return std::nullopt;
    return parse_index(std::string_view(t).substr(1));
}

std::optional<int> parse_r_target(const std::string& t) {
    if (t.size() < 2 || t[0] != 'R') return std::nullopt;
    return parse_index(std::string_view(t).substr(1));
}

struct ValueTarget {
    int row = 1;
    char side = 'A';
    int value = 1;
};

std::optional<ValueTarget> parse_value_target(const std::string& t) {
    auto dot = t.find('.');
    if (dot == std::string::npos || t.empty() || t[0] != 'R') return std::nullopt;
    auto row = parse_index(std::string_view(t).substr(1, dot - 1));
    if (!row) return std::nullopt;
    std::string_view rest = std::string_view(t).substr(dot + 1);
    if (rest.size() < 2 || (rest[0] != 'A' && rest[0] != 'B')) return std::nullopt;
    auto value = parse_index(rest.substr(1));
    if (!value) return std::nullopt;
    return ValueTarget{*row, rest[0], *value};
}

std::optional<std::pair<int, int>> parse_pair_target(const std::string& t) {
    auto comma = t.find(',');
    if (comma == std::string::npos) return std::nullopt;
    auto first = parse_r_target(t.substr(0, comma));
    auto second = parse_r_target(t.substr(comma + 1));
    if (!first || !second || *first == *second) return std::nullopt;
    return std::make_pair(*first, *second);
}

// numeric-aware ordering key for deterministic application
std::vector<int> target_order_key(const std::string& t) {
    std::vector<int> key;
    int current = 0;
    bool in_number = false;
    for (char c : t) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            current = current * 10 + (c - '0');
            in_number = true;
        } else {
            if (in_number) key.push_back(current);
            current = 0;
            in_number = false;
            if (c == 'A' || c == 'B') key.push_back(c == 'A' ? 0 : 1);
        }
    }
    if (in_number) key.push_back(current);
    return key;
}

std::string extraction_digest(const Extraction& ex) {
    return digest_hex(ex.attribute + '\x1f' + ex.value + '\x1f' + ex.evidence + '\x1f' +
                      ex.source_url);
}

std::string entry_digest(const std::string& attribute, char side, const ValueEntry& entry) {
    return digest_hex(attribute + '\x1f' + side + '\x1f' + entry.value);
}

std::string row_digest(const ComparisonRow& row) {
    std::string buffer = row.attribute;
    for (const auto* cell : {&row.cell_a, &row.cell_b}) {
        for (const auto& e : *cell) {
            buffer += '\x1f';
            buffer += e.value;
        }
    }
    return digest_hex(buffer);
}

std::vector<ValueEntry> coalesce_entries(const std::vector<ValueEntry>& entries) {
    std::vector<ValueEntry> out;
    std::map<std::string, std::size_t> by_key;
    for (const auto& entry : entries) {
        auto [it, inserted] = by_key.emplace(norm_key(entry.value), out.size());
        if (inserted) {
            out.push_back(entry);
            continue;
        }
        ValueEntry& target = out[it->second];
        target.support_count += entry.support_count;
        target.evidence_spans.insert(target.evidence_spans.end(), entry.evidence_spans.begin(),
                                     entry.evidence_spans.end());
        target.source_urls.insert(target.source_urls.end(), entry.source_urls.begin(),
                                  entry.source_urls.end());
    }
    return out;
}

}  // namespace

CritiqueScope scope_of(CritiqueKind kind) {
    switch (kind) {
        case CritiqueKind::INSUFFICIENT_CONTEXT:
        case CritiqueKind::WRONG_ENTITY:
        case CritiqueKind::UNHELPFUL_ATTRIBUTE_EXTRACT: return CritiqueScope::EXTRACT;
        default: return CritiqueScope::COMPARE;
    }
}

const char* to_string(CritiqueKind kind) {
    switch (kind) {
        case CritiqueKind::INSUFFICIENT_CONTEXT: return "INSUFFICIENT_CONTEXT";
        case CritiqueKind::WRONG_ENTITY: return "WRONG_ENTITY";
        case CritiqueKind::UNHELPFUL_ATTRIBUTE_EXTRACT: return "UNHELPFUL_ATTRIBUTE_EXTRACT";
        case CritiqueKind::ORTHOGONAL_VALUES: return "ORTHOGONAL_VALUES";
        case CritiqueKind::INCONSISTENT_VALUES: return "INCONSISTENT_VALUES";
        case CritiqueKind::UNHELPFUL_ATTRIBUTE_OR_VALUE: return "UNHELPFUL_ATTRIBUTE_OR_VALUE";
        case CritiqueKind::UNDER_OR_OVER_MERGED: return "UNDER_OR_OVER_MERGED";
        case CritiqueKind::LONG_COMPLEX_CLAIM: return "LONG_COMPLEX_CLAIM";
    }
    return "INSUFFICIENT_CONTEXT";
}

std::optional<CritiqueKind> critique_kind_from_string(const std::string& s) {
    static const std::map<std::string, CritiqueKind> table = {
        {"INSUFFICIENT_CONTEXT", CritiqueKind::INSUFFICIENT_CONTEXT},
        {"WRONG_ENTITY", CritiqueKind::WRONG_ENTITY},
        {"UNHELPFUL_ATTRIBUTE_EXTRACT", CritiqueKind::UNHELPFUL_ATTRIBUTE_EXTRACT},
        {"ORTHOGONAL_VALUES", CritiqueKind::ORTHOGONAL_VALUES},
        {"INCONSISTENT_VALUES", CritiqueKind::INCONSISTENT_VALUES},
        {"UNHELPFUL_ATTRIBUTE_OR_VALUE", CritiqueKind::UNHELPFUL_ATTRIBUTE_OR_VALUE},
        {"UNDER_OR_OVER_MERGED", CritiqueKind::UNDER_OR_OVER_MERGED},
        {"LONG_COMPLEX_CLAIM", CritiqueKind::LONG_COMPLEX_CLAIM},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

void sort_critiques(std::vector<Critique>& critiques) {
    std::stable_sort(critiques.begin(), critiques.end(), [](const Critique& a, const Critique& b) {
        if (scope_of(a.kind) != scope_of(b.kind))
            return scope_of(a.kind) == CritiqueScope::EXTRACT;
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        auto ka = target_order_key(a.target);
        auto kb = target_order_key(b.target);
        if (ka != kb) return ka < kb;
        return a.target < b.target;
    });
}

CrEngine::CrEngine(Gateway& gateway, const PromptLibrary& prompts, const PipelineConfig& config,
                   const Corpus* corpus, TraceLog& trace)
    : gateway_(gateway), prompts_(prompts), config_(config), corpus_(corpus), trace_(trace) {}

void CrEngine::audit(const Critique& c, const std::string& target_digest,
                     const std::string& action) {
    audit_.push_back(nlohmann::json{{"kind", std::string(to_string(c.kind))},
                                    {"target", c.target},
                                    {"target_digest", target_digest},
                                    {"action", action}});
}

std::vector<Critique> CrEngine::run_critique_stage(const std::string& payload_text) {
    std::string prompt = prompts_.render(StageTag::CRITIQUE, {{"PAYLOAD", payload_text}});
    CompletionRequest request;
    request.stage_tag = StageTag::CRITIQUE;
    request.prompt = prompt;
    request.temperature = 0.0;
    int prompt_tokens = default_tokenizer().count_tokens(prompt);
    request.max_output_tokens = std::max(64, gateway_.context_window() - prompt_tokens);

    auto started = std::chrono::steady_clock::now();
    StageOutput output = gateway_.complete_parsed(request);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    const auto& records = std::get<CritiqueResult>(output);
    trace_.append(StageTag::CRITIQUE, payload_text,
                  render_stage_output(StageTag::CRITIQUE, output), elapsed);

    std::vector<Critique> critiques;
    for (const auto& rec : records.items) {
        auto kind = critique_kind_from_string(trim(rec.kind));
        if (!kind) {
            trace_.warn("critique with unknown kind ignored: " + rec.kind);
            continue;
        }
        critiques.push_back(Critique{*kind, trim(rec.target), rec.note});
    }
    return critiques;
}

std::vector<Critique> CrEngine::critique(const ExtractScopePayload& payload) {
    CritiquePayload cp;
    cp.scope = "EXTRACT";
    cp.entity_a = payload.entity.display_name;
    cp.entity_b = payload.other_entity.display_name;
    cp.own_entity = payload.entity.display_name;
    for (std::size_t i = 0; i < payload.extractions.size(); ++i) {
        const Extraction& ex = payload.extractions[i];
        cp.extract_items.push_back(CritiqueExtractItem{static_cast<int>(i + 1), ex.attribute,
                                                       ex.value, ex.evidence});
    }

    std::vector<Critique> critiques = run_critique_stage(render_payload(cp));
    std::vector<Critique> valid;
    for (auto& c : critiques) {
        if (scope_of(c.kind) != CritiqueScope::EXTRACT) {
            trace_.warn("compare-scope critique against extract payload ignored");
            continue;
        }
        auto idx = parse_e_target(c.target);
        if (!idx || *idx > static_cast<int>(payload.extractions.size())) {
            trace_.warn("critique with invalid target ignored: " + c.target);
            continue;
        }
        std::string digest = extraction_digest(payload.extractions[*idx - 1]);
        if (std::find(exhausted_targets_.begin(), exhausted_targets_.end(), digest) !=
            exhausted_targets_.end()) {
            trace_.warn("critique suppressed after exhausted revision budget: " + c.target);
            continue;
        }
        valid.push_back(std::move(c));
    }
    sort_critiques(valid);
    return valid;
}

std::vector<Critique> CrEngine::critique(const CompareScopePayload& payload) {
    CritiquePayload cp;
    cp.scope = "COMPARE";
    cp.entity_a = payload.entity_a.display_name;
    cp.entity_b = payload.entity_b.display_name;
    for (std::size_t i = 0; i < payload.rows.size(); ++i) {
        const ComparisonRow& row = payload.rows[i];
        cp.rows.push_back(CritiqueCompareRow{static_cast<int>(i + 1), row.attribute,
                                             row.contrast_level});
        for (std::size_t v = 0; v < row.cell_a.size(); ++v)
            cp.row_values.push_back(CritiqueCompareValue{
                static_cast<int>(i + 1), 'A', static_cast<int>(v + 1), row.cell_a[v].value,
                row.cell_a[v].evidence_spans.empty() ? "" : row.cell_a[v].evidence_spans.front()});
        for (std::size_t v = 0; v < row.cell_b.size(); ++v)
            cp.row_values.push_back(CritiqueCompareValue{
                static_cast<int>(i + 1), 'B', static_cast<int>(v + 1), row.cell_b[v].value,
                row.cell_b[v].evidence_spans.empty() ? "" : row.cell_b[v].evidence_spans.front()});
    }

    std::vector<Critique> critiques = run_critique_stage(render_payload(cp));
    auto row_count = static_cast<int>(payload.rows.size());
    std::vector<Critique> valid;
    for (auto& c : critiques) {
        if (scope_of(c.kind) != CritiqueScope::COMPARE) {
            trace_.warn("extract-scope critique against compare payload ignored");
            continue;
        }
        std::string digest;
        if (auto vt = parse_value_target(c.target)) {
            if (vt->row > row_count) continue;
            const ComparisonRow& row = payload.rows[vt->row - 1];
            const auto& cell = vt->side == 'A' ? row.cell_a : row.cell_b;
            if (vt->value > static_cast<int>(cell.size())) continue;
            digest = entry_digest(row.attribute, vt->side, cell[vt->value - 1]);
        } else if (auto pair = parse_pair_target(c.target)) {
            if (pair->first > row_count || pair->second > row_count) continue;
            digest = row_digest(payload.rows[pair->first - 1]) +
                     row_digest(payload.rows[pair->second - 1]);
        } else if (auto r = parse_r_target(c.target)) {
            if (*r > row_count) continue;
            digest = row_digest(payload.rows[*r - 1]);
        } else {
            trace_.warn("critique with invalid target ignored: " + c.target);
            continue;
        }
        if (std::find(exhausted_targets_.begin(), exhausted_targets_.end(), digest) !=
            exhausted_targets_.end()) {
            trace_.warn("critique suppressed after exhausted revision budget: " + c.target);
            continue;
        }
        valid.push_back(std::move(c));
    }
    sort_critiques(valid);
    return valid;
}

// ---- extraction-scope revision -----------------------------------------

void CrEngine::revise(ExtractScopePayload& payload, const std::vector<Critique>& critiques,
                      RevisionOutcome& outcome) {
    const std::size_t n = payload.extractions.size();
    std::vector<std::vector<Extraction>> slots(n);
    for (std::size_t i = 0; i < n; ++i) slots[i] = {payload.extractions[i]};

    auto doc_sentences = [&](const std::string& url) {
        std::vector<std::string> sentences;
        if (!corpus_) return sentences;
        const SourceDocument* doc = corpus_->find_document(url);
        if (!doc) return sentences;
        if (!doc->essential_sentences.empty()) {
            for (const auto& s : doc->essential_sentences) sentences.push_back(s.text);
        } else if (!trim(doc->raw_text).empty()) {
            for (const auto& s : extract_essential_sentences(*doc)) sentences.push_back(s.text);
        }
        return sentences;
    };

    for (const Critique& c : critiques) {
        auto idx = parse_e_target(c.target);
        if (!idx || *idx > static_cast<int>(n)) continue;
        std::size_t slot = static_cast<std::size_t>(*idx - 1);
        if (slots[slot].empty()) continue;  // already deleted this pass
        const Extraction original = payload.extractions[slot];
        const std::string digest = extraction_digest(original);

        switch (c.kind) {
            case CritiqueKind::WRONG_ENTITY: {
                slots[slot].clear();
                audit(c, digest, "deleted extraction");
                audit_.back()["tile_id"] = original.tile_id;
                outcome.applied.push_back(c);
                break;
            }
            case CritiqueKind::UNHELPFUL_ATTRIBUTE_EXTRACT: {
                std::string key = norm_key(original.attribute);
                for (auto& s : slots) {
                    std::erase_if(s, [&](const Extraction& ex) {
                        return norm_key(ex.attribute) == key;
                    });
                }
                audit(c, digest, "deleted extractions of unhelpful attribute");
                audit_.back()["tile_id"] = original.tile_id;
                outcome.applied.push_back(c);
                break;
            }
            case CritiqueKind::INSUFFICIENT_CONTEXT: {
                RevisePayload rp;
                rp.kind = to_string(c.kind);
                rp.entity_name = payload.entity.display_name;
                rp.attribute = original.attribute;
                rp.value = original.value;
                rp.evidence = original.evidence;
                rp.sources = doc_sentences(original.source_url);

                std::string prompt =
                    prompts_.render(StageTag::REVISE, {{"PAYLOAD", render_payload(rp)},
                                                       {"KIND", rp.kind}});
                CompletionRequest request;
                request.stage_tag = StageTag::REVISE;
                request.prompt = prompt;
                request.temperature = 0.0;
                request.max_output_tokens =
                    std::max(64, gateway_.context_window() -
                                     default_tokenizer().count_tokens(prompt));
                StageOutput revision = gateway_.complete_parsed(request);
                const auto& items = std::get<ReviseResult>(revision).items;

                std::vector<Extraction> replacements;
                bool rejected = false;
                for (const auto& rec : items) {
                    const SourceDocument* home = nullptr;
                    if (corpus_) {
                        for (const auto* doc : corpus_->docs_for(payload.entity.id)) {
                            if (contains_nfc(doc->raw_text, rec.evidence)) {
                                home = doc;
                                break;
                            }
                        }
                    }
                    if (!home || !contains_nfc(rec.evidence, rec.value)) {
                        rejected = true;
                        break;
                    }
                    replacements.push_back(Extraction{rec.attribute, rec.value, rec.evidence,
                                                      home->url, original.entity_id,
                                                      original.tile_id});
                }

                if (rejected) {
                    if (std::find(exhausted_targets_.begin(), exhausted_targets_.end(), digest) ==
                        exhausted_targets_.end()) {
                        exhausted_targets_.push_back(digest);
                        outcome.warnings.push_back(
                            "revision rejected (extractiveness) for target " + c.target);
                    }
                    audit(c, digest, "revision rejected");
                    break;
                }
                if (replacements.empty()) {
                    exhausted_targets_.push_back(digest);
                    outcome.warnings.push_back("no richer context found for target " + c.target);
                    audit(c, digest, "kept original; no context found");
                    break;
                }
                slots[slot] = std::move(replacements);
                audit(c, digest, "re-extracted with more context");
                audit_.back()["tile_id"] = original.tile_id;
                outcome.applied.push_back(c);
                break;
            }
            default: break;  // compare-scope kinds never reach here
        }
    }

    payload.extractions.clear();
    for (auto& s : slots)
        payload.extractions.insert(payload.extractions.end(), s.begin(), s.end());
}

// ---- comparison-scope revision ------------------------------------------

namespace {

struct WorkingRow {
    bool alive = true;
    bool rewritten = false;  // structural rewrite; stale value targets skipped
    ComparisonRow row;
    std::vector<std::vector<ValueEntry>> vslots_a;
    std::vector<std::vector<ValueEntry>> vslots_b;
    std::vector<std::string> members;

    explicit WorkingRow(const ComparisonRow& r, std::vector<std::string> member_list)
        : row(r), members(std::move(member_list)) {
        for (const auto& e : r.cell_a) vslots_a.push_back({e});
        for (const auto& e : r.cell_b) vslots_b.push_back({e});
    }

    std::vector<ValueEntry> flatten_a() const {
        std::vector<ValueEntry> out;
        for (const auto& s : vslots_a) out.insert(out.end(), s.begin(), s.end());
        return out;
    }
    std::vector<ValueEntry> flatten_b() const {
        std::vector<ValueEntry> out;
        for (const auto& s : vslots_b) out.insert(out.end(), s.begin(), s.end());
        return out;
    }
    void replace_cells(std::vector<ValueEntry> a, std::vector<ValueEntry> b) {
        vslots_a.clear();
        vslots_b.clear();
        for (auto& e : a) vslots_a.push_back({std::move(e)});
        for (auto& e : b) vslots_b.push_back({std::move(e)});
        rewritten = true;
    }
    bool empty() const {
        return flatten_a().empty() && flatten_b().empty();
    }
};

}  // namespace

void CrEngine::revise(CompareScopePayload& payload, const std::vector<Critique>& critiques,
                      RevisionOutcome& outcome) {
    std::vector<WorkingRow> work;
    work.reserve(payload.rows.size());
    for (std::size_t i = 0; i < payload.rows.size(); ++i) {
        work.emplace_back(payload.rows[i], i < payload.member_attributes.size()
                                               ? payload.member_attributes[i]
                                               : std::vector<std::string>{
                                                     payload.rows[i].attribute});
    }

    auto relabel_contrast = [&](WorkingRow& wr) {
        ContrastPayload cp;
        ContrastPayloadRow prow;
        prow.attribute = wr.row.attribute;
        for (const auto& e : wr.flatten_a())
            prow.values.push_back(ContrastValue{'A', e.value, e.support_count});
        for (const auto& e : wr.flatten_b())
            prow.values.push_back(ContrastValue{'B', e.value, e.support_count});
        cp.rows.push_back(std::move(prow));

        std::string prompt =
            prompts_.render(StageTag::CONTRAST, {{"PAYLOAD", render_payload(cp)}});
        CompletionRequest request;
        request.stage_tag = StageTag::CONTRAST;
        request.prompt = prompt;
        request.temperature = 0.0;
        request.max_output_tokens =
            std::max(64, gateway_.context_window() - default_tokenizer().count_tokens(prompt));
        StageOutput output = gateway_.complete_parsed(request);
        const auto& rows = std::get<ContrastResult>(output).rows;
        if (!rows.empty()) wr.row.contrast_level = rows.front().level;
    };

    auto merge_cell = [&](WorkingRow& wr, char side) {
        std::vector<ValueEntry> entries =
            coalesce_entries(side == 'A' ? wr.flatten_a() : wr.flatten_b());
        if (entries.size() < 2) return entries;

        ValueMergePayload vm;
        vm.attribute = wr.row.attribute;
        for (const auto& e : entries)
            (side == 'A' ? vm.values_a : vm.values_b).push_back(e.value);

        std::string prompt =
            prompts_.render(StageTag::VALUE_MERGE, {{"PAYLOAD", render_payload(vm)}});
        CompletionRequest request;
        request.stage_tag = StageTag::VALUE_MERGE;
        request.prompt = prompt;
        request.temperature = 0.0;
        request.max_output_tokens =
            std::max(64, gateway_.context_window() - default_tokenizer().count_tokens(prompt));
        StageOutput output = gateway_.complete_parsed(request);
        const auto& merged = std::get<ValueMergeResult>(output);

        // collapse backend groups over the entries, then majority-filter
        std::vector<ValueEntry> groups;
        std::vector<int> group_of_entry(entries.size(), -1);
        for (const auto& g : merged.groups) {
            if (g.side != side) continue;
            ValueEntry combined;
            bool first = true;
            for (int member : g.member_indices) {
                if (member < 1 || member > static_cast<int>(entries.size())) continue;
                const ValueEntry& e = entries[static_cast<std::size_t>(member - 1)];
                if (first) {
                    combined = e;
                    first = false;
                } else {
                    combined.support_count += e.support_count;
                    combined.evidence_spans.insert(combined.evidence_spans.end(),
                                                   e.evidence_spans.begin(),
                                                   e.evidence_spans.end());
                    combined.source_urls.insert(combined.source_urls.end(),
                                                e.source_urls.begin(), e.source_urls.end());
                }
                group_of_entry[static_cast<std::size_t>(member - 1)] =
                    static_cast<int>(groups.size());
            }
            if (!first) groups.push_back(std::move(combined));
        }
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (group_of_entry[i] < 0) groups.push_back(entries[i]);
        }

        std::vector<std::pair<int, int>> conflicts;
        for (const auto& conflict : merged.conflicts) {
            if (conflict.side != side) continue;
            conflicts.emplace_back(conflict.group_i - 1, conflict.group_j - 1);
        }
        auto filtered = apply_majority_filter(groups, conflicts, config_.majority_threshold);
        if (filtered.unresolved_tie)
            outcome.warnings.push_back("tied conflicting values kept for attribute " +
                                       wr.row.attribute);
        return filtered.kept;
    };

    for (const Critique& c : critiques) {
        switch (c.kind) {
            case CritiqueKind::ORTHOGONAL_VALUES: {
                auto r = parse_r_target(c.target);
                if (!r || *r > static_cast<int>(work.size())) break;
                WorkingRow& wr = work[static_cast<std::size_t>(*r - 1)];
                if (!wr.alive || wr.rewritten) break;
                std::string digest = row_digest(wr.row);

                auto a = wr.flatten_a();
                auto b = wr.flatten_b();
                std::set<std::string> heads_a;
                std::set<std::string> heads_b;
                for (const auto& e : a) heads_a.insert(lex::head_noun(e.value));
                for (const auto& e : b) heads_b.insert(lex::head_noun(e.value));
                std::vector<ValueEntry> kept_a;
                std::vector<ValueEntry> kept_b;
                for (const auto& e : a)
                    if (heads_b.count(lex::head_noun(e.value))) kept_a.push_back(e);
                for (const auto& e : b)
                    if (heads_a.count(lex::head_noun(e.value))) kept_b.push_back(e);

                if (kept_a.empty() || kept_b.empty()) {
                    wr.alive = false;
                    outcome.warnings.push_back("row '" + wr.row.attribute +
                                               "' dropped: values could not be aligned");
                    audit(c, digest, "dropped unalignable row");
                } else {
                    wr.replace_cells(std::move(kept_a), std::move(kept_b));
                    relabel_contrast(wr);
                    audit(c, digest, "realigned values and re-ran contrast");
                }
                outcome.applied.push_back(c);
                break;
            }
            case CritiqueKind::INCONSISTENT_VALUES: {
                auto r = parse_r_target(c.target);
                if (!r || *r > static_cast<int>(work.size())) break;
                WorkingRow& wr = work[static_cast<std::size_t>(*r - 1)];
                if (!wr.alive || wr.rewritten) break;
                std::string digest = row_digest(wr.row);
                auto kept_a = merge_cell(wr, 'A');
                auto kept_b = merge_cell(wr, 'B');
                if (kept_a.empty() && kept_b.empty()) {
                    wr.alive = false;
                    audit(c, digest, "row emptied by consistency filter");
                } else {
                    wr.replace_cells(std::move(kept_a), std::move(kept_b));
                    audit(c, digest, "dropped minority conflicting values");
                }
                outcome.applied.push_back(c);
                break;
            }
            case CritiqueKind::UNHELPFUL_ATTRIBUTE_OR_VALUE: {
                if (auto vt = parse_value_target(c.target)) {
                    if (vt->row > static_cast<int>(work.size())) break;
                    WorkingRow& wr = work[static_cast<std::size_t>(vt->row - 1)];
                    if (!wr.alive || wr.rewritten) break;
                    auto& vslots = vt->side == 'A' ? wr.vslots_a : wr.vslots_b;
                    if (vt->value > static_cast<int>(vslots.size())) break;
                    auto& slot = vslots[static_cast<std::size_t>(vt->value - 1)];
                    if (slot.empty()) break;
                    std::string digest = entry_digest(wr.row.attribute, vt->side, slot.front());
                    slot.clear();
                    if (wr.empty()) wr.alive = false;
                    audit(c, digest, wr.alive ? "deleted unhelpful value"
                                              : "deleted unhelpful value; row emptied");
                    outcome.applied.push_back(c);
                } else if (auto r = parse_r_target(c.target)) {
                    if (*r > static_cast<int>(work.size())) break;
                    WorkingRow& wr = work[static_cast<std::size_t>(*r - 1)];
                    if (!wr.alive) break;
                    wr.alive = false;
                    audit(c, row_digest(wr.row), "deleted unhelpful row");
                    outcome.applied.push_back(c);
                }
                break;
            }
            case CritiqueKind::UNDER_OR_OVER_MERGED: {
                auto pair = parse_pair_target(c.target);
                if (!pair || pair->first > static_cast<int>(work.size()) ||
                    pair->second > static_cast<int>(work.size()))
                    break;
                WorkingRow& into = work[static_cast<std::size_t>(pair->first - 1)];
                WorkingRow& from = work[static_cast<std::size_t>(pair->second - 1)];
                if (!into.alive || !from.alive) break;
                std::string digest = row_digest(into.row) + row_digest(from.row);

                const std::string& attr_a = into.row.attribute;
                const std::string& attr_b = from.row.attribute;
                std::string canonical =
                    (attr_b.size() < attr_a.size() || (attr_b.size() == attr_a.size() &&
                                                       attr_b < attr_a))
                        ? attr_b
                        : attr_a;

                auto merged_a = into.flatten_a();
                auto from_a = from.flatten_a();
                merged_a.insert(merged_a.end(), from_a.begin(), from_a.end());
                auto merged_b = into.flatten_b();
                auto from_b = from.flatten_b();
                merged_b.insert(merged_b.end(), from_b.begin(), from_b.end());

                into.row.attribute = canonical;
                into.replace_cells(coalesce_entries(merged_a), coalesce_entries(merged_b));
                for (const auto& m : from.members) {
                    if (std::find(into.members.begin(), into.members.end(), m) ==
                        into.members.end())
                        into.members.push_back(m);
                }
                from.alive = false;
                relabel_contrast(into);
                audit(c, digest, "merged rows covering one attribute");
                outcome.applied.push_back(c);
                break;
            }
            case CritiqueKind::LONG_COMPLEX_CLAIM: {
                auto vt = parse_value_target(c.target);
                if (!vt || vt->row > static_cast<int>(work.size())) break;
                WorkingRow& wr = work[static_cast<std::size_t>(vt->row - 1)];
                if (!wr.alive || wr.rewritten) break;
                auto& vslots = vt->side == 'A' ? wr.vslots_a : wr.vslots_b;
                if (vt->value > static_cast<int>(vslots.size())) break;
                auto& slot = vslots[static_cast<std::size_t>(vt->value - 1)];
                if (slot.size() != 1) break;  // already edited this pass
                const ValueEntry original = slot.front();
                std::string digest = entry_digest(wr.row.attribute, vt->side, original);

                RevisePayload rp;
                rp.kind = to_string(c.kind);
                rp.entity_name = vt->side == 'A' ? payload.entity_a.display_name
                                                 : payload.entity_b.display_name;
                rp.attribute = wr.row.attribute;
                rp.value = original.value;
                rp.evidence =
                    original.evidence_spans.empty() ? "" : original.evidence_spans.front();

                std::string prompt =
                    prompts_.render(StageTag::REVISE, {{"PAYLOAD", render_payload(rp)},
                                                       {"KIND", rp.kind}});
                CompletionRequest request;
                request.stage_tag = StageTag::REVISE;
                request.prompt = prompt;
                request.temperature = 0.0;
                request.max_output_tokens =
                    std::max(64, gateway_.context_window() -
                                     default_tokenizer().count_tokens(prompt));
                StageOutput revision = gateway_.complete_parsed(request);
                const auto& items = std::get<ReviseResult>(revision).items;

                bool rejected = false;
                std::vector<ValueEntry> parts;
                for (const auto& rec : items) {
                    bool ok = std::any_of(original.evidence_spans.begin(),
                                          original.evidence_spans.end(),
                                          [&](const std::string& span) {
                                              return contains_nfc(span, rec.value);
                                          });
                    if (!ok) {
                        rejected = true;
                        break;
                    }
                    ValueEntry part = original;
                    part.value = rec.value;
                    parts.push_back(std::move(part));
                }
                if (rejected) {
                    if (std::find(exhausted_targets_.begin(), exhausted_targets_.end(), digest) ==
                        exhausted_targets_.end()) {
                        exhausted_targets_.push_back(digest);
                        outcome.warnings.push_back(
                            "revision rejected (extractiveness) for target " + c.target);
                    }
                    audit(c, digest, "revision rejected");
                    break;
                }
                if (parts.size() <= 1) {
                    exhausted_targets_.push_back(digest);
                    audit(c, digest, "claim could not be split");
                    break;
                }
                slot = std::move(parts);
                audit(c, digest, "split long claim into atomic claims");
                outcome.applied.push_back(c);
                break;
            }
            default: break;  // extract-scope kinds never reach here
        }
    }

    payload.rows.clear();
    payload.member_attributes.clear();
    for (auto& wr : work) {
        if (!wr.alive) continue;
        wr.row.cell_a = wr.flatten_a();
        wr.row.cell_b = wr.flatten_b();
        if (wr.row.cell_a.empty() && wr.row.cell_b.empty()) continue;
        payload.rows.push_back(wr.row);
        payload.member_attributes.push_back(wr.members);
    }
    if (corpus_) {
        // structural edits changed supports; refresh popularity and order
        std::vector<std::size_t> order(payload.rows.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::vector<ComparisonRow> rows = payload.rows;
        score_and_sort_rows(rows, *corpus_, config_.rank_weights);
        // map sorted rows back to member lists by locating originals
        std::vector<std::vector<std::string>> members;
        members.reserve(rows.size());
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < payload.rows.size(); ++i) {
                if (payload.rows[i].attribute == row.attribute) {
                    members.push_back(payload.member_attributes[i]);
                    break;
                }
            }
        }
        payload.rows = std::move(rows);
        payload.member_attributes = std::move(members);
    }
}

RevisionOutcome CrEngine::refine(ExtractScopePayload& payload, int max_iterations) {
    if (max_iterations < 1) throw std::invalid_argument("refine: max_iterations must be >= 1");
    RevisionOutcome outcome;
    std::optional<std::multiset<std::pair<int, std::string>>> previous;
    for (int iteration = 1; iteration <= max_iterations; ++iteration) {
        outcome.iterations_used = iteration;
        auto critiques = critique(payload);
        if (critiques.empty()) break;
        std::multiset<std::pair<int, std::string>> current;
        for (const auto& c : critiques) current.insert({static_cast<int>(c.kind), c.target});
        if (previous && current == *previous) {
            outcome.warnings.push_back("critique set unchanged; stopping refinement");
            break;
        }
        revise(payload, critiques, outcome);
        previous = std::move(current);
    }
    return outcome;
}

RevisionOutcome CrEngine::refine(CompareScopePayload& payload, int max_iterations) {
    if (max_iterations < 1) throw std::invalid_argument("refine: max_iterations must be >= 1");
    RevisionOutcome outcome;
    std::optional<std::multiset<std::pair<int, std::string>>> previous;
    for (int iteration = 1; iteration <= max_iterations; ++iteration) {
        outcome.iterations_used = iteration;
        auto critiques = critique(payload);
        if (critiques.empty()) break;
        std::multiset<std::pair<int, std::string>> current;
        for (const auto& c : critiques) current.insert({static_cast<int>(c.kind), c.target});
        if (previous && current == *previous) {
            outcome.warnings.push_back("critique set unchanged; stopping refinement");
            break;
        }
        revise(payload, critiques, outcome);
        previous = std::move(current);
    }
    return outcome;
}

}  // namespace versus
