#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "versus/core/normalize.hpp"
#include "versus/gateway/backend.hpp"
#include "versus/gateway/grammar.hpp"
#include "versus/gateway/payload.hpp"
#include "versus/ingest/tokenizer.hpp"
#include "versus/lang/lexicon.hpp"

namespace versus {

namespace {

constexpr int kBareValueMinTokens = 3;
constexpr int kLongClaimTokens = 25;

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool word_boundary(const std::string& hay, std::size_t pos, std::size_t len) {
    auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    bool left = pos == 0 || !alnum(hay[pos - 1]);
    bool right = pos + len >= hay.size() || !alnum(hay[pos + len]);
    return left && right;
}

// Trims whitespace and trailing terminal punctuation off [begin, end) and
// returns the slice of the original sentence, so the result stays verbatim.
std::string clean_slice(const std::string& sentence, std::size_t begin, std::size_t end) {
    while (begin < end && std::isspace(static_cast<unsigned char>(sentence[begin]))) ++begin;
    while (end > begin && (std::isspace(static_cast<unsigned char>(sentence[end - 1])) ||
                           sentence[end - 1] == '.' || sentence[end - 1] == '!' ||
                           sentence[end - 1] == '?'))
        --end;
    return sentence.substr(begin, end - begin);
}

// True when the mention region is the entity itself, possibly extended by
// sibling suffix tokens ("speakerx pro"). Extended mentions still extract;
// the wrong-entity critique removes them later.
bool mention_matches_entity(const std::string& region, const std::string& entity) {
    std::string rn = norm_key(region);
    std::string en = norm_key(entity);
    if (rn == en) return true;
    return rn.size() > en.size() + 1 && rn.compare(0, en.size(), en) == 0 &&
           rn[en.size()] == ' ';
}

// "The <attr> of <entity> is <value>." -- attr between "the " and the last
// " of " before the first " is ".
bool match_of_pattern(const std::string& sentence, const std::string& entity,
                      ExtractionRecord& out) {
    std::string hay = ascii_lower(sentence);
    if (hay.rfind("the ", 0) != 0) return false;
    std::size_t is_idx = hay.find(" is ");
    if (is_idx == std::string::npos) return false;
    std::size_t of_idx = hay.rfind(" of ", is_idx);
    if (of_idx == std::string::npos || of_idx < 4) return false;

    std::string region = sentence.substr(of_idx + 4, is_idx - (of_idx + 4));
    if (!mention_matches_entity(region, entity)) return false;

    std::string attr = clean_slice(sentence, 4, of_idx);
    std::string value = clean_slice(sentence, is_idx + 4, sentence.size());
    if (attr.empty() || value.empty()) return false;
    out = {attr, value, sentence};
    return true;
}

// "<entity>'s <attr> is <value>." -- the mention may carry sibling suffixes.
bool match_possessive_pattern(const std::string& sentence, const std::string& entity,
                              ExtractionRecord& out) {
    std::string hay = ascii_lower(sentence);
    std::string en = ascii_lower(trim(entity));
    if (en.empty()) return false;
    std::size_t pos = hay.find(en);
    while (pos != std::string::npos && !word_boundary(hay, pos, en.size()))
        pos = hay.find(en, pos + 1);
    if (pos == std::string::npos) return false;

    std::size_t cursor = pos + en.size();
    // skip sibling suffix tokens before the possessive
    while (cursor < hay.size() && hay[cursor] == ' ') {
        std::size_t tok_begin = cursor + 1;
        std::size_t tok_end = tok_begin;
        while (tok_end < hay.size() &&
               std::isalnum(static_cast<unsigned char>(hay[tok_end])))
            ++tok_end;
        if (!lex::is_sibling_suffix_token(hay.substr(tok_begin, tok_end - tok_begin))) break;
        cursor = tok_end;
    }
    if (hay.compare(cursor, 3, "'s ") != 0) return false;
    std::size_t attr_begin = cursor + 3;
    std::size_t is_idx = hay.find(" is ", attr_begin);
    if (is_idx == std::string::npos) return false;

    std::string attr = clean_slice(sentence, attr_begin, is_idx);
    std::string value = clean_slice(sentence, is_idx + 4, sentence.size());
    if (attr.empty() || value.empty()) return false;
    out = {attr, value, sentence};
    return true;
}

std::string run_extract(const ExtractPayload& payload) {
    StructuredExtractionList list;
    for (const auto& sentence : payload.sentences) {
        ExtractionRecord rec;
        if (match_of_pattern(sentence, payload.entity_name, rec) ||
            match_possessive_pattern(sentence, payload.entity_name, rec))
            list.items.push_back(std::move(rec));
    }
    return render_stage_output(StageTag::EXTRACT, list);
}

std::string run_attribute_merge(const AttributeMergePayload& payload) {
    AttributeMergeResult result;
    std::map<std::string, std::size_t> key_to_group;
    for (const auto& attr : payload.attributes) {
        std::string key = lex::attribute_merge_key(attr);
        auto [it, inserted] = key_to_group.emplace(key, result.groups.size());
        if (inserted) result.groups.push_back(AttributeGroup{});
        auto& members = result.groups[it->second].members;
        if (std::find(members.begin(), members.end(), attr) == members.end())
            members.push_back(attr);
    }
    for (auto& group : result.groups) {
        group.center = *std::min_element(group.members.begin(), group.members.end(),
                                         [](const std::string& a, const std::string& b) {
                                             if (a.size() != b.size()) return a.size() < b.size();
                                             return a < b;
                                         });
    }
    return render_stage_output(StageTag::ATTRIBUTE_MERGE, result);
}

void merge_side(char side, const std::vector<std::string>& values, ValueMergeResult& result) {
    std::map<std::string, std::size_t> key_to_group;
    std::vector<ValueGroupRecord> groups;
    std::vector<std::string> reps;
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::string key = norm_key(values[i]);
        auto [it, inserted] = key_to_group.emplace(key, groups.size());
        if (inserted) {
            groups.push_back(ValueGroupRecord{side, static_cast<int>(i + 1), {}});
            reps.push_back(values[i]);
        }
        groups[it->second].member_indices.push_back(static_cast<int>(i + 1));
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            if (lex::values_conflict(reps[i], reps[j]))
                result.conflicts.push_back(ValueConflictRecord{side, static_cast<int>(i + 1),
                                                               static_cast<int>(j + 1)});
        }
    }
    result.groups.insert(result.groups.end(), groups.begin(), groups.end());
}

std::string run_value_merge(const ValueMergePayload& payload) {
    ValueMergeResult result;
    merge_side('A', payload.values_a, result);
    merge_side('B', payload.values_b, result);
    return render_stage_output(StageTag::VALUE_MERGE, result);
}

std::string run_contrast(const ContrastPayload& payload) {
    ContrastResult result;
    for (const auto& row : payload.rows) {
        std::set<std::string> set_a;
        std::set<std::string> set_b;
        int support = 0;
        for (const auto& v : row.values) {
            (v.side == 'A' ? set_a : set_b).insert(norm_key(v.value));
            support += v.support;
        }
        ContrastRecord rec;
        rec.attribute = row.attribute;
        rec.level = set_a != set_b ? ContrastLevel::HIGH : ContrastLevel::NONE;
        rec.rank_hint = support;
        result.rows.push_back(std::move(rec));
    }
    return render_stage_output(StageTag::CONTRAST, result);
}

std::string run_usefulness(const UsefulnessPayload& payload) {
    bool useful = !lex::is_stop_attribute(payload.attribute);
    return render_stage_output(StageTag::USEFULNESS, RatingResult{useful ? "YES" : "NO"});
}

bool orthogonal_cells(const std::vector<std::string>& values_a,
                      const std::vector<std::string>& values_b) {
    if (values_a.empty() || values_b.empty()) return false;
    std::set<std::string> heads_a;
    std::set<std::string> heads_b;
    for (const auto& v : values_a) heads_a.insert(lex::head_noun(v));
    for (const auto& v : values_b) heads_b.insert(lex::head_noun(v));
    bool shared = std::any_of(heads_a.begin(), heads_a.end(),
                              [&](const std::string& h) { return heads_b.count(h) > 0; });
    if (shared) return false;
    // opinions against opinions and measurements against measurements are
    // aligned even without a shared head ("good" / "bad", "$199" / "$249")
    auto all_polar = [](const std::vector<std::string>& vs) {
        return std::all_of(vs.begin(), vs.end(),
                           [](const std::string& v) { return lex::phrase_polarity(v) != 0; });
    };
    if (all_polar(values_a) && all_polar(values_b)) return false;
    auto has_digits = [](const std::vector<std::string>& vs) {
        return std::any_of(vs.begin(), vs.end(), [](const std::string& v) {
            return std::any_of(v.begin(), v.end(),
                               [](unsigned char c) { return std::isdigit(c) != 0; });
        });
    };
    if (has_digits(values_a) && has_digits(values_b)) return false;
    return true;
}

std::string run_autorate(const AutoratePayload& payload) {
    const int tokens_long = kLongClaimTokens;
    std::vector<std::string> values_a;
    std::vector<std::string> values_b;
    for (const auto& v : payload.values) (v.side == 'A' ? values_a : values_b).push_back(v.value);

    std::vector<std::string> entity_names = {payload.entity_a, payload.entity_b};
    for (const auto& v : payload.values) {
        const std::string& own = v.side == 'A' ? payload.entity_a : payload.entity_b;
        if (lex::is_bad_extraction_pair(payload.attribute, v.value) ||
            norm_key(v.value).empty() ||
            (!v.evidence.empty() && lex::mentions_foreign_entity(v.evidence, entity_names, own)))
            return render_stage_output(StageTag::AUTORATE, RatingResult{"NO_BAD_EXTRACTION"});
    }
    for (const auto* side : {&values_a, &values_b}) {
        for (std::size_t i = 0; i < side->size(); ++i) {
            for (std::size_t j = i + 1; j < side->size(); ++j) {
                if (lex::values_conflict((*side)[i], (*side)[j]))
                    return render_stage_output(StageTag::AUTORATE,
                                               RatingResult{"NO_INCONSISTENT_VALUES"});
            }
        }
    }
    for (const auto* side : {&values_a, &values_b}) {
        for (std::size_t i = 0; i < side->size(); ++i) {
            for (std::size_t j = i + 1; j < side->size(); ++j) {
                if (lex::values_redundant((*side)[i], (*side)[j]))
                    return render_stage_output(StageTag::AUTORATE,
                                               RatingResult{"NO_UNDERMERGED_VALUES"});
            }
        }
    }
    if (orthogonal_cells(values_a, values_b))
        return render_stage_output(StageTag::AUTORATE, RatingResult{"NO_ORTHOGONAL_VALUES"});

    const auto& tok = default_tokenizer();
    bool unhelpful = lex::is_stop_attribute(payload.attribute) ||
                     payload.contrast_level == ContrastLevel::NONE;
    for (const auto& v : payload.values) {
        if (lex::is_stop_value(v.value)) unhelpful = true;
        if (tok.count_tokens(v.value) > tokens_long) unhelpful = true;
        if (tok.count_tokens(v.value) < kBareValueMinTokens && lex::is_bare_opinion(v.value))
            unhelpful = true;
    }
    return render_stage_output(StageTag::AUTORATE, RatingResult{unhelpful ? "OK" : "YES"});
}

std::string run_critique(const CritiquePayload& payload) {
    CritiqueResult result;
    const auto& tok = default_tokenizer();
    std::vector<std::string> entity_names = {payload.entity_a, payload.entity_b};

    auto add = [&](const std::string& kind, const std::string& target, const std::string& note) {
        result.items.push_back(CritiqueRecord{kind, target, note});
    };

    if (payload.scope == "EXTRACT") {
        for (const auto& item : payload.extract_items) {
            if (tok.count_tokens(item.value) < kBareValueMinTokens &&
                lex::is_bare_opinion(item.value))
                add("INSUFFICIENT_CONTEXT", "E" + std::to_string(item.index),
                    "bare opinion value lacks context");
        }
        for (const auto& item : payload.extract_items) {
            if (lex::mentions_foreign_entity(item.evidence, entity_names, payload.own_entity))
                add("WRONG_ENTITY", "E" + std::to_string(item.index),
                    "evidence names a different entity");
        }
        for (const auto& item : payload.extract_items) {
            if (lex::is_stop_attribute(item.attribute))
                add("UNHELPFUL_ATTRIBUTE_EXTRACT", "E" + std::to_string(item.index),
                    "attribute on the unhelpful list");
        }
        return render_stage_output(StageTag::CRITIQUE, result);
    }

    // COMPARE scope
    std::map<int, std::vector<const CritiqueCompareValue*>> values_a;
    std::map<int, std::vector<const CritiqueCompareValue*>> values_b;
    for (const auto& v : payload.row_values)
        (v.side == 'A' ? values_a : values_b)[v.row_index].push_back(&v);

    for (const auto& row : payload.rows) {
        std::vector<std::string> va;
        std::vector<std::string> vb;
        bool has_long_claim = false;
        for (auto* side : {&values_a, &values_b}) {
            auto it = side->find(row.index);
            if (it == side->end()) continue;
            for (const auto* v : it->second) {
                if (tok.count_tokens(v->value) > kLongClaimTokens) has_long_claim = true;
            }
        }
        // alignment cannot be judged on unsplit long claims; the long-claim
        // revision runs first, orthogonality is re-checked next iteration
        if (has_long_claim) continue;
        for (const auto* v : values_a[row.index]) va.push_back(v->value);
        for (const auto* v : values_b[row.index]) vb.push_back(v->value);
        if (orthogonal_cells(va, vb))
            add("ORTHOGONAL_VALUES", "R" + std::to_string(row.index),
                "cells talk about different aspects");
    }
    for (const auto& row : payload.rows) {
        for (const auto* side : {&values_a, &values_b}) {
            auto it = side->find(row.index);
            if (it == side->end()) continue;
            const auto& vs = it->second;
            bool conflict = false;
            for (std::size_t i = 0; i < vs.size() && !conflict; ++i) {
                for (std::size_t j = i + 1; j < vs.size() && !conflict; ++j) {
                    if (lex::values_conflict(vs[i]->value, vs[j]->value)) conflict = true;
                }
            }
            if (conflict)
                add("INCONSISTENT_VALUES", "R" + std::to_string(row.index),
                    std::string("conflicting values for entity ") +
                        (side == &values_a ? "A" : "B"));
        }
    }
    for (const auto& row : payload.rows) {
        if (lex::is_stop_attribute(row.attribute)) {
            add("UNHELPFUL_ATTRIBUTE_OR_VALUE", "R" + std::to_string(row.index),
                "attribute on the unhelpful list");
            continue;
        }
        for (const auto& v : payload.row_values) {
            if (v.row_index != row.index) continue;
            if (lex::is_stop_value(v.value))
                add("UNHELPFUL_ATTRIBUTE_OR_VALUE",
                    "R" + std::to_string(v.row_index) + "." + v.side +
                        std::to_string(v.value_index),
                    "value carries no signal");
        }
    }
    for (std::size_t i = 0; i < payload.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < payload.rows.size(); ++j) {
            if (lex::attribute_merge_key(payload.rows[i].attribute) ==
                lex::attribute_merge_key(payload.rows[j].attribute))
                add("UNDER_OR_OVER_MERGED",
                    "R" + std::to_string(payload.rows[i].index) + ",R" +
                        std::to_string(payload.rows[j].index),
                    "rows cover the same attribute");
        }
    }
    for (const auto& v : payload.row_values) {
        if (tok.count_tokens(v.value) > kLongClaimTokens)
            add("LONG_COMPLEX_CLAIM",
                "R" + std::to_string(v.row_index) + "." + v.side + std::to_string(v.value_index),
                "claim too long to contrast");
    }
    return render_stage_output(StageTag::CRITIQUE, result);
}

std::vector<std::string> split_atomic_claims(const std::string& value) {
    static const std::vector<std::string> markers = {" and ", "; ", " while "};
    std::vector<std::string> parts = {value};
    for (const auto& marker : markers) {
        std::vector<std::string> next;
        for (const auto& part : parts) {
            std::size_t begin = 0;
            std::size_t pos;
            while ((pos = part.find(marker, begin)) != std::string::npos) {
                next.push_back(part.substr(begin, pos - begin));
                begin = pos + marker.size();
            }
            next.push_back(part.substr(begin));
        }
        parts = std::move(next);
    }
    std::vector<std::string> cleaned;
    for (auto& p : parts) {
        std::string t = trim(p);
        if (!t.empty()) cleaned.push_back(std::move(t));
    }
    return cleaned;
}

std::string run_revise(const RevisePayload& payload) {
    ReviseResult result;
    const auto& tok = default_tokenizer();

    if (payload.kind == "INSUFFICIENT_CONTEXT") {
        auto spans = token_spans(payload.value);
        if (spans.empty()) return render_stage_output(StageTag::REVISE, result);
        std::string needle =
            ascii_lower(payload.value.substr(spans[0].first, spans[0].second - spans[0].first));
        for (const auto& src : payload.sources) {
            std::string hay = ascii_lower(src);
            std::size_t pos = hay.find(needle);
            while (pos != std::string::npos && !word_boundary(hay, pos, needle.size()))
                pos = hay.find(needle, pos + 1);
            if (pos == std::string::npos) continue;
            std::string candidate = clean_slice(src, pos, src.size());
            if (tok.count_tokens(candidate) < kBareValueMinTokens) continue;
            if (norm_key(candidate) == norm_key(payload.value)) continue;
            result.items.push_back(ExtractionRecord{payload.attribute, candidate, src});
        }
        return render_stage_output(StageTag::REVISE, result);
    }

    if (payload.kind == "LONG_COMPLEX_CLAIM") {
        for (const auto& part : split_atomic_claims(payload.value))
            result.items.push_back(ExtractionRecord{payload.attribute, part, payload.evidence});
        return render_stage_output(StageTag::REVISE, result);
    }

    // Deletions and re-runs are handled by the engine; nothing to generate.
    return render_stage_output(StageTag::REVISE, result);
}

class DeterministicBackend final : public CompletionBackend {
  public:
    CompletionResult complete(const CompletionRequest& request) override {
        CompletionResult result;
        result.backend_id = id();
        result.latency_ms = 0;
        auto block = payload_block(request.prompt);
        if (!block) {
            result.text = "ERROR: prompt carries no payload block";
            return result;
        }
        result.text = dispatch(request.stage_tag, *block);
        return result;
    }

    std::string id() const override { return "det"; }

  private:
    static std::string dispatch(StageTag tag, const std::string& block) {
        switch (tag) {
            case StageTag::EXTRACT:
                if (auto p = parse_extract_payload(block)) return run_extract(*p);
                break;
            case StageTag::ATTRIBUTE_MERGE:
                if (auto p = parse_attribute_merge_payload(block)) return run_attribute_merge(*p);
                break;
            case StageTag::VALUE_MERGE:
                if (auto p = parse_value_merge_payload(block)) return run_value_merge(*p);
                break;
            case StageTag::CONTRAST:
                if (auto p = parse_contrast_payload(block)) return run_contrast(*p);
                break;
            case StageTag::USEFULNESS:
                if (auto p = parse_usefulness_payload(block)) return run_usefulness(*p);
                break;
            case StageTag::CRITIQUE:
                if (auto p = parse_critique_payload(block)) return run_critique(*p);
                break;
            case StageTag::REVISE:
                if (auto p = parse_revise_payload(block)) return run_revise(*p);
                break;
            case StageTag::AUTORATE:
                if (auto p = parse_autorate_payload(block)) return run_autorate(*p);
                break;
        }
        return "ERROR: unparseable payload";
    }
};

}  // namespace

std::unique_ptr<CompletionBackend> make_deterministic_backend() {
    return std::make_unique<DeterministicBackend>();
}

}  // namespace versus
