#include "versus/lang/lexicon.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#include "versus/core/normalize.hpp"
#include "versus/ingest/tokenizer.hpp"

namespace versus::lex {

namespace {

const std::set<std::string>& positive_words() {
    static const std::set<std::string> words = {
        "good",    "great",   "excellent", "amazing",  "nice",   "comfortable",
        "spacious", "clean",  "friendly",  "fast",     "quiet",  "impressive",
        "reliable", "sturdy", "bright",    "rich",     "deep",   "warm",
        "crisp",    "smooth", "premium",   "generous", "decent"};
    return words;
}

const std::set<std::string>& negative_words() {
    static const std::set<std::string> words = {
        "bad",   "poor",   "limited", "terrible", "awful", "dirty", "slow",
        "noisy", "cramped", "rude",   "weak",     "flimsy", "dull", "harsh",
        "thin",  "muddy",  "shallow", "mediocre"};
    return words;
}

// Synonym groups; every member maps to the group's first entry.
const std::map<std::string, std::string>& synonym_canonical() {
    static const std::map<std::string, std::string> table = [] {
        const std::vector<std::vector<std::string>> groups = {
            {"amenity", "facility"},
            {"price", "cost"},
            {"picture", "photo"},
            {"bathroom", "washroom", "restroom"},
            {"sound quality", "audio quality"},
        };
        std::map<std::string, std::string> out;
        for (const auto& group : groups) {
            for (const auto& member : group) out[member] = group.front();
        }
        return out;
    }();
    return table;
}

const std::set<std::string>& stop_attributes() {
    static const std::set<std::string> attrs = {"wheels", "color", "colour", "legs",
                                                "number of wheels", "graphic card"};
    return attrs;
}

const std::set<std::string>& stop_values() {
    static const std::set<std::string> values = {"four", "two", "yes it exists"};
    return values;
}

std::vector<std::string> split_tokens(std::string_view normalized) {
    std::vector<std::string> out;
    std::istringstream in{std::string(normalized)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

int token_polarity(std::string_view token) {
    std::string t(token);
    if (positive_words().count(t)) return 1;
    if (negative_words().count(t)) return -1;
    return 0;
}

int phrase_polarity(std::string_view phrase) {
    for (const auto& tok : split_tokens(norm_key(phrase))) {
        if (int p = token_polarity(tok); p != 0) return p;
    }
    return 0;
}

bool is_bare_opinion(std::string_view phrase) {
    auto toks = split_tokens(norm_key(phrase));
    if (toks.empty()) return false;
    return std::all_of(toks.begin(), toks.end(),
                       [](const std::string& t) { return token_polarity(t) != 0; });
}

std::string head_noun(std::string_view phrase) {
    auto toks = split_tokens(norm_key(phrase));
    return toks.empty() ? std::string() : toks.back();
}

std::string strip_plural(std::string_view token) {
    std::string t(token);
    auto ends_with = [&](std::string_view suffix) {
        return t.size() > suffix.size() && t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (t.size() > 3 && ends_with("ies")) return t.substr(0, t.size() - 3) + "y";
    if (t.size() > 3 && (ends_with("ses") || ends_with("xes") || ends_with("zes") ||
                         ends_with("ches") || ends_with("shes")))
        return t.substr(0, t.size() - 2);
    if (t.size() > 3 && t.back() == 's' && !ends_with("ss") && !ends_with("us") && !ends_with("is"))
        return t.substr(0, t.size() - 1);
    return t;
}

std::string attribute_merge_key(std::string_view attribute) {
    auto toks = split_tokens(norm_key(attribute));
    std::string stemmed;
    for (const auto& tok : toks) {
        if (!stemmed.empty()) stemmed += ' ';
        stemmed += strip_plural(tok);
    }
    const auto& table = synonym_canonical();
    if (auto it = table.find(stemmed); it != table.end()) return it->second;
    return stemmed;
}

bool is_stop_attribute(std::string_view attribute) {
    return stop_attributes().count(norm_key(attribute)) > 0;
}

bool is_stop_value(std::string_view value) { return stop_values().count(norm_key(value)) > 0; }

bool is_bad_extraction_pair(std::string_view attribute, std::string_view value) {
    static const std::set<std::pair<std::string, std::string>> pairs = {
        {"transmission", "bright"},
        {"graphic card", "fast"},
    };
    if (pairs.count({norm_key(attribute), norm_key(value)})) return true;
    // An extraction whose value just repeats the attribute carries no signal.
    return !norm_key(value).empty() && norm_key(value) == norm_key(attribute);
}

bool values_redundant(std::string_view a, std::string_view b) {
    std::string na = norm_key(a);
    std::string nb = norm_key(b);
    if (na == nb) return true;
    auto ta = split_tokens(na);
    auto tb = split_tokens(nb);
    if (ta.empty() || tb.empty()) return false;
    // token-suffix test: "backpack" extends to "travel backpack"
    const auto& shorter = ta.size() <= tb.size() ? ta : tb;
    const auto& longer = ta.size() <= tb.size() ? tb : ta;
    return std::equal(shorter.rbegin(), shorter.rend(), longer.rbegin());
}

bool values_conflict(std::string_view a, std::string_view b) {
    std::string na = norm_key(a);
    std::string nb = norm_key(b);
    if (na.empty() || nb.empty() || na == nb) return false;
    if (values_redundant(na, nb)) return false;

    auto ta = split_tokens(na);
    auto tb = split_tokens(nb);
    if (ta.empty() || tb.empty()) return false;

    if (ta.back() == tb.back()) {
        // Same aspect, different claims. Compatible only when both modifiers
        // carry the same known polarity ("good view" / "great view").
        std::string ma(na.substr(0, na.size() - ta.back().size()));
        std::string mb(nb.substr(0, nb.size() - tb.back().size()));
        int pa = phrase_polarity(ma);
        int pb = phrase_polarity(mb);
        return !(pa != 0 && pa == pb);
    }

    // Bare opposite opinions conflict even without a shared head ("good" / "bad").
    if (is_bare_opinion(na) && is_bare_opinion(nb)) {
        int pa = phrase_polarity(na);
        int pb = phrase_polarity(nb);
        return pa != 0 && pb != 0 && pa != pb;
    }
    return false;
}

bool is_sibling_suffix_token(std::string_view token) {
    static const std::set<std::string> suffixes = {"pro",   "max", "mini", "plus", "ultra",
                                                   "lite",  "se",  "ii",   "2",    "3",
                                                   "edition"};
    return suffixes.count(std::string(token)) > 0;
}

std::vector<AliasHit> find_entity_mentions(std::string_view text,
                                           const std::vector<std::string>& entity_names,
                                           std::string_view own_entity_name) {
    std::string haystack = norm_key(text);
    std::string own = norm_key(own_entity_name);
    auto is_alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    std::vector<AliasHit> hits;
    for (const auto& name : entity_names) {
        std::string needle = norm_key(name);
        if (needle.empty()) continue;
        std::size_t pos = 0;
        while ((pos = haystack.find(needle, pos)) != std::string::npos) {
            std::size_t end = pos + needle.size();
            bool left_boundary = pos == 0 || !is_alnum(haystack[pos - 1]);
            bool right_boundary = end == haystack.size() || !is_alnum(haystack[end]);
            if (!left_boundary || !right_boundary) {
                pos = end;
                continue;
            }
            // Extend over sibling suffix tokens: "speakerx pro" is one mention
            // of a sibling product, not of speakerx.
            std::string alias = needle;
            bool sibling = false;
            std::size_t cursor = end;
            while (cursor < haystack.size() && haystack[cursor] == ' ') {
                std::size_t tok_begin = cursor + 1;
                std::size_t tok_end = haystack.find(' ', tok_begin);
                if (tok_end == std::string::npos) tok_end = haystack.size();
                std::string tok = haystack.substr(tok_begin, tok_end - tok_begin);
                while (!tok.empty() && !is_alnum(tok.back())) tok.pop_back();
                if (tok.size() > 2 && tok.compare(tok.size() - 2, 2, "'s") == 0)
                    tok.resize(tok.size() - 2);
                if (!is_sibling_suffix_token(tok)) break;
                alias += ' ';
                alias += tok;
                sibling = true;
                cursor = tok_end;
            }
            AliasHit hit;
            hit.alias = alias;
            hit.entity = sibling ? std::string() : needle;
            hit.foreign = sibling || needle != own;
            hits.push_back(std::move(hit));
            pos = end;
        }
    }
    return hits;
}

bool mentions_foreign_entity(std::string_view text,
                             const std::vector<std::string>& entity_names,
                             std::string_view own_entity_name) {
    auto hits = find_entity_mentions(text, entity_names, own_entity_name);
    bool any_foreign = false;
    bool own_standalone = false;
    for (const auto& hit : hits) {
        if (hit.foreign)
            any_foreign = true;
        else
            own_standalone = true;
    }
    return any_foreign && !own_standalone;
}

}  // namespace versus::lex
