#pragma once

#include <string>
#include <string_view>
#include <vector>

// Bundled word tables and the mechanical text rules built on them. These give
// the offline backend, the critique rules, and the evaluation oracles a fixed,
// testable notion of synonymy, polarity, helpfulness and value conflict.
namespace versus::lex {

// +1 positive, -1 negative, 0 unknown. Input should be a normalized token.
int token_polarity(std::string_view token);

// Polarity of a phrase: the first token with known polarity decides; 0 if none.
int phrase_polarity(std::string_view phrase);

// True if every token of the phrase has known polarity (a "bare opinion").
bool is_bare_opinion(std::string_view phrase);

// Last token of the normalized phrase; the aspect a value talks about.
std::string head_noun(std::string_view phrase);

// Light plural stripping on a normalized token ("rooms" -> "room").
std::string strip_plural(std::string_view token);

// Identity key for attribute clustering: norm_key + per-token plural
// stripping + bundled synonym canonicalization (amenities == facilities).
std::string attribute_merge_key(std::string_view attribute);

// Attributes that never make helpful comparison rows (wheels, color, ...).
bool is_stop_attribute(std::string_view attribute);

// Values that never make helpful cells ("four" and similar trivia).
bool is_stop_value(std::string_view value);

// Attribute/value pairings that signal a nonsensical extraction.
bool is_bad_extraction_pair(std::string_view attribute, std::string_view value);

// Mock conflict relation between two values of the same attribute and entity:
// same head noun with different claims conflicts unless the modifiers share a
// known polarity; bare opinions conflict on opposite polarity. A value that
// merely extends the other ("backpack" / "travel backpack") is redundant, not
// conflicting.
bool values_conflict(std::string_view a, std::string_view b);

// Redundant pair: identical after normalization, or one is a token-suffix of
// the other.
bool values_redundant(std::string_view a, std::string_view b);

// Product-line suffixes that turn an entity mention into a sibling product
// ("pro", "max", "mini", ...). Used by the wrong-entity rule.
bool is_sibling_suffix_token(std::string_view token);

// Entity-mention scan: returns the normalized aliases found in `text` given
// the known entity names, extending matches over sibling suffixes. An alias
// equal to `own` does not count as foreign; "<own> pro" does.
struct AliasHit {
    std::string alias;     // normalized matched span
    std::string entity;    // normalized base entity name, or "" for a sibling
    bool foreign = false;  // true if the hit is not the owning entity itself
};
std::vector<AliasHit> find_entity_mentions(std::string_view text,
                                           const std::vector<std::string>& entity_names,
                                           std::string_view own_entity_name);

// True if the text names a different entity (another known entity, or a
// sibling-suffixed variant of any known entity) and never names the owning
// entity standalone.
bool mentions_foreign_entity(std::string_view text,
                             const std::vector<std::string>& entity_names,
                             std::string_view own_entity_name);

}  // namespace versus::lex
