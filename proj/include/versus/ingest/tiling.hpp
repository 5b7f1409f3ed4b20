#pragma once

#include <string>
#include <vector>

#include "versus/core/types.hpp"
#include "versus/ingest/tokenizer.hpp"

namespace versus {

struct TokenBudget {
    int context_window = 8192;
    int prompt_reserve = 1024;  // room for stage instructions and exemplars

    int effective() const { return context_window - prompt_reserve; }
};

// A chunk of essential sentences that fits the effective token budget.
struct Tile {
    std::string id;
    std::string entity_id;
    std::vector<Sentence> sentences;
    int token_total = 0;

    bool operator==(const Tile&) const = default;
};

struct TilingResult {
    std::vector<Tile> tiles;
    std::vector<std::string> warnings;
};

// Packs sentences into tiles greedily, preserving input order: each sentence
// is appended to the current tile if it fits, otherwise a new tile starts, so
// every tile is a contiguous run of the input. A sentence larger than the
// budget is split at token boundaries into fragments whose concatenation is
// the original text, with a warning recorded. Input must already be ordered
// by (document search_rank, char_offset); output never reorders.
//
// Throws std::invalid_argument when budget.effective() <= 0.
TilingResult tile_sentences(const std::vector<Sentence>& sentences, const TokenBudget& budget,
                            const std::string& entity_id,
                            const Tokenizer& tok = default_tokenizer());

}  // namespace versus
