#include "versus/ingest/tiling.hpp"

#include <sstream>
#include <stdexcept>

namespace versus {

namespace {

// Slices an oversized sentence at token boundaries. Fragments cover the whole
// text ([0, cut1), [cut1, cut2), ..., [cutN, size)) so they concatenate back
// to the original, whitespace included.
std::vector<Sentence> split_sentence(const Sentence& s, int effective, const Tokenizer& tok) {
    auto spans = token_spans(s.text);
    std::vector<Sentence> fragments;
    std::size_t slice_begin = 0;
    std::size_t next_token = 0;
    while (next_token < spans.size()) {
        std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(effective),
                                                 spans.size() - next_token);
        std::size_t last_token = next_token + take - 1;
        std::size_t slice_end =
            (last_token + 1 < spans.size()) ? spans[last_token + 1].first : s.text.size();
        Sentence frag;
        frag.text = s.text.substr(slice_begin, slice_end - slice_begin);
        frag.doc_url = s.doc_url;
        frag.char_offset = s.char_offset + slice_begin;
        frag.token_count = tok.count_tokens(frag.text);
        fragments.push_back(std::move(frag));
        slice_begin = slice_end;
        next_token = last_token + 1;
    }
    return fragments;
}

}  // namespace

TilingResult tile_sentences(const std::vector<Sentence>& sentences, const TokenBudget& budget,
                            const std::string& entity_id, const Tokenizer& tok) {
    const int effective = budget.effective();
    if (effective <= 0)
        throw std::invalid_argument("tile_sentences: effective budget must be positive");

    TilingResult result;
    Tile current;
    auto flush = [&] {
        if (current.sentences.empty()) return;
        current.id = entity_id + "-t" + std::to_string(result.tiles.size());
        current.entity_id = entity_id;
        result.tiles.push_back(std::move(current));
        current = Tile{};
    };

    auto append = [&](const Sentence& s) {
        if (current.token_total + s.token_count > effective) flush();
        current.token_total += s.token_count;
        current.sentences.push_back(s);
    };

    for (const Sentence& s : sentences) {
        if (s.token_count > effective) {
            std::ostringstream warn;
            warn << "sentence of " << s.token_count << " tokens exceeds budget " << effective
                 << " (doc " << s.doc_url << ", offset " << s.char_offset
                 << "); split into fragments";
            result.warnings.push_back(warn.str());
            for (const Sentence& frag : split_sentence(s, effective, tok)) append(frag);
        } else {
            append(s);
        }
    }
    flush();
    return result;
}

}  // namespace versus
