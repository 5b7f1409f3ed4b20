#include "versus/ingest/sentences.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "versus/core/normalize.hpp"

namespace versus {

namespace {

constexpr int kMinTokens = 4;
constexpr double kMaxNonAlphaRatio = 0.5;

bool essential(std::string_view text, const Tokenizer& tok) {
    if (tok.count_tokens(text) < kMinTokens) return false;
    std::size_t non_space = 0;
    std::size_t non_alpha = 0;
    for (unsigned char c : text) {
        if (std::isspace(c)) continue;
        ++non_space;
        // bytes >= 0x80 belong to multibyte letters more often than not
        if (!std::isalpha(c) && c < 0x80) ++non_alpha;
    }
    if (non_space == 0) return false;
    return static_cast<double>(non_alpha) / static_cast<double>(non_space) <= kMaxNonAlphaRatio;
}

}  // namespace

std::vector<Sentence> extract_essential_sentences(const SourceDocument& doc,
                                                  const Tokenizer& tok) {
    if (trim(doc.raw_text).empty())
        throw std::invalid_argument("extract_essential_sentences: raw_text empty");

    const std::string& text = doc.raw_text;
    std::vector<std::pair<std::size_t, std::size_t>> slices;  // [begin, end)
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool hard_break = c == '\n' || c == '\r' || c == '\t';
        bool terminal = c == '.' || c == '!' || c == '?';
        if (hard_break) {
            slices.emplace_back(begin, i);
            begin = i + 1;
        } else if (terminal) {
            // consume a run of terminal punctuation, break before whitespace/EOF
            std::size_t j = i;
            while (j + 1 < text.size() &&
                   (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?'))
                ++j;
            bool at_boundary = j + 1 >= text.size() ||
                               std::isspace(static_cast<unsigned char>(text[j + 1]));
            if (at_boundary) {
                slices.emplace_back(begin, j + 1);
                begin = j + 1;
                i = j;
            }
        }
    }
    if (begin < text.size()) slices.emplace_back(begin, text.size());

    std::vector<Sentence> out;
    std::set<std::string> seen;
    for (auto [b, e] : slices) {
        while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
        if (b >= e) continue;
        std::string sentence = text.substr(b, e - b);
        if (!essential(sentence, tok)) continue;
        if (!seen.insert(sentence).second) continue;  // verbatim duplicate in this doc

        Sentence s;
        s.text = std::move(sentence);
        s.doc_url = doc.url;
        s.char_offset = b;
        s.token_count = tok.count_tokens(s.text);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace versus
