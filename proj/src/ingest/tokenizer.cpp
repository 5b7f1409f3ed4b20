#include "versus/ingest/tokenizer.hpp"

#include <cctype>

namespace versus {

std::vector<std::pair<std::size_t, std::size_t>> token_spans(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= n) break;
        std::size_t begin = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        spans.emplace_back(begin, i);
    }
    return spans;
}

int WhitespaceTokenizer::count_tokens(std::string_view text) const {
    int count = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++count;
        }
    }
    return count;
}

const Tokenizer& default_tokenizer() {
    static const WhitespaceTokenizer tok;
    return tok;
}

}  // namespace versus
