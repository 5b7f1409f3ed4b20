#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace versus {

// Token counting backs tile budgets. The default counter splits on whitespace;
// a model-specific tokenizer can be dropped in behind this interface as long
// as it stays deterministic and monotone under concatenation.
class Tokenizer {
  public:
    virtual ~Tokenizer() = default;
    virtual int count_tokens(std::string_view text) const = 0;
    virtual std::string name() const = 0;
};

class WhitespaceTokenizer final : public Tokenizer {
  public:
    int count_tokens(std::string_view text) const override;
    std::string name() const override { return "whitespace"; }
};

// Byte ranges [begin, end) of whitespace-separated tokens, in order.
std::vector<std::pair<std::size_t, std::size_t>> token_spans(std::string_view text);

const Tokenizer& default_tokenizer();

}  // namespace versus
