#pragma once

#include <vector>

#include "versus/core/types.hpp"
#include "versus/ingest/tokenizer.hpp"

namespace versus {

// Splits raw_text into sentences and keeps the ones worth feeding to the
// extraction stage. Boundaries are newlines, tabs, and terminal punctuation;
// kept sentences are verbatim substrings of raw_text at their char_offset.
//
// Filter: at least 4 tokens, at most 50% non-alphabetic characters (spaces
// excluded), and no verbatim duplicate within the same document. An
// all-boilerplate document legitimately yields an empty list.
std::vector<Sentence> extract_essential_sentences(const SourceDocument& doc,
                                                  const Tokenizer& tok = default_tokenizer());

}  // namespace versus
