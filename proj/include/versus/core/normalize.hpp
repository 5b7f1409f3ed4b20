#pragma once

#include <string>
#include <string_view>

namespace versus {

// Unicode NFC. Invalid UTF-8 passes through unchanged; pure-ASCII input is a no-op.
std::string nfc(std::string_view text);

// Locale-independent case folding (full Unicode via ICU, fast path for ASCII).
std::string fold_case(std::string_view text);

// Trim plus collapse of internal whitespace runs into a single space.
std::string collapse_whitespace(std::string_view text);

std::string trim(std::string_view text);

// Comparison key for attribute/value identity: NFC + whitespace collapse + case fold.
std::string norm_key(std::string_view text);

// Substring test used for extractiveness checks: exact byte match after NFC of both sides.
bool contains_nfc(std::string_view haystack, std::string_view needle);

}  // namespace versus
