#include "versus/core/normalize.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <algorithm>
#include <cctype>

namespace versus {

namespace {

bool is_ascii(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c < 0x80; });
}

std::u16string to_utf16(std::string_view s, bool& ok) {
    UErrorCode status = U_ZERO_ERROR;
    int32_t len = 0;
    u_strFromUTF8(nullptr, 0, &len, s.data(), static_cast<int32_t>(s.size()), &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
        ok = false;
        return {};
    }
    status = U_ZERO_ERROR;
    std::u16string out(static_cast<std::size_t>(len), u'\0');
    u_strFromUTF8(out.data(), len, nullptr, s.data(), static_cast<int32_t>(s.size()), &status);
    ok = U_SUCCESS(status);
    return out;
}

std::string to_utf8(const char16_t* s, int32_t len, bool& ok) {
    UErrorCode status = U_ZERO_ERROR;
    int32_t out_len = 0;
    u_strToUTF8(nullptr, 0, &out_len, s, len, &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
        ok = false;
        return {};
    }
    status = U_ZERO_ERROR;
    std::string out(static_cast<std::size_t>(out_len), '\0');
    u_strToUTF8(out.data(), out_len, nullptr, s, len, &status);
    ok = U_SUCCESS(status);
    return out;
}

}  // namespace

std::string nfc(std::string_view text) {
    if (is_ascii(text)) return std::string(text);

    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) return std::string(text);

    bool ok = true;
    std::u16string u16 = to_utf16(text, ok);
    if (!ok) return std::string(text);

    status = U_ZERO_ERROR;
    int32_t need = unorm2_normalize(norm, u16.data(), static_cast<int32_t>(u16.size()), nullptr, 0,
                                    &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) return std::string(text);
    status = U_ZERO_ERROR;
    std::u16string normalized(static_cast<std::size_t>(need), u'\0');
    unorm2_normalize(norm, u16.data(), static_cast<int32_t>(u16.size()), normalized.data(), need,
                     &status);
    if (U_FAILURE(status)) return std::string(text);

    std::string out = to_utf8(normalized.data(), need, ok);
    return ok ? out : std::string(text);
}

std::string fold_case(std::string_view text) {
    if (is_ascii(text)) {
        std::string out(text);
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    }
    bool ok = true;
    std::u16string u16 = to_utf16(text, ok);
    if (!ok) return std::string(text);

    UErrorCode status = U_ZERO_ERROR;
    int32_t need = u_strFoldCase(nullptr, 0, u16.data(), static_cast<int32_t>(u16.size()),
                                 U_FOLD_CASE_DEFAULT, &status);
    if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) return std::string(text);
    status = U_ZERO_ERROR;
    std::u16string folded(static_cast<std::size_t>(need), u'\0');
    u_strFoldCase(folded.data(), need, u16.data(), static_cast<int32_t>(u16.size()),
                  U_FOLD_CASE_DEFAULT, &status);
    if (U_FAILURE(status)) return std::string(text);

    std::string out = to_utf8(folded.data(), need, ok);
    return ok ? out : std::string(text);
}

std::string trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_ws = true;  // leading whitespace dropped
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!in_ws) {
                out.push_back(' ');
                in_ws = true;
            }
        } else {
            out.push_back(static_cast<char>(c));
            in_ws = false;
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string norm_key(std::string_view text) { return fold_case(collapse_whitespace(nfc(text))); }

bool contains_nfc(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    return nfc(haystack).find(nfc(needle)) != std::string::npos;
}

}  // namespace versus
