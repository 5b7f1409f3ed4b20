#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace versus {

// FNV-1a, 64-bit. Used for content digests in traces, run ids and cache keys.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

inline std::string digest_hex(std::string_view data) { return to_hex(fnv1a64(data)); }

}  // namespace versus
