#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Offsets throughout the toolkit are Unicode scalar-value (code point)
// offsets, never bytes. Inputs come from JSON parsing and are valid UTF-8;
// a stray continuation byte is counted as one code point rather than
// rejected.
namespace sgdkit::utf8 {

inline std::size_t sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead >> 5) == 0x6) return 2;
    if ((lead >> 4) == 0xE) return 3;
    if ((lead >> 3) == 0x1E) return 4;
    return 1;
}

inline std::size_t count(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); i += sequence_length(static_cast<unsigned char>(s[i]))) ++n;
    return n;
}

// Byte offset of the cp-th code point; s.size() when cp >= count(s).
inline std::size_t byte_offset(std::string_view s, std::size_t cp) {
    std::size_t i = 0;
    while (cp > 0 && i < s.size()) {
        i += sequence_length(static_cast<unsigned char>(s[i]));
        --cp;
    }
    return i;
}

inline std::string substr(std::string_view s, std::size_t start_cp, std::size_t end_cp) {
    const std::size_t a = byte_offset(s, start_cp);
    const std::size_t b = byte_offset(s, end_cp);
    return std::string(s.substr(a, b > a ? b - a : 0));
}

inline std::vector<char32_t> decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto lead = static_cast<unsigned char>(s[i]);
        const std::size_t len = sequence_length(lead);
        char32_t cp = 0;
        if (len == 1 || i + len > s.size()) {
            cp = lead;
        } else {
            static constexpr unsigned char kMask[5] = {0, 0x7F, 0x1F, 0x0F, 0x07};
            cp = lead & kMask[len];
            for (std::size_t k = 1; k < len; ++k)
                cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

} // namespace sgdkit::utf8
