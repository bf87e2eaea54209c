// UTF-8 codepoint handling and canonical normalization for Devanagari text.
//
// Normalization scope: canonical (NFC) treatment of the Devanagari block --
// the eleven precomposed nukta letters are composition exclusions and are
// decomposed, and combining marks are put in canonical order. Codepoints
// outside the block pass through unchanged.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fstmorph {

using Codepoint = char32_t;

struct Utf8Error : std::runtime_error {
    std::size_t byte_offset;
    explicit Utf8Error(std::size_t offset)
        : std::runtime_error("invalid UTF-8 at byte " + std::to_string(offset)),
          byte_offset(offset) {}
};

// Decodes one codepoint starting at `pos`; advances `pos` past it.
inline Codepoint decode_utf8(std::string_view s, std::size_t& pos) {
    const auto byte = [&](std::size_t i) -> std::uint32_t {
        return static_cast<unsigned char>(s[i]);
    };
    if (pos >= s.size()) throw Utf8Error(pos);
    const std::uint32_t b0 = byte(pos);
    std::size_t len;
    std::uint32_t cp;
    if (b0 < 0x80) { len = 1; cp = b0; }
    else if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else throw Utf8Error(pos);
    if (pos + len > s.size()) throw Utf8Error(pos);
    for (std::size_t i = 1; i < len; ++i) {
        const std::uint32_t bi = byte(pos + i);
        if ((bi & 0xC0) != 0x80) throw Utf8Error(pos + i);
        cp = (cp << 6) | (bi & 0x3F);
    }
    // Reject overlong encodings and surrogates.
    static constexpr std::uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
        throw Utf8Error(pos);
    pos += len;
    return static_cast<Codepoint>(cp);
}

inline void append_utf8(std::string& out, Codepoint cp) {
    const std::uint32_t c = static_cast<std::uint32_t>(cp);
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

inline std::vector<Codepoint> decode_utf8_string(std::string_view s) {
    std::vector<Codepoint> cps;
    std::size_t pos = 0;
    while (pos < s.size()) cps.push_back(decode_utf8(s, pos));
    return cps;
}

inline std::string encode_utf8(const std::vector<Codepoint>& cps) {
    std::string out;
    for (Codepoint cp : cps) append_utf8(out, cp);
    return out;
}

inline bool is_devanagari(Codepoint cp) { return cp >= 0x0900 && cp <= 0x097F; }

// Danda and double danda are sentence punctuation, not word material.
inline bool is_danda(Codepoint cp) { return cp == 0x0964 || cp == 0x0965; }

inline bool is_zero_width_joiner(Codepoint cp) { return cp == 0x200C || cp == 0x200D; }

// A codepoint that may appear inside a corpus word token.
inline bool is_word_codepoint(Codepoint cp) {
    return (is_devanagari(cp) && !is_danda(cp)) || is_zero_width_joiner(cp);
}

namespace detail {

// Canonical combining classes for the marks this normalizer reorders.
inline int combining_class(Codepoint cp) {
    switch (cp) {
        case 0x093C: return 7;    // nukta
        case 0x094D: return 9;    // virama
        case 0x0951: return 230;  // udatta
        case 0x0952: return 220;  // anudatta
        case 0x0953: return 230;  // grave accent
        case 0x0954: return 230;  // acute accent
        default: return 0;
    }
}

// Composition exclusions: NFC keeps these decomposed as base + nukta.
inline bool nukta_decomposition(Codepoint cp, Codepoint& base) {
    switch (cp) {
        case 0x0929: base = 0x0928; return true;
        case 0x0931: base = 0x0930; return true;
        case 0x0934: base = 0x0933; return true;
        case 0x0958: base = 0x0915; return true;
        case 0x0959: base = 0x0916; return true;
        case 0x095A: base = 0x0917; return true;
        case 0x095B: base = 0x091C; return true;
        case 0x095C: base = 0x0921; return true;
        case 0x095D: base = 0x0922; return true;
        case 0x095E: base = 0x092B; return true;
        case 0x095F: base = 0x092F; return true;
        default: return false;
    }
}

}  // namespace detail

inline std::string nfc_normalize(std::string_view text) {
    std::vector<Codepoint> cps;
    cps.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const Codepoint cp = decode_utf8(text, pos);
        Codepoint base;
        if (detail::nukta_decomposition(cp, base)) {
            cps.push_back(base);
            cps.push_back(0x093C);
        } else {
            cps.push_back(cp);
        }
    }
    // Canonical ordering: stable insertion sort of nonzero-class runs.
    for (std::size_t i = 1; i < cps.size(); ++i) {
        const int cc = detail::combining_class(cps[i]);
        if (cc == 0) continue;
        std::size_t j = i;
        while (j > 0) {
            const int prev = detail::combining_class(cps[j - 1]);
            if (prev == 0 || prev <= cc) break;
            std::swap(cps[j - 1], cps[j]);
            --j;
        }
    }
    return encode_utf8(cps);
}

}  // namespace fstmorph
