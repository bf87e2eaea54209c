// Corpus ingestion: unique-word extraction with frequencies, and word-final
// suffix matching that suggests classifications for the manual lexicon step.
//
// Tokens are split on whitespace and punctuation; only tokens consisting of
// Devanagari codepoints (plus ZWJ/ZWNJ) are kept, NFC-normalized. Input is
// consumed in fixed-size chunks, so memory grows with the number of unique
// words, not corpus size.
#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grammar.hpp"
#include "unicode.hpp"

namespace fstmorph {
namespace corpus {

enum class SortOrder { Codepoint, FrequencyDescending };

struct WordList {
    std::vector<std::pair<std::string, std::uint64_t>> entries;  // unique, sorted
    std::uint64_t total_tokens = 0;  // every token, including filtered ones
};

namespace detail {

// Token separators: whitespace, ASCII punctuation, danda, and common
// general-punctuation codepoints. Anything else joins the current token.
inline bool is_separator(Codepoint cp) {
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v')
        return true;
    if (cp < 0x80) {
        const char c = static_cast<char>(cp);
        return !((c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'));
    }
    if (is_danda(cp)) return true;
    if (cp == 0x00A0) return true;                     // no-break space
    if (cp >= 0x2000 && cp <= 0x206F) {                // general punctuation
        return !is_zero_width_joiner(cp);
    }
    return false;
}

}  // namespace detail

inline WordList extract_words(std::istream& input, SortOrder order = SortOrder::Codepoint) {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;

    std::string token;
    bool token_is_word = true;
    const auto flush = [&] {
        if (!token.empty()) {
            ++total;
            if (token_is_word) ++counts[nfc_normalize(token)];
        }
        token.clear();
        token_is_word = true;
    };

    std::string carry;  // undecoded UTF-8 tail from the previous chunk
    char buffer[65536];
    while (input) {
        input.read(buffer, sizeof buffer);
        const std::streamsize n = input.gcount();
        if (n <= 0) break;
        carry.append(buffer, static_cast<std::size_t>(n));
        std::size_t pos = 0;
        while (pos < carry.size()) {
            const std::size_t start = pos;
            Codepoint cp;
            try {
                cp = decode_utf8(carry, pos);
            } catch (const Utf8Error&) {
                // A truncated sequence at the chunk edge is completed by the
                // next read; mid-stream garbage is a real error.
                const std::size_t remaining = carry.size() - start;
                if (remaining < 4 && input && !input.eof()) {
                    pos = start;
                    break;
                }
                throw;
            }
            if (detail::is_separator(cp)) {
                flush();
            } else {
                token.append(carry, start, pos - start);
                if (!is_word_codepoint(cp)) token_is_word = false;
            }
        }
        carry.erase(0, pos);
    }
    if (!carry.empty()) {
        std::size_t pos = 0;
        decode_utf8(carry, pos);  // throws on a genuinely truncated tail
    }
    flush();

    WordList list;
    list.total_tokens = total;
    list.entries.assign(counts.begin(), counts.end());
    if (order == SortOrder::FrequencyDescending) {
        std::sort(list.entries.begin(), list.entries.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
    } else {
        std::sort(list.entries.begin(), list.entries.end());
    }
    return list;
}

struct ClassificationSuggestion {
    std::string word;
    std::string candidate_root;
    std::string matched_suffix;  // the dictionary (lexical) form
    std::string candidate_class;

    friend bool operator==(const ClassificationSuggestion&,
                           const ClassificationSuggestion&) = default;
};

namespace detail {

// Plausible surface shapes of a suffix: the form itself, matra renderings of
// a leading independent vowel (after consonant-final stems), and the form
// minus a leading आ (which merges into a stem-final ा).
inline std::vector<std::string> surface_variants(const std::string& form) {
    std::vector<std::string> variants{form};
    if (form.empty()) return variants;
    std::size_t pos = 0;
    const Codepoint first = decode_utf8(form, pos);
    const std::string rest = form.substr(pos);
    std::vector<Codepoint> matras;
    switch (first) {
        case 0x0906: matras = {0x093E}; break;          // आ -> ा
        case 0x0907: matras = {0x093F, 0x0940}; break;  // इ -> ि, ी
        case 0x0908: matras = {0x0940}; break;          // ई -> ी
        case 0x0909: matras = {0x0941, 0x0942}; break;  // उ -> ु, ू
        case 0x090A: matras = {0x0942}; break;          // ऊ -> ू
        case 0x090F: matras = {0x0947}; break;          // ए -> े
        case 0x0910: matras = {0x0948}; break;          // ऐ -> ै
        case 0x0913: matras = {0x094B}; break;          // ओ -> ो
        case 0x0914: matras = {0x094C}; break;          // औ -> ौ
        default: break;
    }
    for (Codepoint m : matras) {
        std::string v;
        append_utf8(v, m);
        v += rest;
        variants.push_back(std::move(v));
    }
    if (first == 0x0906 && !rest.empty()) variants.push_back(rest);
    return variants;
}

}  // namespace detail

// For every word, every suffix whose plausible surface realization matches
// word-finally (leaving a non-empty root) yields a suggestion. The decision
// stays with the human: these are candidates, ordered by word-list order then
// suffix-dictionary order.
inline std::vector<ClassificationSuggestion> suggest_classes(
    const WordList& words, const std::vector<grammar::SuffixEntry>& suffixes) {
    std::vector<ClassificationSuggestion> out;
    for (const auto& [word, freq] : words.entries) {
        for (const grammar::SuffixEntry& suffix : suffixes) {
            for (const std::string& variant : detail::surface_variants(suffix.form)) {
                if (variant.empty() || variant.size() >= word.size()) continue;
                if (word.compare(word.size() - variant.size(), variant.size(), variant) != 0)
                    continue;
                ClassificationSuggestion s{word, word.substr(0, word.size() - variant.size()),
                                           suffix.form, suffix.applicable_class};
                // Distinct variants may strip the same root; keep one copy.
                if (std::find(out.begin(), out.end(), s) == out.end())
                    out.push_back(std::move(s));
            }
        }
    }
    return out;
}

// Cascade-verified suggestions: only candidates whose root ^ suffix actually
// regenerates the word through the rewrite cascade survive. The cascade must
// include its boundary-cleanup rules, otherwise nothing can regenerate.
inline std::vector<ClassificationSuggestion> suggest_classes(
    const WordList& words, const std::vector<grammar::SuffixEntry>& suffixes,
    const std::vector<rules::RewriteRule>& cascade) {
    const auto candidates = suggest_classes(words, suffixes);

    SymbolTable alphabet;
    const auto intern_codepoints = [&](const std::string& text) {
        std::size_t pos = 0;
        while (pos < text.size()) {
            const std::size_t begin = pos;
            decode_utf8(text, pos);
            alphabet.intern(std::string_view(text).substr(begin, pos - begin));
        }
    };
    for (const auto& c : candidates) intern_codepoints(c.word);
    for (const auto& s : suffixes) intern_codepoints(s.form);
    alphabet.intern(kMorphemeBoundary);
    for (const auto& rule : cascade) {
        alphabet.intern(rule.source);
        if (!rule.target.empty()) alphabet.intern(rule.target);
        if (!rule.left_context.empty() && rule.left_context != rules::kBoundary)
            alphabet.intern(rule.left_context);
        if (!rule.right_context.empty() && rule.right_context != rules::kBoundary)
            alphabet.intern(rule.right_context);
    }
    std::vector<Transducer> rule_fsts;
    rule_fsts.reserve(cascade.size());
    for (const auto& rule : cascade) rule_fsts.push_back(rules::compile_rule(rule, alphabet));

    std::vector<ClassificationSuggestion> out;
    for (const auto& c : candidates) {
        std::string form = c.candidate_root;
        form += kMorphemeBoundary;
        form += c.matched_suffix;
        std::vector<SymbolId> tokens = alphabet.tokenize(form);
        for (const Transducer& fst : rule_fsts) {
            const auto next = apply_down(fst, std::span<const SymbolId>(tokens));
            if (next.size() != 1) {
                tokens.clear();
                break;
            }
            tokens = next.front();
        }
        if (!tokens.empty() && alphabet.join(tokens) == c.word) out.push_back(c);
    }
    return out;
}

}  // namespace corpus
}  // namespace fstmorph
