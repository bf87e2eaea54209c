// Symbol table: bidirectional mapping between symbol ids and symbol texts.
//
// Id 0 is reserved for epsilon (empty text). A symbol text may span several
// codepoints (a multichar symbol such as "+Noun" or "^C"); tokenization is
// longest-match-first, so multichar symbols always win over a grapheme split.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "unicode.hpp"

namespace fstmorph {

using SymbolId = std::uint32_t;

inline constexpr SymbolId kEpsilon = 0;

class SymbolTable {
public:
    SymbolTable() : texts_{std::string()} { index_.emplace(std::string(), kEpsilon); }

    // Returns the id of `text`, registering it if new. Empty text is epsilon.
    SymbolId intern(std::string_view text) {
        auto it = index_.find(std::string(text));
        if (it != index_.end()) return it->second;
        const SymbolId id = static_cast<SymbolId>(texts_.size());
        texts_.emplace_back(text);
        index_.emplace(texts_.back(), id);
        if (texts_.back().size() > max_text_bytes_) max_text_bytes_ = texts_.back().size();
        return id;
    }

    std::optional<SymbolId> lookup(std::string_view text) const {
        auto it = index_.find(std::string(text));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& text_of(SymbolId id) const { return texts_.at(id); }

    std::size_t size() const { return texts_.size(); }

    bool contains(std::string_view text) const { return index_.count(std::string(text)) != 0; }

    // Longest-match-first segmentation of `text` into registered symbols.
    // Throws UnknownSymbolError when no registered symbol matches a prefix.
    std::vector<SymbolId> tokenize(std::string_view text) const {
        std::vector<SymbolId> out;
        std::size_t pos = 0;
        while (pos < text.size()) {
            const std::size_t remaining = text.size() - pos;
            std::size_t len = max_text_bytes_ < remaining ? max_text_bytes_ : remaining;
            bool matched = false;
            for (; len > 0; --len) {
                auto it = index_.find(std::string(text.substr(pos, len)));
                if (it != index_.end()) {
                    out.push_back(it->second);
                    pos += len;
                    matched = true;
                    break;
                }
            }
            if (!matched) throw UnknownSymbolError(pos, std::string(text));
        }
        return out;
    }

    std::string join(const std::vector<SymbolId>& ids) const {
        std::string out;
        for (SymbolId id : ids) out += text_of(id);
        return out;
    }

    bool operator==(const SymbolTable& other) const { return texts_ == other.texts_; }

private:
    std::vector<std::string> texts_;
    std::unordered_map<std::string, SymbolId> index_;
    std::size_t max_text_bytes_ = 0;
};

}  // namespace fstmorph
