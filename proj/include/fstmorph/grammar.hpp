// Bundled-grammar machinery: root and suffix dictionaries, and the builder
// that assembles the lexical transducer (lexicon composed over the rewrite
// cascade).
//
// roots.tsv     lemma<TAB>pos<TAB>class<TAB>gender?
//               The lemma cell may be `lemma:stem` to list an irregular
//               surface stem (e.g. जा:ज for the fused optative जो).
//               Class `-` means the root takes no suffixes.
// suffixes.tsv  form<TAB>class<TAB>feature-list (comma-separated tags from
//               the closed vocabulary, e.g. +Fem,+SG)
// Lines starting with `#` and blank lines are ignored; text is NFC-normalized
// on load.
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"
#include "lexc.hpp"
#include "rules.hpp"
#include "transducer.hpp"
#include "unicode.hpp"

namespace fstmorph {
namespace grammar {

inline constexpr std::string_view kNoClass = "-";

struct RootEntry {
    std::string lemma;
    std::optional<std::string> surface_stem;  // set only for irregular listed stems
    Pos pos = Pos::Noun;
    std::string inflection_class;
    std::optional<Gender> inherent_gender;
    std::size_t line = 0;

    const std::string& stem() const { return surface_stem ? *surface_stem : lemma; }
};

struct SuffixEntry {
    std::string form;
    std::string applicable_class;
    std::optional<Mood> mood;
    std::optional<Number> number;
    std::optional<Gender> gender;
    std::size_t line = 0;
};

struct ParseError : FstError {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& message)
        : FstError("line " + std::to_string(line_no) + ": " + message), line(line_no) {}
};

struct UnknownClassError : FstError {
    std::size_t line;
    std::string name;
    UnknownClassError(std::size_t line_no, std::string cls)
        : FstError("line " + std::to_string(line_no) + ": class '" + cls +
                   "' is not declared by any suffix"),
          line(line_no),
          name(std::move(cls)) {}
};

struct UnknownTagError : FstError {
    std::size_t line;
    std::string tag;
    UnknownTagError(std::size_t line_no, std::string t)
        : FstError("line " + std::to_string(line_no) + ": unknown tag '" + t + "'"),
          line(line_no),
          tag(std::move(t)) {}
};

struct GrammarError : FstError {
    using FstError::FstError;
};

struct Dictionaries {
    std::vector<RootEntry> roots;
    std::vector<SuffixEntry> suffixes;
    std::vector<std::string> warnings;  // duplicate rows, unused classes
};

namespace detail {

inline std::vector<std::string> split_tsv(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t tab = line.find('\t', pos);
        fields.emplace_back(line.substr(pos, tab - pos));
        if (tab == std::string_view::npos) break;
        pos = tab + 1;
    }
    return fields;
}

inline bool is_comment_or_blank(std::string_view line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;
}

inline Pos parse_pos(const std::string& text, std::size_t line) {
    if (text == "Noun") return Pos::Noun;
    if (text == "Adjective" || text == "Adj") return Pos::Adj;
    if (text == "Verb") return Pos::Verb;
    if (text == "Pronoun" || text == "Pron") return Pos::Pron;
    if (text == "Adverb" || text == "Adv") return Pos::Adv;
    throw UnknownTagError(line, text);
}

inline Gender parse_gender(const std::string& text, std::size_t line) {
    if (text == "Masc" || text == "Masculine") return Gender::Masc;
    if (text == "Fem" || text == "Feminine") return Gender::Fem;
    throw UnknownTagError(line, text);
}

template <typename Fn>
void for_each_row(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (!is_comment_or_blank(line)) fn(line, line_no);
        if (eol == text.size()) break;
        pos = eol + 1;
    }
}

}  // namespace detail

inline std::vector<RootEntry> parse_roots(std::string_view text) {
    std::vector<RootEntry> roots;
    detail::for_each_row(text, [&](std::string_view line, std::size_t line_no) {
        const auto fields = detail::split_tsv(line);
        if (fields.size() < 3 || fields.size() > 4 || fields[0].empty())
            throw ParseError(line_no, "expected lemma<TAB>pos<TAB>class[<TAB>gender]");
        RootEntry root;
        root.line = line_no;
        const std::size_t colon = fields[0].find(':');
        if (colon == std::string::npos) {
            root.lemma = nfc_normalize(fields[0]);
        } else {
            root.lemma = nfc_normalize(fields[0].substr(0, colon));
            root.surface_stem = nfc_normalize(fields[0].substr(colon + 1));
            if (root.lemma.empty() || root.surface_stem->empty())
                throw ParseError(line_no, "both lemma and stem must be non-empty");
        }
        root.pos = detail::parse_pos(fields[1], line_no);
        root.inflection_class = fields[2];
        if (root.inflection_class.empty())
            throw ParseError(line_no, "empty class (use '-' for none)");
        if (fields.size() == 4 && !fields[3].empty())
            root.inherent_gender = detail::parse_gender(fields[3], line_no);
        roots.push_back(std::move(root));
    });
    return roots;
}

inline std::vector<SuffixEntry> parse_suffixes(std::string_view text) {
    std::vector<SuffixEntry> suffixes;
    detail::for_each_row(text, [&](std::string_view line, std::size_t line_no) {
        const auto fields = detail::split_tsv(line);
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty())
            throw ParseError(line_no, "expected form<TAB>class<TAB>feature-list");
        SuffixEntry suffix;
        suffix.line = line_no;
        suffix.form = nfc_normalize(fields[0]);
        suffix.applicable_class = fields[1];
        std::size_t pos = 0;
        const std::string& feats = fields[2];
        while (pos < feats.size()) {
            std::size_t comma = feats.find(',', pos);
            if (comma == std::string::npos) comma = feats.size();
            const std::string tag = feats.substr(pos, comma - pos);
            pos = comma + 1;
            if (tag.empty()) continue;
            if (const auto n = fstmorph::detail::number_of_tag(tag)) {
                if (suffix.number) throw ParseError(line_no, "duplicate number feature");
                suffix.number = n;
            } else if (const auto g = fstmorph::detail::gender_of_tag(tag)) {
                if (suffix.gender) throw ParseError(line_no, "duplicate gender feature");
                suffix.gender = g;
            } else if (const auto m = fstmorph::detail::mood_of_tag(tag)) {
                if (suffix.mood) throw ParseError(line_no, "duplicate mood feature");
                suffix.mood = m;
            } else {
                throw UnknownTagError(line_no, tag);
            }
        }
        suffixes.push_back(std::move(suffix));
    });
    return suffixes;
}

// Loads and cross-validates both dictionaries. Duplicate rows are reported in
// `warnings`, not rejected; a root class with no declaring suffix row is an
// error.
inline Dictionaries load_dictionaries(const std::string& roots_path,
                                      const std::string& suffixes_path) {
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw FstError("cannot open " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    Dictionaries dicts;
    dicts.roots = parse_roots(slurp(roots_path));
    dicts.suffixes = parse_suffixes(slurp(suffixes_path));

    std::set<std::string> declared_classes;
    for (const SuffixEntry& s : dicts.suffixes) declared_classes.insert(s.applicable_class);
    std::set<std::string> used_classes;
    for (const RootEntry& r : dicts.roots) {
        if (r.inflection_class == kNoClass) continue;
        if (!declared_classes.count(r.inflection_class))
            throw UnknownClassError(r.line, r.inflection_class);
        used_classes.insert(r.inflection_class);
    }
    for (const std::string& cls : declared_classes)
        if (!used_classes.count(cls))
            dicts.warnings.push_back("class '" + cls + "' is declared but no root uses it");

    std::set<std::tuple<std::string, Pos, std::string>> seen_roots;
    for (const RootEntry& r : dicts.roots)
        if (!seen_roots.emplace(r.lemma, r.pos, r.inflection_class).second)
            dicts.warnings.push_back("duplicate root '" + r.lemma + "' (line " +
                                     std::to_string(r.line) + ")");
    std::set<std::tuple<std::string, std::string, std::string>> seen_suffixes;
    for (const SuffixEntry& s : dicts.suffixes) {
        std::string feat;
        for (const std::string& t :
             tag_sequence(Pos::Noun, s.mood, s.number.value_or(Number::SG), s.gender))
            feat += t;
        if (!seen_suffixes.emplace(s.form, s.applicable_class, feat).second)
            dicts.warnings.push_back("duplicate suffix '" + s.form + "' (line " +
                                     std::to_string(s.line) + ")");
    }
    return dicts;
}

// Generates the lexicon AST for the dictionaries: roots under LEXICON Root,
// one lexicon per (used) inflection class, and tag-only lexicons for
// bare-root analyses of roots with an inherent gender.
inline lexc::LexiconAst generate_lexicon(const std::vector<RootEntry>& roots,
                                         const std::vector<SuffixEntry>& suffixes) {
    // Bind each class to the single POS of the roots using it.
    std::map<std::string, Pos> class_pos;
    for (const RootEntry& r : roots) {
        if (r.inflection_class == kNoClass) continue;
        auto [it, inserted] = class_pos.emplace(r.inflection_class, r.pos);
        if (!inserted && it->second != r.pos)
            throw GrammarError("class '" + r.inflection_class +
                               "' is used by roots of different POS");
    }
    // Nominal suffixes must carry both gender and number.
    for (const SuffixEntry& s : suffixes) {
        const auto it = class_pos.find(s.applicable_class);
        if (it == class_pos.end()) continue;
        if ((it->second == Pos::Noun || it->second == Pos::Adj) && (!s.gender || !s.number))
            throw GrammarError("nominal suffix '" + s.form + "' (line " +
                               std::to_string(s.line) + ") needs gender and number features");
    }

    lexc::LexiconAst ast;
    ast.multichar_symbols = all_tags();
    ast.multichar_symbols.emplace_back(kMorphemeBoundary);

    const auto bare_name = [](Pos pos, const std::optional<Gender>& gender) {
        std::string name = std::string("Bare_") + display_of(pos);
        if (gender) name += std::string("_") + display_of(*gender);
        return name;
    };
    const auto class_name = [](const std::string& cls) { return "Sfx_" + cls; };

    std::vector<lexc::LexEntry> root_entries;
    std::vector<std::pair<std::string, std::vector<lexc::LexEntry>>> sublexicons;
    std::set<std::string> emitted;
    const auto ensure_sublexicon = [&](const std::string& name) -> std::vector<lexc::LexEntry>& {
        for (auto& [n, entries] : sublexicons)
            if (n == name) return entries;
        sublexicons.emplace_back(name, std::vector<lexc::LexEntry>{});
        return sublexicons.back().second;
    };

    for (const RootEntry& r : roots) {
        const bool bare = r.inherent_gender.has_value() || r.inflection_class == kNoClass;
        if (bare) {
            const std::string name = bare_name(r.pos, r.inherent_gender);
            auto& entries = ensure_sublexicon(name);
            if (emitted.insert(name).second) {
                std::string tags;
                for (const std::string& t :
                     tag_sequence(r.pos, std::nullopt, Number::SG, r.inherent_gender))
                    tags += t;
                entries.push_back({tags, "", "#", r.line});
            }
            root_entries.push_back({r.lemma, r.stem(), name, r.line});
        }
        if (r.inflection_class != kNoClass) {
            const std::string name = class_name(r.inflection_class);
            if (emitted.insert(name).second) {
                auto& entries = ensure_sublexicon(name);
                const Pos pos = class_pos.at(r.inflection_class);
                for (const SuffixEntry& s : suffixes) {
                    if (s.applicable_class != r.inflection_class) continue;
                    std::string upper{kMorphemeBoundary};
                    upper += s.form;
                    for (const std::string& t :
                         tag_sequence(pos, s.mood, s.number.value_or(Number::SG), s.gender))
                        upper += t;
                    entries.push_back(
                        {upper, std::string(kMorphemeBoundary) + s.form, "#", s.line});
                }
                if (entries.empty())
                    throw GrammarError("class '" + r.inflection_class + "' has no suffixes");
            }
            root_entries.push_back({r.lemma, r.stem(), name, r.line});
        }
    }

    ast.lexicons.emplace_back("Root", std::move(root_entries));
    for (auto& sub : sublexicons) ast.lexicons.push_back(std::move(sub));
    return ast;
}

// Assembles the single lexical transducer: compiled lexicon composed over the
// rewrite cascade, then reduced. Composition is applied rule by rule with the
// lexicon first, which keeps intermediate products proportional to the word
// list; the relation equals lexicon ∘ (r1 ∘ r2 ∘ …) by associativity.
inline Transducer build_analyzer(const std::vector<RootEntry>& roots,
                                 const std::vector<SuffixEntry>& suffixes,
                                 const std::vector<rules::RewriteRule>& cascade) {
    Transducer analyzer = lexc::compile(generate_lexicon(roots, suffixes));
    SymbolTable& symbols = analyzer.symbols_mutable();
    for (const rules::RewriteRule& rule : cascade) {
        symbols.intern(rule.source);
        if (!rule.target.empty()) symbols.intern(rule.target);
        if (!rule.left_context.empty() && rule.left_context != rules::kBoundary)
            symbols.intern(rule.left_context);
        if (!rule.right_context.empty() && rule.right_context != rules::kBoundary)
            symbols.intern(rule.right_context);
    }
    for (const rules::RewriteRule& rule : cascade)
        analyzer = compose(analyzer, rules::compile_rule(rule, analyzer.symbols()));
    return minimize(analyzer);
}

inline Transducer build_analyzer(const Dictionaries& dicts,
                                 const std::vector<rules::RewriteRule>& cascade) {
    return build_analyzer(dicts.roots, dicts.suffixes, cascade);
}

}  // namespace grammar
}  // namespace fstmorph
