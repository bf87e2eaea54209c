// Lexicon source format: parser, validator, and compiler.
//
// A lexicon file is UTF-8 text with an optional Multichar_Symbols section,
// an optional (reserved, contentless) Declarations section, and one or more
// LEXICON sections, exactly one of which must be named Root. Each entry is
//
//   <upper>[:<lower>] <Continuation|#> ;
//
// where a bare <upper> means upper == lower and `0` denotes the empty string
// on either side. `!` starts a comment. An entry's pair is concatenated with
// the pairs of its continuation lexicon; a chain ends at `#`. The compiled
// transducer accepts exactly the pairs of all Root-to-# chains.
#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "transducer.hpp"

namespace fstmorph {
namespace lexc {

inline constexpr std::string_view kEndMarker = "#";

struct LexEntry {
    std::string upper;
    std::string lower;
    std::string continuation;
    std::size_t line = 0;
};

struct LexiconAst {
    std::vector<std::string> multichar_symbols;
    // Ordered by first appearance in the source.
    std::vector<std::pair<std::string, std::vector<LexEntry>>> lexicons;

    const std::vector<LexEntry>* find(std::string_view name) const {
        for (const auto& [n, entries] : lexicons)
            if (n == name) return &entries;
        return nullptr;
    }
};

struct MissingRootError : FstError {
    MissingRootError() : FstError("no LEXICON Root in source") {}
};

struct DuplicateLexiconError : FstError {
    std::string name;
    explicit DuplicateLexiconError(std::string lexicon)
        : FstError("duplicate LEXICON " + lexicon), name(std::move(lexicon)) {}
};

struct Diagnostic {
    enum class Kind { DanglingContinuation, UnreachableLexicon, ContinuationCycle };
    Kind kind;
    std::string detail;  // lexicon name or cycle path
    std::string message;
};

struct ValidationFailedError : FstError {
    std::vector<Diagnostic> diagnostics;
    explicit ValidationFailedError(std::vector<Diagnostic> diags)
        : FstError(diags.empty() ? "lexicon validation failed"
                                 : "lexicon validation failed: " + diags.front().message),
          diagnostics(std::move(diags)) {}
};

namespace detail {

inline std::vector<std::string> lex_line(std::string_view line) {
    std::vector<std::string> tokens;
    std::string current;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '!') break;  // comment to end of line
        if (c == ' ' || c == '\t' || c == '\r') {
            if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
        } else if (c == ';') {
            if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
            tokens.emplace_back(";");
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace detail

inline LexiconAst parse_lexicon(std::string_view source) {
    LexiconAst ast;
    std::set<std::string> seen_names;
    std::vector<LexEntry>* current = nullptr;
    enum class Section { Preamble, Multichar, Declarations, Lexicon };
    Section section = Section::Preamble;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        const std::size_t eol = std::min(source.find('\n', pos), source.size());
        const std::string_view line = source.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        auto tokens = detail::lex_line(line);
        if (tokens.empty()) {
            if (eol == source.size()) break;
            continue;
        }

        if (tokens[0] == "Multichar_Symbols") {
            section = Section::Multichar;
            tokens.erase(tokens.begin());
        } else if (tokens[0] == "Declarations") {
            // Reserved section: recognized, contents carry no meaning yet.
            section = Section::Declarations;
            tokens.erase(tokens.begin());
        } else if (tokens[0] == "LEXICON") {
            if (tokens.size() != 2 || tokens[1] == ";")
                throw SyntaxError(line_no, "LEXICON requires exactly one name");
            if (!seen_names.insert(tokens[1]).second) throw DuplicateLexiconError(tokens[1]);
            ast.lexicons.emplace_back(tokens[1], std::vector<LexEntry>{});
            current = &ast.lexicons.back().second;
            section = Section::Lexicon;
            tokens.clear();
        }

        if (tokens.empty()) {
            if (eol == source.size()) break;
            continue;
        }
        switch (section) {
            case Section::Multichar:
                for (auto& tok : tokens) {
                    if (tok == ";") throw SyntaxError(line_no, "';' not allowed in Multichar_Symbols");
                    ast.multichar_symbols.push_back(std::move(tok));
                }
                break;
            case Section::Declarations:
                break;  // ignored
            case Section::Preamble:
                throw SyntaxError(line_no, "expected Multichar_Symbols or LEXICON, got '" +
                                               tokens[0] + "'");
            case Section::Lexicon: {
                if (tokens.size() != 3 || tokens[2] != ";")
                    throw SyntaxError(line_no,
                                      "entry must be '<upper>[:<lower>] <Continuation|#> ;'");
                LexEntry entry;
                entry.line = line_no;
                const std::string& pair = tokens[0];
                const std::size_t colon = pair.find(':');
                if (colon == std::string::npos) {
                    entry.upper = pair;
                    entry.lower = pair;
                } else {
                    entry.upper = pair.substr(0, colon);
                    entry.lower = pair.substr(colon + 1);
                    if (entry.upper.empty() || entry.lower.empty())
                        throw SyntaxError(line_no, "both sides of ':' must be present (use 0 for epsilon)");
                }
                if (entry.upper == "0") entry.upper.clear();
                if (entry.lower == "0") entry.lower.clear();
                entry.continuation = tokens[1];
                if (entry.continuation == ";")
                    throw SyntaxError(line_no, "entry is missing a continuation");
                current->push_back(std::move(entry));
                break;
            }
        }
        if (eol == source.size()) break;
    }

    if (ast.find("Root") == nullptr) throw MissingRootError();
    return ast;
}

// Reports dangling continuations, lexicons unreachable from Root, and
// continuation cycles. An empty result means the AST compiles to an acyclic
// transducer.
inline std::vector<Diagnostic> validate(const LexiconAst& ast) {
    std::vector<Diagnostic> diags;
    std::set<std::string> reported_dangling;
    for (const auto& [name, entries] : ast.lexicons) {
        for (const LexEntry& entry : entries) {
            if (entry.continuation == kEndMarker) continue;
            if (ast.find(entry.continuation) == nullptr &&
                reported_dangling.insert(entry.continuation).second) {
                diags.push_back({Diagnostic::Kind::DanglingContinuation, entry.continuation,
                                 "continuation '" + entry.continuation + "' names no lexicon (line " +
                                     std::to_string(entry.line) + ")"});
            }
        }
    }

    // Reachability from Root over the continuation graph.
    std::set<std::string> reachable;
    std::vector<std::string> stack{"Root"};
    reachable.insert("Root");
    while (!stack.empty()) {
        const std::string name = std::move(stack.back());
        stack.pop_back();
        const auto* entries = ast.find(name);
        if (!entries) continue;
        for (const LexEntry& entry : *entries) {
            if (entry.continuation == kEndMarker || ast.find(entry.continuation) == nullptr)
                continue;
            if (reachable.insert(entry.continuation).second) stack.push_back(entry.continuation);
        }
    }
    for (const auto& [name, entries] : ast.lexicons) {
        if (!reachable.count(name)) {
            diags.push_back({Diagnostic::Kind::UnreachableLexicon, name,
                             "lexicon '" + name + "' is not reachable from Root"});
        }
    }

    // Cycle detection over the continuation graph (DFS, grey/black coloring).
    std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
    std::vector<std::string> path;
    std::set<std::string> in_cycle;
    auto dfs = [&](auto&& self, const std::string& name) -> void {
        color[name] = 1;
        path.push_back(name);
        const auto* entries = ast.find(name);
        if (entries) {
            std::set<std::string> nexts;
            for (const LexEntry& entry : *entries)
                if (entry.continuation != kEndMarker && ast.find(entry.continuation) != nullptr)
                    nexts.insert(entry.continuation);
            for (const std::string& next : nexts) {
                if (color[next] == 1) {
                    // Report the cycle once, as the path segment from `next`.
                    auto it = std::find(path.begin(), path.end(), next);
                    std::string joined;
                    bool fresh = false;
                    for (; it != path.end(); ++it) {
                        if (!joined.empty()) joined += " -> ";
                        joined += *it;
                        fresh = in_cycle.insert(*it).second || fresh;
                    }
                    if (fresh)
                        diags.push_back({Diagnostic::Kind::ContinuationCycle, joined,
                                         "continuation cycle: " + joined});
                } else if (color[next] == 0) {
                    self(self, next);
                }
            }
        }
        path.pop_back();
        color[name] = 2;
    };
    for (const auto& [name, entries] : ast.lexicons)
        if (color[name] == 0) dfs(dfs, name);

    return diags;
}

// Compiles a validated AST. Entries of one lexicon share prefix states (a
// trie over aligned token pairs); an entry's end links to its continuation's
// start, or is final for `#`.
inline Transducer compile(const LexiconAst& ast) {
    auto diags = validate(ast);
    if (!diags.empty()) throw ValidationFailedError(std::move(diags));

    SymbolTable symbols;
    for (const std::string& sym : ast.multichar_symbols) symbols.intern(sym);
    // Register single codepoints of every entry side, in source order.
    for (const auto& [name, entries] : ast.lexicons) {
        for (const LexEntry& entry : entries) {
            for (const std::string* side : {&entry.upper, &entry.lower}) {
                std::size_t p = 0;
                while (p < side->size()) {
                    // Longest-match against already-registered (multichar)
                    // symbols; unmatched text contributes its codepoints.
                    bool matched = false;
                    for (std::size_t len = std::min<std::size_t>(side->size() - p, 64); len > 0;
                         --len) {
                        if (symbols.contains(std::string_view(*side).substr(p, len))) {
                            p += len;
                            matched = true;
                            break;
                        }
                    }
                    if (!matched) {
                        std::size_t q = p;
                        decode_utf8(*side, q);
                        symbols.intern(std::string_view(*side).substr(p, q - p));
                        p = q;
                    }
                }
            }
        }
    }

    Transducer t(symbols);
    // One sub-network per lexicon, rooted at its start state.
    std::map<std::string, StateId> lexicon_start;
    for (const auto& [name, entries] : ast.lexicons)
        lexicon_start[name] = (name == "Root") ? t.start() : t.add_state();

    const auto find_arc = [&](StateId from, SymbolId upper, SymbolId lower) -> StateId {
        for (const Arc& arc : t.arcs(from))
            if (arc.upper == upper && arc.lower == lower) return arc.target;
        const StateId next = t.add_state();
        t.add_arc(from, upper, lower, next);
        return next;
    };

    for (const auto& [name, entries] : ast.lexicons) {
        for (const LexEntry& entry : entries) {
            const auto upper = t.symbols().tokenize(entry.upper);
            const auto lower = t.symbols().tokenize(entry.lower);
            const std::size_t len = std::max(upper.size(), lower.size());
            StateId state = lexicon_start.at(name);
            for (std::size_t i = 0; i < len; ++i)
                state = find_arc(state, i < upper.size() ? upper[i] : kEpsilon,
                                 i < lower.size() ? lower[i] : kEpsilon);
            if (entry.continuation == kEndMarker) {
                t.set_final(state);
            } else {
                const StateId next = lexicon_start.at(entry.continuation);
                // One epsilon link suffices for entries sharing a full prefix.
                bool linked = false;
                for (const Arc& arc : t.arcs(state))
                    if (arc.upper == kEpsilon && arc.lower == kEpsilon && arc.target == next)
                        linked = true;
                if (!linked) t.add_arc(state, kEpsilon, kEpsilon, next);
            }
        }
    }
    return trim(t);
}

inline LexiconAst parse_lexicon_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FstError("cannot open lexicon file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_lexicon(buffer.str());
}

}  // namespace lexc
}  // namespace fstmorph
