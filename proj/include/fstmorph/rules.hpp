// Context-conditioned orthographic rewrite rules.
//
// A rule `source -> target || left _ right` replaces every occurrence of the
// single symbol `source` whose neighbors satisfy the contexts. Replacement is
// obligatory and applies in one left-to-right pass with contexts read from
// the input string, so all eligible occurrences are rewritten simultaneously.
// `0` as the target deletes the source; `.#.` in a context position denotes
// the word boundary; either context may be omitted. A rule transducer is
// total: strings without an eligible occurrence map to themselves.
#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "transducer.hpp"

namespace fstmorph {
namespace rules {

inline constexpr std::string_view kBoundary = ".#.";

struct RewriteRule {
    std::string source;
    std::string target;         // empty = epsilon (deletion)
    std::string left_context;   // empty = unconditioned, ".#." = word boundary
    std::string right_context;  // likewise

    friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
};

inline RewriteRule parse_rule(std::string_view text) {
    std::vector<std::string> tokens;
    {
        std::string current;
        for (char c : text) {
            if (c == '!') break;
            if (c == ' ' || c == '\t' || c == '\r') {
                if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
            } else {
                current.push_back(c);
            }
        }
        if (!current.empty()) tokens.push_back(std::move(current));
    }
    if (tokens.empty()) throw SyntaxError("empty rule");
    if (tokens[0] == "->") throw SyntaxError("rule has an empty source");
    if (tokens.size() < 3 || tokens[1] != "->")
        throw SyntaxError("expected 'source -> target [|| left _ right]'");
    RewriteRule rule;
    rule.source = tokens[0];
    if (rule.source == "0") throw SyntaxError("source may not be epsilon");
    rule.target = tokens[2] == "0" ? std::string() : tokens[2];
    if (tokens.size() == 3) return rule;
    if (tokens[3] != "||") throw SyntaxError("expected '||' before context");
    std::vector<std::string> left, right;
    bool seen_slot = false;
    for (std::size_t i = 4; i < tokens.size(); ++i) {
        if (tokens[i] == "_") {
            if (seen_slot) throw SyntaxError("more than one '_' in context");
            seen_slot = true;
        } else {
            (seen_slot ? right : left).push_back(tokens[i]);
        }
    }
    if (!seen_slot) throw SyntaxError("context requires '_'");
    if (left.size() > 1 || right.size() > 1)
        throw SyntaxError("contexts are limited to a single symbol or " + std::string(kBoundary));
    if (!left.empty()) rule.left_context = left[0];
    if (!right.empty()) rule.right_context = right[0];
    return rule;
}

// One rule per line; `!` comments and blank lines are skipped.
inline std::vector<RewriteRule> parse_rules(std::string_view text) {
    std::vector<RewriteRule> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        bool blank = true;
        for (char c : line) {
            if (c == '!') break;
            if (c != ' ' && c != '\t' && c != '\r') {
                blank = false;
                break;
            }
        }
        if (!blank) {
            try {
                out.push_back(parse_rule(line));
            } catch (const SyntaxError& e) {
                throw SyntaxError(line_no, e.what());
            }
        }
        if (eol == text.size()) break;
        pos = eol + 1;
    }
    return out;
}

inline std::vector<RewriteRule> parse_rule_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FstError("cannot open rule file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_rules(buffer.str());
}

namespace detail {

enum class ContextKind { None, Boundary, Symbol };

inline ContextKind context_kind(const std::string& ctx) {
    if (ctx.empty()) return ContextKind::None;
    if (ctx == kBoundary) return ContextKind::Boundary;
    return ContextKind::Symbol;
}

}  // namespace detail

// Compiles a rule to a transducer over the whole alphabet. The machine is
// input-deterministic; when the right context needs lookahead the output lags
// the input by one symbol (a pending state), resolved by the next symbol or,
// at string end, by an epsilon-input arc into a final sink.
inline Transducer compile_rule(const RewriteRule& rule, const SymbolTable& alphabet) {
    const auto require = [&](const std::string& text) -> SymbolId {
        const auto id = alphabet.lookup(text);
        if (!id) throw UnknownSymbolError(0, text);
        return *id;
    };
    const SymbolId src = require(rule.source);
    const SymbolId tgt = rule.target.empty() ? kEpsilon : require(rule.target);
    const auto lkind = detail::context_kind(rule.left_context);
    const auto rkind = detail::context_kind(rule.right_context);
    const SymbolId lsym =
        lkind == detail::ContextKind::Symbol ? require(rule.left_context) : kEpsilon;
    const SymbolId rsym =
        rkind == detail::ContextKind::Symbol ? require(rule.right_context) : kEpsilon;

    Transducer t(alphabet);

    // Core tracking states. `begin` exists separately only for a .#. left
    // context; `after_l` only for a symbol left context.
    const StateId after_other = t.start();
    const StateId begin =
        lkind == detail::ContextKind::Boundary ? t.add_state() : after_other;
    const StateId after_l =
        lkind == detail::ContextKind::Symbol ? t.add_state() : after_other;
    if (lkind == detail::ContextKind::Boundary) t.set_start(begin);

    const auto left_ok = [&](StateId state) {
        switch (lkind) {
            case detail::ContextKind::None: return true;
            case detail::ContextKind::Boundary: return state == begin;
            case detail::ContextKind::Symbol: return state == after_l;
        }
        return false;
    };
    const auto class_of = [&](SymbolId x) {
        return (lkind == detail::ContextKind::Symbol && x == lsym) ? after_l : after_other;
    };

    std::vector<StateId> core{after_other};
    if (begin != after_other) core.push_back(begin);
    if (after_l != after_other) core.push_back(after_l);
    for (StateId s : core) t.set_final(s);

    if (rkind == detail::ContextKind::None) {
        for (StateId state : core) {
            for (SymbolId x = 1; x < t.symbols().size(); ++x) {
                const bool fires = (x == src) && left_ok(state);
                t.add_arc(state, x, fires ? tgt : x, class_of(x));
            }
        }
        return t;
    }

    // Lookahead form: a pending state holds an undecided source occurrence.
    const StateId pending = t.add_state();
    const StateId end_sink = t.add_state();
    t.set_final(end_sink);
    const bool pending_left_ok =
        lkind == detail::ContextKind::None ||
        (lkind == detail::ContextKind::Symbol && src == lsym);

    for (StateId state : core) {
        for (SymbolId x = 1; x < t.symbols().size(); ++x) {
            if (x == src && left_ok(state)) {
                t.add_arc(state, x, kEpsilon, pending);
            } else {
                t.add_arc(state, x, x, class_of(x));
            }
        }
    }

    // Resolution arcs out of the pending state.
    std::vector<StateId> emit_state(t.symbols().size(), 0);
    for (SymbolId x = 1; x < t.symbols().size(); ++x) {
        const SymbolId resolved =
            (rkind == detail::ContextKind::Symbol && x == rsym) ? tgt : src;
        if (x == src && pending_left_ok) {
            t.add_arc(pending, x, resolved, pending);
            continue;
        }
        if (emit_state[x] == 0) {
            emit_state[x] = t.add_state();
            t.add_arc(emit_state[x], kEpsilon, x, class_of(x));
        }
        t.add_arc(pending, x, resolved, emit_state[x]);
    }
    // String end: a boundary right context fires, a symbol context fails.
    const SymbolId end_resolved = rkind == detail::ContextKind::Boundary ? tgt : src;
    t.add_arc(pending, kEpsilon, end_resolved, end_sink);
    return t;
}

// Composes the rule transducers in list order; the empty cascade is the
// identity over the alphabet.
inline Transducer compile_rule_cascade(const std::vector<RewriteRule>& cascade,
                                       const SymbolTable& alphabet) {
    Transducer result = identity_transducer(alphabet);
    for (const RewriteRule& rule : cascade) result = compose(result, compile_rule(rule, alphabet));
    return result;
}

}  // namespace rules
}  // namespace fstmorph
