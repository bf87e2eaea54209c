// Finite-state transducer: representation, combinators, and the apply-up /
// apply-down traversals.
//
// A transducer relates upper-side (lexical) token sequences to lower-side
// (surface) token sequences. States hold arcs labeled with (upper, lower)
// symbol-id pairs; id 0 is epsilon on either tape. Compiled transducers are
// immutable values: every combinator returns a new transducer, and the apply
// traversals take read-only access, so concurrent readers are safe.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "symbol_table.hpp"
#include "unicode.hpp"

namespace fstmorph {

using StateId = std::uint32_t;

struct Arc {
    SymbolId upper;
    SymbolId lower;
    StateId target;

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

class Transducer {
public:
    explicit Transducer(SymbolTable symbols = SymbolTable())
        : symbols_(std::move(symbols)), arcs_(1), finals_(1, false) {}

    StateId add_state() {
        arcs_.emplace_back();
        finals_.push_back(false);
        return static_cast<StateId>(arcs_.size() - 1);
    }

    void add_arc(StateId from, SymbolId upper, SymbolId lower, StateId target) {
        arcs_[from].push_back(Arc{upper, lower, target});
    }

    void set_start(StateId s) { start_ = s; }
    StateId start() const { return start_; }

    void set_final(StateId s, bool value = true) { finals_[s] = value; }
    bool is_final(StateId s) const { return finals_[s]; }

    std::size_t num_states() const { return arcs_.size(); }
    std::size_t num_arcs() const {
        std::size_t n = 0;
        for (const auto& a : arcs_) n += a.size();
        return n;
    }

    const std::vector<Arc>& arcs(StateId s) const { return arcs_[s]; }
    std::vector<Arc>& arcs_mutable(StateId s) { return arcs_[s]; }

    std::vector<StateId> final_states() const {
        std::vector<StateId> out;
        for (StateId s = 0; s < finals_.size(); ++s)
            if (finals_[s]) out.push_back(s);
        return out;
    }
    bool has_final() const {
        return std::find(finals_.begin(), finals_.end(), true) != finals_.end();
    }

    const SymbolTable& symbols() const { return symbols_; }
    SymbolTable& symbols_mutable() { return symbols_; }

private:
    SymbolTable symbols_;
    std::vector<std::vector<Arc>> arcs_;
    std::vector<bool> finals_;
    StateId start_ = 0;
};

// Extends `dst` with every symbol of `src`; returns the id remapping.
inline std::vector<SymbolId> merge_symbols(SymbolTable& dst, const SymbolTable& src) {
    std::vector<SymbolId> map(src.size());
    for (SymbolId id = 0; id < src.size(); ++id) map[id] = dst.intern(src.text_of(id));
    return map;
}

// ---------------------------------------------------------------------------
// Atomic builders

// Accepts exactly the empty relation.
inline Transducer empty_transducer(SymbolTable symbols = SymbolTable()) {
    return Transducer(std::move(symbols));
}

// Accepts exactly the pair of empty strings.
inline Transducer epsilon_transducer(SymbolTable symbols = SymbolTable()) {
    Transducer t(std::move(symbols));
    t.set_final(t.start());
    return t;
}

// Maps every string over the alphabet to itself.
inline Transducer identity_transducer(SymbolTable symbols) {
    Transducer t(std::move(symbols));
    t.set_final(t.start());
    for (SymbolId id = 1; id < t.symbols().size(); ++id)
        t.add_arc(t.start(), id, id, t.start());
    return t;
}

// Linear transducer accepting exactly (upper, lower); the shorter side is
// padded with epsilons.
inline Transducer from_pair(SymbolTable symbols, std::span<const SymbolId> upper,
                            std::span<const SymbolId> lower) {
    Transducer t(std::move(symbols));
    StateId state = t.start();
    const std::size_t len = std::max(upper.size(), lower.size());
    for (std::size_t i = 0; i < len; ++i) {
        const StateId next = t.add_state();
        t.add_arc(state, i < upper.size() ? upper[i] : kEpsilon,
                  i < lower.size() ? lower[i] : kEpsilon, next);
        state = next;
    }
    t.set_final(state);
    return t;
}

// Tokenizes both sides against `symbols` and builds the pair transducer.
inline Transducer from_pair_text(SymbolTable symbols, std::string_view upper,
                                 std::string_view lower) {
    const auto u = symbols.tokenize(upper);
    const auto l = symbols.tokenize(lower);
    return from_pair(std::move(symbols), u, l);
}

// ---------------------------------------------------------------------------
// Combinators

inline Transducer concat(const Transducer& a, const Transducer& b) {
    Transducer r = a;
    const auto map_b = merge_symbols(r.symbols_mutable(), b.symbols());
    const StateId offset = static_cast<StateId>(r.num_states());
    for (StateId s = 0; s < b.num_states(); ++s) r.add_state();
    for (StateId s = 0; s < b.num_states(); ++s)
        for (const Arc& arc : b.arcs(s))
            r.add_arc(offset + s, map_b[arc.upper], map_b[arc.lower], offset + arc.target);
    for (StateId f : a.final_states()) {
        r.set_final(f, false);
        r.add_arc(f, kEpsilon, kEpsilon, offset + b.start());
    }
    for (StateId f : b.final_states()) r.set_final(offset + f);
    return r;
}

inline Transducer union_of(const Transducer& a, const Transducer& b) {
    SymbolTable merged = a.symbols();
    const auto map_b = merge_symbols(merged, b.symbols());
    Transducer r(std::move(merged));
    const StateId off_a = 1;
    for (StateId s = 0; s < a.num_states(); ++s) r.add_state();
    const StateId off_b = static_cast<StateId>(r.num_states());
    for (StateId s = 0; s < b.num_states(); ++s) r.add_state();
    for (StateId s = 0; s < a.num_states(); ++s)
        for (const Arc& arc : a.arcs(s))
            r.add_arc(off_a + s, arc.upper, arc.lower, off_a + arc.target);
    for (StateId s = 0; s < b.num_states(); ++s)
        for (const Arc& arc : b.arcs(s))
            r.add_arc(off_b + s, map_b[arc.upper], map_b[arc.lower], off_b + arc.target);
    r.add_arc(r.start(), kEpsilon, kEpsilon, off_a + a.start());
    r.add_arc(r.start(), kEpsilon, kEpsilon, off_b + b.start());
    for (StateId f : a.final_states()) r.set_final(off_a + f);
    for (StateId f : b.final_states()) r.set_final(off_b + f);
    return r;
}

// Removes states that are not on some start-to-final path; keeps the start
// state so the empty transducer stays canonical (one state, no finals).
inline Transducer trim(const Transducer& t) {
    const std::size_t n = t.num_states();
    std::vector<bool> reach(n, false);
    std::vector<StateId> stack{t.start()};
    reach[t.start()] = true;
    while (!stack.empty()) {
        const StateId s = stack.back();
        stack.pop_back();
        for (const Arc& arc : t.arcs(s))
            if (!reach[arc.target]) {
                reach[arc.target] = true;
                stack.push_back(arc.target);
            }
    }
    std::vector<std::vector<StateId>> rev(n);
    for (StateId s = 0; s < n; ++s)
        for (const Arc& arc : t.arcs(s)) rev[arc.target].push_back(s);
    std::vector<bool> corea(n, false);
    for (StateId f : t.final_states()) {
        if (!corea[f]) {
            corea[f] = true;
            stack.push_back(f);
        }
    }
    while (!stack.empty()) {
        const StateId s = stack.back();
        stack.pop_back();
        for (StateId p : rev[s])
            if (!corea[p]) {
                corea[p] = true;
                stack.push_back(p);
            }
    }
    std::vector<StateId> remap(n, static_cast<StateId>(-1));
    Transducer r(t.symbols());
    remap[t.start()] = r.start();
    for (StateId s = 0; s < n; ++s) {
        if (s == t.start() || !(reach[s] && corea[s])) continue;
        remap[s] = r.add_state();
    }
    for (StateId s = 0; s < n; ++s) {
        if (remap[s] == static_cast<StateId>(-1)) continue;
        for (const Arc& arc : t.arcs(s))
            if (reach[arc.target] && corea[arc.target] && remap[arc.target] != static_cast<StateId>(-1))
                r.add_arc(remap[s], arc.upper, arc.lower, remap[arc.target]);
        if (t.is_final(s) && reach[s] && corea[s]) r.set_final(remap[s]);
    }
    return r;
}

// Composition with an epsilon filter. States are (state-of-a, state-of-b,
// filter) triples; between two matches all a-alone moves (epsilon on a's
// lower tape) must precede all b-alone moves (epsilon on b's upper tape), so
// each joint path is represented exactly once.
inline Transducer compose(const Transducer& a, const Transducer& b) {
    SymbolTable merged = a.symbols();
    const auto map_b = merge_symbols(merged, b.symbols());

    std::vector<std::vector<Arc>> b_arcs(b.num_states());
    for (StateId s = 0; s < b.num_states(); ++s) {
        b_arcs[s].reserve(b.arcs(s).size());
        for (const Arc& arc : b.arcs(s))
            b_arcs[s].push_back(Arc{map_b[arc.upper], map_b[arc.lower], arc.target});
    }

    Transducer r(std::move(merged));
    const auto key_of = [&](StateId sa, StateId sb, int f) -> std::uint64_t {
        return (static_cast<std::uint64_t>(sa) * b.num_states() + sb) * 3 +
               static_cast<std::uint64_t>(f);
    };
    std::unordered_map<std::uint64_t, StateId> ids;
    std::queue<std::tuple<StateId, StateId, int>> work;
    const auto state_of = [&](StateId sa, StateId sb, int f) -> StateId {
        const std::uint64_t key = key_of(sa, sb, f);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        const StateId id = ids.empty() ? r.start() : r.add_state();
        ids.emplace(key, id);
        work.emplace(sa, sb, f);
        return id;
    };
    state_of(a.start(), b.start(), 0);
    while (!work.empty()) {
        const auto [sa, sb, f] = work.front();
        work.pop();
        const StateId id = ids.at(key_of(sa, sb, f));
        for (const Arc& arc_a : a.arcs(sa)) {
            if (arc_a.lower == kEpsilon) {
                if (f != 2)  // a-alone moves are barred once b has moved alone
                    r.add_arc(id, arc_a.upper, kEpsilon, state_of(arc_a.target, sb, 1));
                continue;
            }
            for (const Arc& arc_b : b_arcs[sb])
                if (arc_b.upper == arc_a.lower)
                    r.add_arc(id, arc_a.upper, arc_b.lower,
                              state_of(arc_a.target, arc_b.target, 0));
        }
        for (const Arc& arc_b : b_arcs[sb])
            if (arc_b.upper == kEpsilon)
                r.add_arc(id, kEpsilon, arc_b.lower, state_of(sa, arc_b.target, 2));
        if (a.is_final(sa) && b.is_final(sb)) r.set_final(id);
    }
    return trim(r);
}

// ---------------------------------------------------------------------------
// Traversal

namespace detail {

class ApplyTraversal {
public:
    ApplyTraversal(const Transducer& t, std::span<const SymbolId> input, bool up)
        : t_(t), input_(input), up_(up) {}

    std::vector<std::vector<SymbolId>> run() {
        visit(t_.start(), 0);
        std::sort(results_.begin(), results_.end());
        results_.erase(std::unique(results_.begin(), results_.end()), results_.end());
        return std::move(results_);
    }

private:
    void visit(StateId state, std::size_t pos) {
        const std::uint64_t key =
            static_cast<std::uint64_t>(state) * (input_.size() + 1) + pos;
        if (auto it = on_path_.find(key); it != on_path_.end()) {
            // Back at the same (state, position): an epsilon cycle. With new
            // output it would pump forever; silent, it adds nothing.
            if (output_.size() > it->second) throw CycleBudgetExceededError();
            return;
        }
        on_path_.emplace(key, output_.size());
        if (pos == input_.size() && t_.is_final(state)) results_.push_back(output_);
        for (const Arc& arc : t_.arcs(state)) {
            const SymbolId input_sym = up_ ? arc.lower : arc.upper;
            const SymbolId output_sym = up_ ? arc.upper : arc.lower;
            if (input_sym == kEpsilon) {
                step(arc.target, pos, output_sym);
            } else if (pos < input_.size() && input_sym == input_[pos]) {
                step(arc.target, pos + 1, output_sym);
            }
        }
        on_path_.erase(key);
    }

    void step(StateId target, std::size_t next_pos, SymbolId output_sym) {
        const std::size_t mark = output_.size();
        if (output_sym != kEpsilon) output_.push_back(output_sym);
        visit(target, next_pos);
        output_.resize(mark);
    }

    const Transducer& t_;
    std::span<const SymbolId> input_;
    bool up_;
    std::vector<SymbolId> output_;
    std::vector<std::vector<SymbolId>> results_;
    std::unordered_map<std::uint64_t, std::size_t> on_path_;
};

}  // namespace detail

// All upper-side token sequences paired with the given lower-side tokens,
// sorted lexicographically by symbol id.
inline std::vector<std::vector<SymbolId>> apply_up(const Transducer& t,
                                                   std::span<const SymbolId> surface) {
    return detail::ApplyTraversal(t, surface, true).run();
}

// Tokenizes the surface string (NFC-normalized) against the transducer's
// symbol table first.
inline std::vector<std::vector<SymbolId>> apply_up(const Transducer& t,
                                                   std::string_view surface) {
    const auto toks = t.symbols().tokenize(nfc_normalize(surface));
    return apply_up(t, toks);
}

inline std::vector<std::vector<SymbolId>> apply_down(const Transducer& t,
                                                     std::span<const SymbolId> lexical) {
    return detail::ApplyTraversal(t, lexical, false).run();
}

inline std::vector<std::vector<SymbolId>> apply_down(const Transducer& t,
                                                     std::string_view lexical) {
    const auto toks = t.symbols().tokenize(nfc_normalize(lexical));
    return apply_down(t, toks);
}

inline std::vector<std::string> join_all(const Transducer& t,
                                         const std::vector<std::vector<SymbolId>>& seqs) {
    std::vector<std::string> out;
    out.reserve(seqs.size());
    for (const auto& seq : seqs) out.push_back(t.symbols().join(seq));
    return out;
}

inline std::vector<std::string> apply_up_text(const Transducer& t, std::string_view surface) {
    return join_all(t, apply_up(t, surface));
}

inline std::vector<std::string> apply_down_text(const Transducer& t, std::string_view lexical) {
    return join_all(t, apply_down(t, lexical));
}

// ---------------------------------------------------------------------------
// Structure checks and minimization

inline bool is_cyclic(const Transducer& t) {
    enum class Color : std::uint8_t { White, Grey, Black };
    std::vector<Color> color(t.num_states(), Color::White);
    // Iterative DFS; (state, next-arc-index) frames.
    std::vector<std::pair<StateId, std::size_t>> stack;
    for (StateId root = 0; root < t.num_states(); ++root) {
        if (color[root] != Color::White) continue;
        stack.emplace_back(root, 0);
        color[root] = Color::Grey;
        while (!stack.empty()) {
            auto& [s, i] = stack.back();
            if (i < t.arcs(s).size()) {
                const StateId next = t.arcs(s)[i++].target;
                if (color[next] == Color::Grey) return true;
                if (color[next] == Color::White) {
                    color[next] = Color::Grey;
                    stack.emplace_back(next, 0);
                }
            } else {
                color[s] = Color::Black;
                stack.pop_back();
            }
        }
    }
    return false;
}

namespace detail {

// Merges states whose outgoing pictures (finality + arc set) are identical.
inline bool merge_by_out_signature(Transducer& t) {
    using Sig = std::pair<bool, std::vector<Arc>>;
    std::map<Sig, StateId> first;
    std::vector<StateId> rep(t.num_states());
    bool changed = false;
    for (StateId s = 0; s < t.num_states(); ++s) {
        Sig sig{t.is_final(s), t.arcs(s)};
        std::sort(sig.second.begin(), sig.second.end());
        sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
        auto [it, inserted] = first.emplace(std::move(sig), s);
        rep[s] = it->second;
        if (!inserted) changed = true;
    }
    if (!changed) return false;
    Transducer r(t.symbols());
    std::vector<StateId> remap(t.num_states(), static_cast<StateId>(-1));
    remap[rep[t.start()]] = r.start();
    for (StateId s = 0; s < t.num_states(); ++s)
        if (rep[s] == s && remap[s] == static_cast<StateId>(-1)) remap[s] = r.add_state();
    for (StateId s = 0; s < t.num_states(); ++s) {
        if (rep[s] != s) continue;
        auto& arcs = r.arcs_mutable(remap[s]);
        for (const Arc& arc : t.arcs(s))
            arcs.push_back(Arc{arc.upper, arc.lower, remap[rep[arc.target]]});
        std::sort(arcs.begin(), arcs.end());
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
        if (t.is_final(s)) r.set_final(remap[s]);
    }
    t = std::move(r);
    return true;
}

// Merges states whose incoming pictures (sources + labels, start flag) are
// identical; such states have equal left languages, so the union of their
// continuations preserves the relation.
inline bool merge_by_in_signature(Transducer& t) {
    using In = std::tuple<StateId, SymbolId, SymbolId>;
    std::vector<std::vector<In>> incoming(t.num_states());
    for (StateId s = 0; s < t.num_states(); ++s)
        for (const Arc& arc : t.arcs(s))
            incoming[arc.target].emplace_back(s, arc.upper, arc.lower);
    using Sig = std::pair<bool, std::vector<In>>;
    std::map<Sig, StateId> first;
    std::vector<StateId> rep(t.num_states());
    bool changed = false;
    for (StateId s = 0; s < t.num_states(); ++s) {
        Sig sig{s == t.start(), std::move(incoming[s])};
        std::sort(sig.second.begin(), sig.second.end());
        sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
        auto [it, inserted] = first.emplace(std::move(sig), s);
        rep[s] = it->second;
        if (!inserted) changed = true;
    }
    if (!changed) return false;
    Transducer r(t.symbols());
    std::vector<StateId> remap(t.num_states(), static_cast<StateId>(-1));
    remap[rep[t.start()]] = r.start();
    for (StateId s = 0; s < t.num_states(); ++s)
        if (rep[s] == s && remap[s] == static_cast<StateId>(-1)) remap[s] = r.add_state();
    for (StateId s = 0; s < t.num_states(); ++s) {
        const StateId target_state = remap[rep[s]];
        auto& arcs = r.arcs_mutable(target_state);
        for (const Arc& arc : t.arcs(s))
            arcs.push_back(Arc{arc.upper, arc.lower, remap[rep[arc.target]]});
        if (t.is_final(s)) r.set_final(target_state);
    }
    for (StateId s = 0; s < r.num_states(); ++s) {
        auto& arcs = r.arcs_mutable(s);
        std::sort(arcs.begin(), arcs.end());
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    }
    t = std::move(r);
    return true;
}

// Replaces pure epsilon:epsilon glue arcs by their closure.
inline Transducer remove_epsilon_epsilon(const Transducer& t) {
    const std::size_t n = t.num_states();
    Transducer r(t.symbols());
    for (StateId s = 1; s < n; ++s) r.add_state();
    r.set_start(t.start());
    for (StateId s = 0; s < n; ++s) {
        std::vector<bool> seen(n, false);
        std::vector<StateId> stack{s};
        seen[s] = true;
        bool final = false;
        auto& arcs = r.arcs_mutable(s);
        while (!stack.empty()) {
            const StateId q = stack.back();
            stack.pop_back();
            if (t.is_final(q)) final = true;
            for (const Arc& arc : t.arcs(q)) {
                if (arc.upper == kEpsilon && arc.lower == kEpsilon) {
                    if (!seen[arc.target]) {
                        seen[arc.target] = true;
                        stack.push_back(arc.target);
                    }
                } else {
                    arcs.push_back(arc);
                }
            }
        }
        std::sort(arcs.begin(), arcs.end());
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
        r.set_final(s, final);
    }
    return trim(r);
}

// Canonical renumbering: breadth-first over arcs sorted by label, so equal
// constructions serialize identically.
inline Transducer canonical_renumber(const Transducer& t) {
    std::vector<StateId> order;
    std::vector<StateId> remap(t.num_states(), static_cast<StateId>(-1));
    std::queue<StateId> queue;
    remap[t.start()] = 0;
    order.push_back(t.start());
    queue.push(t.start());
    while (!queue.empty()) {
        const StateId s = queue.front();
        queue.pop();
        auto sorted = t.arcs(s);
        std::sort(sorted.begin(), sorted.end());
        for (const Arc& arc : sorted) {
            if (remap[arc.target] != static_cast<StateId>(-1)) continue;
            remap[arc.target] = static_cast<StateId>(order.size());
            order.push_back(arc.target);
            queue.push(arc.target);
        }
    }
    Transducer r(t.symbols());
    for (std::size_t i = 1; i < order.size(); ++i) r.add_state();
    for (StateId old : order) {
        auto& arcs = r.arcs_mutable(remap[old]);
        for (const Arc& arc : t.arcs(old)) {
            if (remap[arc.target] == static_cast<StateId>(-1)) continue;
            arcs.push_back(Arc{arc.upper, arc.lower, remap[arc.target]});
        }
        std::sort(arcs.begin(), arcs.end());
        if (t.is_final(old)) r.set_final(remap[old]);
    }
    return r;
}

}  // namespace detail

// Relation-preserving size reduction for acyclic transducers: removes epsilon
// glue, trims dead states, then merges left- and right-equivalent states to a
// fixpoint. Throws CyclicInputError on cyclic input.
inline Transducer minimize(const Transducer& t) {
    if (is_cyclic(t)) throw CyclicInputError();
    Transducer r = detail::remove_epsilon_epsilon(t);
    bool changed = true;
    while (changed) {
        changed = false;
        if (detail::merge_by_out_signature(r)) changed = true;
        if (detail::merge_by_in_signature(r)) changed = true;
    }
    return detail::canonical_renumber(r);
}

}  // namespace fstmorph
