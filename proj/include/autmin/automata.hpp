#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace autmin {

using State = std::int32_t;
using Letter = std::int32_t;

/// Thrown by subset constructions when more states would be created than the
/// caller's budget allows.
class budget_exceeded_error : public std::runtime_error {
public:
    budget_exceeded_error(const std::string& what, std::size_t states_created)
        : std::runtime_error(what), states_created_(states_created) {}

    std::size_t states_created() const { return states_created_; }

private:
    std::size_t states_created_;
};

/// Complete deterministic transition table on n states over k letters.
/// States are 0-based internally (the text format is 1-based); the initial
/// state is always state 0.
struct TransitionStructure {
    State n = 1;
    Letter k = 1;
    std::vector<State> delta;  // delta[s * k + a]

    TransitionStructure() : delta(1, 0) {}
    TransitionStructure(State n_, Letter k_)
        : n(n_), k(k_), delta(static_cast<std::size_t>(n_) * k_, 0) {}

    State next(State s, Letter a) const { return delta[static_cast<std::size_t>(s) * k + a]; }
    State& next(State s, Letter a) { return delta[static_cast<std::size_t>(s) * k + a]; }

    /// Applies the extended transition function from state s.
    State walk(State s, std::span<const Letter> word) const {
        for (Letter a : word) {
            if (a < 0 || a >= k) throw std::invalid_argument("letter out of range");
            s = next(s, a);
        }
        return s;
    }

    bool operator==(const TransitionStructure&) const = default;
};

/// Transition table where some entries may be undefined (-1).
struct PartialTransitionStructure {
    static constexpr State undefined = -1;

    State n = 1;
    Letter k = 1;
    std::vector<State> delta;

    PartialTransitionStructure() : delta(1, undefined) {}
    PartialTransitionStructure(State n_, Letter k_)
        : n(n_), k(k_), delta(static_cast<std::size_t>(n_) * k_, undefined) {}

    State next(State s, Letter a) const { return delta[static_cast<std::size_t>(s) * k + a]; }
    State& next(State s, Letter a) { return delta[static_cast<std::size_t>(s) * k + a]; }

    bool is_total() const {
        return std::none_of(delta.begin(), delta.end(),
                            [](State t) { return t == undefined; });
    }
};

/// Deterministic automaton: a transition structure plus a final-state set.
struct Dfa {
    TransitionStructure ts;
    std::vector<bool> finals;  // finals[s]

    Dfa() : finals(1, false) {}
    Dfa(TransitionStructure ts_, std::vector<bool> finals_)
        : ts(std::move(ts_)), finals(std::move(finals_)) {}

    State n() const { return ts.n; }
    Letter k() const { return ts.k; }

    State final_count() const {
        return static_cast<State>(std::count(finals.begin(), finals.end(), true));
    }

    bool operator==(const Dfa&) const = default;
};

/// Nondeterministic automaton with a set of initial states. Only what the
/// double-reversal construction needs: no epsilon transitions.
struct Nfa {
    State n = 0;
    Letter k = 1;
    std::vector<std::vector<State>> targets;  // targets[s * k + a] = successor list
    std::vector<bool> initials;
    std::vector<bool> finals;

    Nfa(State n_, Letter k_)
        : n(n_), k(k_), targets(static_cast<std::size_t>(n_) * k_),
          initials(n_, false), finals(n_, false) {}

    std::vector<State>& targets_of(State s, Letter a) {
        return targets[static_cast<std::size_t>(s) * k + a];
    }
    const std::vector<State>& targets_of(State s, Letter a) const {
        return targets[static_cast<std::size_t>(s) * k + a];
    }
};

/// Assignment of each state to a class index in 0..num_classes-1.
struct Partition {
    std::vector<State> class_of;
    State num_classes = 0;

    bool operator==(const Partition&) const = default;

    /// True if every class of this partition is contained in a class of other.
    bool refines(const Partition& other) const {
        if (class_of.size() != other.class_of.size()) return false;
        std::vector<State> image(num_classes, -1);
        for (std::size_t s = 0; s < class_of.size(); ++s) {
            State c = class_of[s];
            if (image[c] == -1) image[c] = other.class_of[s];
            else if (image[c] != other.class_of[s]) return false;
        }
        return true;
    }

    /// True if both partitions induce the same grouping, ignoring class numbering.
    bool same_blocks_as(const Partition& other) const {
        return num_classes == other.num_classes && refines(other);
    }
};

inline void check_valid(const TransitionStructure& ts) {
    if (ts.n < 1 || ts.k < 1) throw std::invalid_argument("transition structure needs n >= 1, k >= 1");
    if (ts.delta.size() != static_cast<std::size_t>(ts.n) * ts.k)
        throw std::invalid_argument("transition table has wrong size");
    for (State t : ts.delta)
        if (t < 0 || t >= ts.n) throw std::invalid_argument("transition target out of range");
}

inline void check_valid(const Dfa& dfa) {
    check_valid(dfa.ts);
    if (dfa.finals.size() != static_cast<std::size_t>(dfa.ts.n))
        throw std::invalid_argument("final-state vector has wrong size");
}

inline void check_valid(const Partition& part, State n) {
    if (part.class_of.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("partition has wrong size");
    if (part.num_classes < 1 || part.num_classes > n)
        throw std::invalid_argument("partition class count out of range");
    std::vector<bool> seen(part.num_classes, false);
    for (State c : part.class_of) {
        if (c < 0 || c >= part.num_classes) throw std::invalid_argument("class index out of range");
        seen[c] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw std::invalid_argument("partition classes are not contiguous");
}

namespace detail {

/// First-visit order of the row scan: process discovered states in label
/// order, reading their targets with letters in index order. Returns the
/// discovered states in visit order (always starts with state 0).
inline std::vector<State> scan_order(const TransitionStructure& ts) {
    std::vector<State> order;
    order.reserve(ts.n);
    std::vector<State> label(ts.n, -1);
    label[0] = 0;
    order.push_back(0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        State s = order[i];
        for (Letter a = 0; a < ts.k; ++a) {
            State t = ts.next(s, a);
            if (label[t] == -1) {
                label[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    }
    return order;
}

}  // namespace detail

inline std::vector<State> accessible_states(const TransitionStructure& ts) {
    check_valid(ts);
    std::vector<State> states = detail::scan_order(ts);
    std::sort(states.begin(), states.end());
    return states;
}

inline bool is_accessible(const TransitionStructure& ts) {
    check_valid(ts);
    return detail::scan_order(ts).size() == static_cast<std::size_t>(ts.n);
}

/// Relabels an accessible structure by first-visit order of the row scan.
/// The result is the unique representative of the isomorphism class: state
/// j+1 first occurs among the targets of states 1..j, and first occurrences
/// appear in increasing label order.
inline TransitionStructure canonicalize(const TransitionStructure& ts) {
    check_valid(ts);
    std::vector<State> order = detail::scan_order(ts);
    if (order.size() != static_cast<std::size_t>(ts.n))
        throw std::invalid_argument("canonicalize requires an accessible structure");
    std::vector<State> label(ts.n);
    for (State i = 0; i < ts.n; ++i) label[order[i]] = i;
    TransitionStructure out(ts.n, ts.k);
    for (State i = 0; i < ts.n; ++i)
        for (Letter a = 0; a < ts.k; ++a)
            out.next(i, a) = label[ts.next(order[i], a)];
    return out;
}

inline Dfa canonicalize(const Dfa& dfa) {
    check_valid(dfa);
    std::vector<State> order = detail::scan_order(dfa.ts);
    if (order.size() != static_cast<std::size_t>(dfa.ts.n))
        throw std::invalid_argument("canonicalize requires an accessible automaton");
    std::vector<State> label(dfa.ts.n);
    for (State i = 0; i < dfa.ts.n; ++i) label[order[i]] = i;
    Dfa out(TransitionStructure(dfa.ts.n, dfa.ts.k), std::vector<bool>(dfa.ts.n, false));
    for (State i = 0; i < dfa.ts.n; ++i) {
        for (Letter a = 0; a < dfa.ts.k; ++a)
            out.ts.next(i, a) = label[dfa.ts.next(order[i], a)];
        out.finals[i] = dfa.finals[order[i]];
    }
    return out;
}

inline bool is_canonical(const TransitionStructure& ts) {
    if (!is_accessible(ts)) return false;
    return canonicalize(ts) == ts;
}

/// Completes a partial table by routing every undefined entry to a fresh
/// absorbing sink state. Total input is returned unchanged.
inline TransitionStructure complete_with_sink(const PartialTransitionStructure& pts) {
    if (pts.n < 1 || pts.k < 1) throw std::invalid_argument("partial structure needs n >= 1, k >= 1");
    if (pts.delta.size() != static_cast<std::size_t>(pts.n) * pts.k)
        throw std::invalid_argument("transition table has wrong size");
    for (State t : pts.delta)
        if (t != PartialTransitionStructure::undefined && (t < 0 || t >= pts.n))
            throw std::invalid_argument("transition target out of range");

    if (pts.is_total()) {
        TransitionStructure out(pts.n, pts.k);
        out.delta = pts.delta;
        return out;
    }
    TransitionStructure out(pts.n + 1, pts.k);
    State sink = pts.n;
    for (State s = 0; s < pts.n; ++s)
        for (Letter a = 0; a < pts.k; ++a) {
            State t = pts.next(s, a);
            out.next(s, a) = (t == PartialTransitionStructure::undefined) ? sink : t;
        }
    for (Letter a = 0; a < pts.k; ++a) out.next(sink, a) = sink;
    return out;
}

/// Quotient automaton by a right-invariant partition that does not mix final
/// and non-final states. Both conditions are checked. The result is relabeled
/// canonically.
inline Dfa quotient(const Dfa& dfa, const Partition& part) {
    check_valid(dfa);
    check_valid(part, dfa.n());
    const State c = part.num_classes;
    std::vector<State> rep(c, -1);
    for (State s = 0; s < dfa.n(); ++s)
        if (rep[part.class_of[s]] == -1) rep[part.class_of[s]] = s;
    for (State s = 0; s < dfa.n(); ++s) {
        State r = rep[part.class_of[s]];
        if (dfa.finals[s] != dfa.finals[r])
            throw std::invalid_argument("partition mixes final and non-final states");
        for (Letter a = 0; a < dfa.k(); ++a)
            if (part.class_of[dfa.ts.next(s, a)] != part.class_of[dfa.ts.next(r, a)])
                throw std::invalid_argument("partition is not right invariant");
    }
    Dfa out(TransitionStructure(c, dfa.k()), std::vector<bool>(c, false));
    for (State cls = 0; cls < c; ++cls) {
        for (Letter a = 0; a < dfa.k(); ++a)
            out.ts.next(cls, a) = part.class_of[dfa.ts.next(rep[cls], a)];
        out.finals[cls] = dfa.finals[rep[cls]];
    }
    // Move the class of the initial state to label 0, then canonicalize.
    State init = part.class_of[0];
    if (init != 0) {
        for (State& t : out.ts.delta) t = (t == init) ? 0 : (t == 0 ? init : t);
        for (Letter a = 0; a < dfa.k(); ++a) std::swap(out.ts.next(0, a), out.ts.next(init, a));
        std::swap(out.finals[0], out.finals[init]);
    }
    return canonicalize(out);
}

inline Nfa as_nfa(const Dfa& dfa) {
    check_valid(dfa);
    Nfa nfa(dfa.n(), dfa.k());
    for (State s = 0; s < dfa.n(); ++s)
        for (Letter a = 0; a < dfa.k(); ++a)
            nfa.targets_of(s, a).push_back(dfa.ts.next(s, a));
    nfa.initials[0] = true;
    nfa.finals = dfa.finals;
    return nfa;
}

/// Flips every edge and swaps the roles of initial and final states.
inline Nfa reverse(const Dfa& dfa) {
    check_valid(dfa);
    Nfa nfa(dfa.n(), dfa.k());
    for (State s = 0; s < dfa.n(); ++s)
        for (Letter a = 0; a < dfa.k(); ++a)
            nfa.targets_of(dfa.ts.next(s, a), a).push_back(s);
    nfa.initials = dfa.finals;
    nfa.finals[0] = true;
    return nfa;
}

inline constexpr std::size_t default_determinize_cap = std::size_t(1) << 20;

namespace detail {

struct WordVecHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (std::uint64_t w : v) {
            h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
            h *= 0xBF58476D1CE4E5B9ull;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Accessible subset construction from the set of initial states. A subset is
/// final iff it intersects the NFA's final set. The output is complete,
/// deterministic and canonically labeled (subsets are discovered in row-scan
/// order). Throws budget_exceeded_error when more than cap subset states
/// would be created.
inline Dfa determinize(const Nfa& nfa, std::size_t cap = default_determinize_cap) {
    if (nfa.n < 0 || nfa.k < 1) throw std::invalid_argument("malformed nfa");
    if (cap < 1) throw std::invalid_argument("determinize needs cap >= 1");
    const std::size_t words = (static_cast<std::size_t>(nfa.n) + 63) / 64;

    auto bit = [&](std::vector<std::uint64_t>& set, State s) {
        set[static_cast<std::size_t>(s) >> 6] |= std::uint64_t(1) << (s & 63);
    };

    std::vector<std::uint64_t> start(words, 0);
    for (State s = 0; s < nfa.n; ++s)
        if (nfa.initials[s]) bit(start, s);

    std::unordered_map<std::vector<std::uint64_t>, State, detail::WordVecHash> ids;
    std::vector<std::vector<std::uint64_t>> subsets;
    std::vector<State> delta;
    ids.emplace(start, 0);
    subsets.push_back(start);

    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (Letter a = 0; a < nfa.k; ++a) {
            std::vector<std::uint64_t> succ(words, 0);
            const std::vector<std::uint64_t>& cur = subsets[i];
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t m = cur[w];
                while (m) {
                    State s = static_cast<State>(w * 64 + std::countr_zero(m));
                    m &= m - 1;
                    for (State t : nfa.targets_of(s, a)) bit(succ, t);
                }
            }
            auto [it, inserted] = ids.emplace(succ, static_cast<State>(subsets.size()));
            if (inserted) {
                if (subsets.size() + 1 > cap)
                    throw budget_exceeded_error(
                        "determinization exceeded the budget of " + std::to_string(cap) +
                            " subset states",
                        subsets.size() + 1);
                subsets.push_back(std::move(succ));
            }
            delta.push_back(it->second);
        }
    }

    Dfa out(TransitionStructure(static_cast<State>(subsets.size()), nfa.k),
            std::vector<bool>(subsets.size(), false));
    out.ts.delta = std::move(delta);
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        bool fin = false;
        for (std::size_t w = 0; w < words && !fin; ++w) {
            std::uint64_t m = subsets[i][w];
            while (m) {
                State s = static_cast<State>(w * 64 + std::countr_zero(m));
                m &= m - 1;
                if (nfa.finals[s]) { fin = true; break; }
            }
        }
        out.finals[i] = fin;
    }
    return out;
}

inline bool accepts(const Dfa& dfa, std::span<const Letter> word) {
    check_valid(dfa);
    return dfa.finals[dfa.ts.walk(0, word)];
}

inline bool accepts(const Dfa& dfa, const std::vector<Letter>& word) {
    return accepts(dfa, std::span<const Letter>(word));
}

/// Isomorphism of accessible automata, decided by canonical-form equality.
/// Valid because an accessible deterministic structure admits exactly one
/// labeling in first-visit order.
inline bool is_isomorphic(const Dfa& x, const Dfa& y) {
    if (x.n() != y.n() || x.k() != y.k()) return false;
    return canonicalize(x) == canonicalize(y);
}

}  // namespace autmin
