#pragma once

// Finite automata over letters or atoms, the downward-closure collapse to a
// partially ordered automaton, the ideal automaton, and the
// directedness-preserving transforms (epsilon padding, determinization).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "downclose/errors.hh"
#include "downclose/ideals.hh"

namespace downclose {

using StateId = std::uint32_t;

/// Label index meaning "epsilon".
inline constexpr std::size_t epsilon = std::numeric_limits<std::size_t>::max();

inline std::string symbol_to_string(const Letter& x) { return x.token; }
inline std::string symbol_to_string(const Atom& x) { return to_string(x); }

template <class Sym>
struct Transition {
    StateId from;
    std::size_t label; ///< index into Nfa::alphabet, or `epsilon`
    StateId to;

    bool is_epsilon() const { return label == epsilon; }
    bool operator==(const Transition&) const = default;
    auto operator<=>(const Transition&) const = default;
};

/// Nondeterministic automaton with epsilon transitions. States are dense ids;
/// the alphabet is kept sorted and transitions keep insertion order (duplicates dropped).
template <class Sym>
class Nfa {
public:
    Nfa() = default;

    StateId add_state(std::string name) {
        names_.push_back(std::move(name));
        final_.push_back(false);
        return static_cast<StateId>(names_.size() - 1);
    }

    /// Adds `x` to the alphabet if needed and returns its index. Invalidates label indices
    /// of existing transitions only through set_alphabet(); here indices are remapped.
    std::size_t add_symbol(const Sym& x) {
        auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), x);
        std::size_t pos = static_cast<std::size_t>(it - alphabet_.begin());
        if (it != alphabet_.end() && *it == x) {
            return pos;
        }
        alphabet_.insert(it, x);
        std::set<std::tuple<StateId, std::size_t, StateId>> seen;
        for (auto& t : transitions_) {
            if (t.label != epsilon && t.label >= pos) {
                ++t.label;
            }
            seen.emplace(t.from, t.label, t.to);
        }
        seen_ = std::move(seen);
        return pos;
    }

    std::optional<std::size_t> symbol_index(const Sym& x) const {
        auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), x);
        if (it != alphabet_.end() && *it == x) {
            return static_cast<std::size_t>(it - alphabet_.begin());
        }
        return std::nullopt;
    }

    /// Returns false when the transition already existed.
    bool add_transition(StateId from, std::size_t label, StateId to) {
        check_state(from);
        check_state(to);
        if (label != epsilon && label >= alphabet_.size()) {
            throw PreconditionError("transition label index out of range");
        }
        if (!seen_.emplace(from, label, to).second) {
            return false;
        }
        transitions_.push_back({from, label, to});
        return true;
    }

    bool add_transition(StateId from, const Sym& x, StateId to) {
        return add_transition(from, add_symbol(x), to);
    }

    void set_initial(StateId q) {
        check_state(q);
        initial_ = q;
    }
    void set_final(StateId q, bool value = true) {
        check_state(q);
        final_[q] = value;
    }

    std::size_t num_states() const { return names_.size(); }
    const std::string& name(StateId q) const { return names_[q]; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<Sym>& alphabet() const { return alphabet_; }
    const Sym& symbol(std::size_t label) const { return alphabet_[label]; }
    const std::vector<Transition<Sym>>& transitions() const { return transitions_; }
    StateId initial() const { return initial_; }
    bool is_final(StateId q) const { return final_[q]; }
    std::vector<StateId> finals() const {
        std::vector<StateId> out;
        for (StateId q = 0; q < num_states(); ++q) {
            if (final_[q]) {
                out.push_back(q);
            }
        }
        return out;
    }

    /// Outgoing transition indices per state.
    std::vector<std::vector<std::size_t>> out_edges() const {
        std::vector<std::vector<std::size_t>> out(num_states());
        for (std::size_t i = 0; i < transitions_.size(); ++i) {
            out[transitions_[i].from].push_back(i);
        }
        return out;
    }

    std::string label_string(std::size_t label) const {
        return label == epsilon ? std::string("eps") : symbol_to_string(alphabet_[label]);
    }

private:
    void check_state(StateId q) const {
        if (q >= names_.size()) {
            throw PreconditionError("state id " + std::to_string(q) + " out of range");
        }
    }

    std::vector<std::string> names_;
    std::vector<Sym> alphabet_;
    std::vector<Transition<Sym>> transitions_;
    std::set<std::tuple<StateId, std::size_t, StateId>> seen_;
    StateId initial_ = 0;
    std::vector<bool> final_;
};

using LetterNfa = Nfa<Letter>;
using AtomNfa = Nfa<Atom>;

/// Nfa whose state ids are a topological order: every transition p -> q with p != q has p < q.
struct PartiallyOrderedNfa {
    LetterNfa nfa;
};

/// Acyclic automaton over atoms; `order` lists the states topologically.
struct IdealNfa {
    AtomNfa nfa;
    std::vector<StateId> order;
};

struct Validated {
    LetterNfa nfa;
    std::vector<std::string> warnings;
};

// ---- generic helpers ---------------------------------------------------------

/// States reachable from the initial state (any label).
template <class Sym>
std::vector<bool> reachable_states(const Nfa<Sym>& a) {
    std::vector<bool> seen(a.num_states(), false);
    if (a.num_states() == 0) {
        return seen;
    }
    auto out = a.out_edges();
    std::vector<StateId> stack{a.initial()};
    seen[a.initial()] = true;
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        for (auto i : out[q]) {
            StateId r = a.transitions()[i].to;
            if (!seen[r]) {
                seen[r] = true;
                stack.push_back(r);
            }
        }
    }
    return seen;
}

/// States from which a final state is reachable.
template <class Sym>
std::vector<bool> coreachable_states(const Nfa<Sym>& a) {
    std::vector<std::vector<StateId>> in(a.num_states());
    for (const auto& t : a.transitions()) {
        in[t.to].push_back(t.from);
    }
    std::vector<bool> seen(a.num_states(), false);
    std::vector<StateId> stack;
    for (StateId q = 0; q < a.num_states(); ++q) {
        if (a.is_final(q)) {
            seen[q] = true;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        for (StateId p : in[q]) {
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
        }
    }
    return seen;
}

/// Copy restricted to the states flagged in `keep` (the initial state is always kept).
/// Relative order of states and transitions is preserved.
template <class Sym>
Nfa<Sym> restrict_states(const Nfa<Sym>& a, std::vector<bool> keep) {
    Nfa<Sym> out;
    if (a.num_states() == 0) {
        return out;
    }
    keep[a.initial()] = true;
    std::vector<StateId> map(a.num_states(), 0);
    for (StateId q = 0; q < a.num_states(); ++q) {
        if (keep[q]) {
            map[q] = out.add_state(a.name(q));
            out.set_final(map[q], a.is_final(q));
        }
    }
    for (const auto& x : a.alphabet()) {
        out.add_symbol(x);
    }
    for (const auto& t : a.transitions()) {
        if (keep[t.from] && keep[t.to]) {
            out.add_transition(map[t.from], t.label, map[t.to]);
        }
    }
    out.set_initial(map[a.initial()]);
    return out;
}

/// Removes states that are unreachable or cannot reach a final state.
template <class Sym>
Nfa<Sym> trim(const Nfa<Sym>& a) {
    auto r = reachable_states(a);
    auto c = coreachable_states(a);
    std::vector<bool> keep(a.num_states());
    for (StateId q = 0; q < a.num_states(); ++q) {
        keep[q] = r[q] && c[q];
    }
    return restrict_states(a, keep);
}

template <class Sym>
bool is_empty_language(const Nfa<Sym>& a) {
    if (a.num_states() == 0) {
        return true;
    }
    return !coreachable_states(a)[a.initial()];
}

/// Topological order of an automaton without cycles (self-loops included), or nullopt.
template <class Sym>
std::optional<std::vector<StateId>> topological_order(const Nfa<Sym>& a) {
    std::vector<std::size_t> indeg(a.num_states(), 0);
    auto out = a.out_edges();
    for (const auto& t : a.transitions()) {
        ++indeg[t.to];
    }
    std::set<StateId> ready;
    for (StateId q = 0; q < a.num_states(); ++q) {
        if (indeg[q] == 0) {
            ready.insert(q);
        }
    }
    std::vector<StateId> order;
    while (!ready.empty()) {
        StateId q = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(q);
        for (auto i : out[q]) {
            StateId r = a.transitions()[i].to;
            if (--indeg[r] == 0) {
                ready.insert(r);
            }
        }
    }
    if (order.size() != a.num_states()) {
        return std::nullopt;
    }
    return order;
}

// ---- operations --------------------------------------------------------------

/// Checks state/label references and prunes states unreachable from the initial state.
Validated validate(const LetterNfa& a);

/// One state per strongly connected component; letters inside a component become
/// self-loops and every letter between components may also be skipped, so the
/// result accepts exactly the downward closure of L(a).
PartiallyOrderedNfa scc_collapse(const LetterNfa& a);

/// Acyclic automaton over atoms whose accepted atom words represent the ideals of
/// an ideal decomposition of L(r). Throws PreconditionError if r is not partially ordered.
IdealNfa ideal_automaton(const PartiallyOrderedNfa& r);

/// All accepted atom words, reduced and deduplicated, in ascending order.
/// Throws CapExceeded when more than `cap` distinct representations arise.
std::vector<IdealRep> enumerate_path_ideals(const IdealNfa& n, std::size_t cap, const Alphabet& ambient);

/// Relabels epsilon transitions with `#` and adds a `#` self-loop to every state.
LetterNfa pad_epsilon(const LetterNfa& a);

/// Deterministic automaton over the alphabet plus one fresh selector letter per
/// transition; its language is directed iff L(a) is. Requires an epsilon-free input.
LetterNfa determinize_preserving(const LetterNfa& a);

bool is_deterministic(const LetterNfa& a);

/// Subset simulation.
bool accepts(const LetterNfa& a, const Word& w);

/// Letters of an automaton's alphabet as an Alphabet.
Alphabet alphabet_of(const LetterNfa& a);
/// Union of the letters of all atoms of an atom automaton.
Alphabet letters_of(const AtomNfa& a);

/// Acyclic atom automaton with its topological order (PreconditionError on cycles).
IdealNfa make_ideal_nfa(AtomNfa a);

// ---- text format ---------------------------------------------------------------

LetterNfa parse_nfa(std::string_view text);
AtomNfa parse_atom_nfa(std::string_view text);

template <class Sym>
std::string to_string(const Nfa<Sym>& a) {
    std::string s = "alphabet:";
    for (const auto& x : a.alphabet()) {
        s += ' ' + symbol_to_string(x);
    }
    s += "\nstates:";
    for (const auto& n : a.names()) {
        s += ' ' + n;
    }
    s += "\ninitial: " + (a.num_states() ? a.name(a.initial()) : std::string());
    s += "\nfinal:";
    for (auto q : a.finals()) {
        s += ' ' + a.name(q);
    }
    s += '\n';
    for (const auto& t : a.transitions()) {
        s += a.name(t.from) + ' ' + a.label_string(t.label) + ' ' + a.name(t.to) + '\n';
    }
    return s;
}

} // namespace downclose
