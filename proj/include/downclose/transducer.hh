#pragma once

// Letter-to-letter transducers over atoms and their images of regular and
// context-free languages of ideal representations.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "downclose/cfg.hh"
#include "downclose/ideals.hh"
#include "downclose/nfa.hh"

namespace downclose {

class Transducer {
public:
    struct Edge {
        StateId from;
        std::size_t in;  ///< index into alphabet(), or `epsilon`
        std::size_t out; ///< index into alphabet(), or `epsilon`
        StateId to;
        bool operator==(const Edge&) const = default;
    };

    /// Input and output alphabet; sorted and deduplicated.
    explicit Transducer(std::vector<Atom> alphabet);

    StateId add_state(std::string name);
    void add_edge(StateId from, std::size_t in, std::size_t out, StateId to);
    void set_initial(StateId q) { initial_ = q; }
    void set_final(StateId q, bool value = true) { final_.at(q) = value; }

    std::size_t num_states() const { return names_.size(); }
    const std::string& name(StateId q) const { return names_[q]; }
    const std::vector<Atom>& alphabet() const { return alphabet_; }
    std::optional<std::size_t> index_of(const Atom& x) const;
    const std::vector<Edge>& edges() const { return edges_; }
    StateId initial() const { return initial_; }
    bool is_final(StateId q) const { return final_[q]; }

    /// All outputs on input `w` (each output a sequence of atoms).
    std::set<std::vector<Atom>> run(const std::vector<Atom>& w) const;

    /// Single output on `w`; InternalError when the transducer is not functional on w,
    /// PreconditionError when w has no output.
    std::vector<Atom> apply(const std::vector<Atom>& w) const;

private:
    std::vector<std::string> names_;
    std::vector<Atom> alphabet_;
    std::vector<Edge> edges_;
    std::set<std::tuple<StateId, std::size_t, std::size_t, StateId>> seen_;
    StateId initial_ = 0;
    std::vector<bool> final_;
};

/// Left-reducing transducer: copies atoms and skips every atom absorbed by the
/// last alphabet atom written. Requires a nonempty alphabet.
Transducer build_TL(const std::vector<Atom>& gamma);

/// Edges reversed; a fresh initial state has epsilon edges to the old final states,
/// the old initial state becomes the only final state.
Transducer reverse(const Transducer& t);

/// Right-reducing transducer.
inline Transducer build_TR(const std::vector<Atom>& gamma) { return reverse(build_TL(gamma)); }

/// Reachable and trimmed product automaton accepting t(L(n)).
/// Throws PreconditionError when n uses atoms outside t's alphabet.
AtomNfa apply_to_nfa(const Transducer& t, const AtomNfa& n);

/// Grammar for t(L(g)) by the state-pair construction. Arbitrary bodies are allowed;
/// epsilon-input edges must have epsilon output.
AtomCfg apply_to_cfg(const Transducer& t, const AtomCfg& g);

/// Applies T_R and then T_L to the language of an ideal automaton.
IdealNfa reduce_ideal_nfa(const IdealNfa& n);

std::string to_string(const Transducer& t);

} // namespace downclose
