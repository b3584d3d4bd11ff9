#pragma once

// End-to-end decision procedures: directedness of regular and context-free
// languages, inclusion in an ideal, equivalence of downward closures, counting
// maximal ideals and the reduction from compressed membership.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "downclose/cfg.hh"
#include "downclose/ideals.hh"
#include "downclose/maxweight.hh"
#include "downclose/nfa.hh"
#include "downclose/slp.hh"

namespace downclose {

/// Resource limits shared by the procedures.
struct Caps {
    /// Largest reduced ideal automaton built for an NFA.
    std::size_t states = 2000000;
    /// Longest candidate value expanded for CFG inclusion; beyond it the compressed route runs.
    /// Also bounds the length of reconstructed CFG witnesses.
    std::size_t expand = 100000;
    /// Most representations enumerated when counting or decomposing.
    std::size_t enumerate = 100000;
};

struct Verdict {
    bool directed = false;
    /// L is empty: directed vacuously, no candidate.
    bool empty = false;
    /// Candidate of an NFA query.
    std::optional<IdealRep> candidate;
    /// Candidate of a CFG query.
    std::optional<AtomSlp> candidate_slp;
    /// Word of the downward closure outside the candidate (not directed only; absent
    /// when witnesses were disabled or too long to spell out).
    std::optional<Word> witness;
    /// Some equality test rested on fingerprints only.
    bool probabilistic = false;
};

struct Inclusion {
    bool included = false;
    std::optional<Word> witness;
};

/// Intermediate results of the NFA candidate pipeline.
struct NfaCandidate {
    IdealRep rep;
    /// States of the normalized reduced ideal automaton (the weight parameter).
    std::size_t states = 0;
    BigInt weight;
};

/// Candidate ideal of a nonempty regular language. PreconditionError when L(a) is empty,
/// CapExceeded when the reduced ideal automaton exceeds caps.states.
NfaCandidate nfa_candidate(const LetterNfa& a, const Caps& caps = {});
IdealRep nfa_candidate_ideal(const LetterNfa& a, const Caps& caps = {});

/// Reduced ideal automaton of L(a), before normalization.
IdealNfa reduced_ideal_nfa(const LetterNfa& a, const Caps& caps = {});

/// Deterministic cursor automaton for Idl(v): states 0..n, sink n+1.
struct EmbeddingDfa {
    Alphabet letters;
    std::size_t size = 0; ///< n = number of atoms
    /// delta[state][letter index]; letters outside v lead to the sink.
    std::vector<std::vector<std::size_t>> delta;

    std::size_t sink() const { return size + 1; }
    std::size_t step(std::size_t state, const Letter& x) const;
    bool accepts(const Word& w) const;
};

/// The alphabet is v.ambient extended by `extra`.
EmbeddingDfa build_embedding_dfa(const IdealRep& v, const Alphabet& extra = {});

/// ↓L(a) ⊆ Idl(v); otherwise the shortest witness, least in token order among the shortest.
Inclusion nfa_included_in_ideal(const LetterNfa& a, const IdealRep& v, bool want_witness = true);

Verdict nfa_directed(const LetterNfa& a, const Caps& caps = {}, bool want_witness = true);

/// Candidate SLP of a nonempty context-free language. PreconditionError when L(g) is empty.
AtomSlp cfg_candidate_ideal(const LetterCfg& g);

enum class InclusionRoute { automatic, expanded, compressed };

/// ↓L(g) ⊆ Idl(val(i)). The expanded route runs the cursor automaton over the expanded
/// value; the compressed route locates atoms inside the SLP. Both compute the largest
/// cursor reachable per (nonterminal, cursor) pair of the CNF of g.
Inclusion cfg_included_in_ideal(const LetterCfg& g, const AtomSlp& i, const Caps& caps = {},
                                InclusionRoute route = InclusionRoute::automatic,
                                bool want_witness = true);

Verdict cfg_directed(const LetterCfg& g, const Caps& caps = {}, bool want_witness = true);

struct DceResult {
    bool equal = false;
    bool probabilistic = false;
};

/// Equality of the downward closures of two directed languages. Unless `assume_directed`,
/// both inputs are checked first and PreconditionError is thrown on a non-directed one.
DceResult dce_directed_nfa(const LetterNfa& a1, const LetterNfa& a2, bool assume_directed = false,
                           const Caps& caps = {});
DceResult dce_directed_cfg(const LetterCfg& g1, const LetterCfg& g2, bool assume_directed = false,
                           const Caps& caps = {});

/// Maximal ideals of ↓L(a), ascending. CapExceeded beyond caps.enumerate representations.
std::vector<IdealRep> maximal_ideals(const LetterNfa& a, const Caps& caps = {});
std::size_t count_maximal_ideals(const LetterNfa& a, const Caps& caps = {});

/// Pair letters are written `x:y`.
Letter pair_letter(const Letter& x, const Letter& y);
/// Splits a pair letter; PreconditionError when it is not one.
std::pair<Letter, Letter> split_pair_letter(const Letter& p);

/// Letter-wise pairing; PreconditionError on a length mismatch.
Word convolution(const Word& u, const Word& v);

/// Grammar for { w : val(a) ⊗ w ∈ L(r) } where r reads pair letters.
LetterCfg membership_grammar(const LetterNfa& r, const LetterSlp& a);

/// Grammar for L(g) ∪ Idl(complement ideal of val(b)); directed iff val(b) ∉ L(g).
/// PreconditionError when some word of L(g) has a length other than |val(b)| or the
/// joint alphabet has fewer than two letters.
LetterCfg hardness_instance(const LetterCfg& g, const LetterSlp& b);

/// Disjoint union with a fresh start symbol.
LetterCfg union_grammar(const LetterCfg& g1, const LetterCfg& g2);

} // namespace downclose
