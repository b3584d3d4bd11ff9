#pragma once

// Brute-force reference implementations for testing. They share no algorithmic
// code with the pipeline: own closure computations, own path enumeration, own
// reduction and a split-point membership table.

#include <cstddef>
#include <set>
#include <vector>

#include "downclose/cfg.hh"
#include "downclose/ideals.hh"
#include "downclose/nfa.hh"

namespace downclose::oracle {

/// Words up to a length bound.
struct WordSet {
    std::size_t bound = 0;
    std::set<Word> words;
};

/// u is a scattered subword of v.
bool is_subword(const Word& u, const Word& v);

/// w ∈ Idl(r) by a table over (atom index, word position).
bool ideal_member_dp(const Word& w, const IdealRep& r);

/// ↓L(a) ∩ Σ^{≤bound}. CapExceeded when more than `cap` words arise.
WordSet dcl_words(const LetterNfa& a, std::size_t bound, std::size_t cap = 2000000);

/// Idl(r) ⊆ Idl(s) via membership of a long characteristic word.
bool includes(const IdealRep& r, const IdealRep& s);

/// Adjacent absorptions removed until none is left.
IdealRep naive_reduce(const IdealRep& r);

/// Maximal ideals of ↓L(a): ideal paths through the component graph, reduced,
/// strictly included ones discarded. CapExceeded beyond `cap` paths.
std::set<IdealRep> decompose_bruteforce(const LetterNfa& a, std::size_t cap = 200000);

/// ↓L(a) is an ideal (true for the empty language).
bool directed_bruteforce(const LetterNfa& a, std::size_t cap = 200000);

/// w ∈ L(g), or w ∈ ↓L(g) when `downward`. Fixpoint over all substrings; arbitrary grammars.
bool cyk(const LetterCfg& g, const Word& w, bool downward = false);

/// All words of L(g) (or ↓L(g)) over its terminals up to the bound.
std::set<Word> cfg_words(const LetterCfg& g, std::size_t bound, bool downward = false);

} // namespace downclose::oracle
