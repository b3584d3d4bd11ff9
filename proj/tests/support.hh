#pragma once

// Shared helpers for the test binaries: data paths and random instance generators.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "downclose/cfg.hh"
#include "downclose/ideals.hh"
#include "downclose/nfa.hh"
#include "downclose/slp.hh"

namespace downclose::testing {

using Rng = std::mt19937_64;

std::string data_path(const std::string& name);
std::string read_text(const std::string& path);
LetterNfa load_nfa(const std::string& name);
LetterCfg load_cfg(const std::string& name);

/// First `n` letters of a, b, c, ...
std::vector<Letter> letters(std::size_t n);

/// Uniform integer in [lo, hi].
std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);

/// Random automaton with 1..max_states states, 1..max_letters letters and up to
/// max_transitions transitions (some epsilon), random initial and finals.
LetterNfa random_nfa(Rng& rng, std::size_t max_states, std::size_t max_letters, std::size_t max_transitions);

/// Random reduced representation of length <= max_len over the given letters.
IdealRep random_reduced_rep(Rng& rng, std::size_t max_len, const std::vector<Letter>& sigma);

Word random_word(Rng& rng, std::size_t len, const std::vector<Letter>& sigma);

/// S -> w1 | ... | wk.
LetterCfg finite_grammar(const std::vector<Word>& words, const std::vector<Letter>& sigma);

/// Small random grammar (possibly recursive, possibly empty) over the given letters.
LetterCfg random_cfg(Rng& rng, std::size_t max_nonterminals, const std::vector<Letter>& sigma);

/// Letter SLP for a nonempty word, with a binary split structure.
LetterSlp word_slp(const Word& w);

/// All words over sigma of length exactly n.
std::vector<Word> all_words(const std::vector<Letter>& sigma, std::size_t n);

} // namespace downclose::testing
