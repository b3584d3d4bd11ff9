#pragma once

// Straight-line programs: grammars with one production per nonterminal and no
// cycles, each denoting a single (possibly exponentially long) word.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "downclose/cfg.hh"
#include "downclose/errors.hh"
#include "downclose/ideals.hh"

namespace downclose {

template <class T>
class Slp {
public:
    /// Validates one production per nonterminal and acyclicity; ParseError otherwise
    /// (the message names a cycle when there is one).
    static Slp from_cfg(Cfg<T> g);

    const Cfg<T>& grammar() const { return g_; }
    std::size_t start() const { return g_.start(); }
    const std::vector<Symbol>& body(std::size_t a) const { return g_.productions()[prod_[a]].body; }
    /// |val| of nonterminal a.
    const BigInt& length(std::size_t a) const { return len_[a]; }
    const BigInt& length() const { return len_[g_.start()]; }
    /// Nonterminals, each after all nonterminals in its body.
    const std::vector<std::size_t>& order() const { return order_; }

private:
    Cfg<T> g_;
    std::vector<std::size_t> prod_;
    std::vector<BigInt> len_;
    std::vector<std::size_t> order_;
};

using LetterSlp = Slp<Letter>;
using AtomSlp = Slp<Atom>;

template <class T>
BigInt val_length(const Slp<T>& s) {
    return s.length();
}

/// 1-based random access. Throws PreconditionError when i is out of range.
template <class T>
const T& char_at(const Slp<T>& s, const BigInt& i);

/// val(s) as a vector; CapExceeded when |val| > cap.
template <class T>
std::vector<T> expand(const Slp<T>& s, std::size_t cap);

/// SLP for val(s) without its last symbol. Throws PreconditionError on an empty value.
template <class T>
Slp<T> drop_last(const Slp<T>& s);

/// Trivial SLP with the word split into chunks of `chunk` symbols.
template <class T>
Slp<T> slp_from_word(const std::vector<T>& w, std::size_t chunk = 4);

/// Sequential reader over val(s) that never materializes the whole value.
template <class T>
class SlpReader {
public:
    explicit SlpReader(const Slp<T>& s);
    /// Next symbol or nullptr at the end.
    const T* next();

private:
    const Slp<T>* s_;
    std::vector<std::pair<std::size_t, std::size_t>> stack_;
};

struct SlpEquality {
    bool equal;
    /// True when the verdict rests on fingerprints only (value longer than the cap).
    bool probabilistic;
};

/// Length comparison, two polynomial fingerprints modulo 61-bit primes, and an exact
/// streaming comparison whenever |val| <= cap.
template <class T>
SlpEquality slp_equal(const Slp<T>& x, const Slp<T>& y, std::size_t cap = 1000000);

/// Ideal of all words of length |val(b)| except val(b) plus longer words:
/// each letter x becomes (sigma \ {x})* x?, then the last atom is dropped.
/// Throws PreconditionError when |sigma| < 2, val(b) is empty or uses letters outside sigma.
AtomSlp complement_ideal(const LetterSlp& b, const Alphabet& sigma);

/// Grammar over letters generating Idl(val(i)).
LetterCfg ideal_language_grammar(const AtomSlp& i);

/// Per nonterminal the first production (input order) attaining its table entry,
/// restricted to what the start symbol reaches. Throws PreconditionError on an empty language.
AtomSlp extract_max_slp(const AtomCfg& g, const WeightTable& t);

/// Expanded value as an ideal representation; CapExceeded beyond `cap` atoms.
IdealRep rep_of(const AtomSlp& s, std::size_t cap);

/// SLP whose value is the atoms of `rep`.
AtomSlp slp_of(const IdealRep& rep);

AtomSlp parse_slp(std::string_view text);
LetterSlp parse_letter_slp(std::string_view text);

template <class T>
std::string to_string(const Slp<T>& s) {
    return to_string(s.grammar());
}

} // namespace downclose
