#pragma once

// Atoms, ideal representations and the operations on them: containment,
// absorption, reduction, membership, inclusion, embeddings and weights.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace downclose {

using BigInt = boost::multiprecision::cpp_int;

/// A letter is an opaque token; letters are compared by exact token equality.
struct Letter {
    std::string token;

    auto operator<=>(const Letter&) const = default;
    bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

/// True iff `token` is a legal letter: nonempty, printable, no whitespace and
/// none of `{ } * ? , |`. The token `eps` is reserved.
bool is_valid_letter_token(std::string_view token);

/// Finite set of letters kept in ascending lexicographic order.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<Letter> letters);
    static Alphabet from_tokens(std::initializer_list<std::string_view> tokens);

    bool contains(const Letter& x) const;
    bool empty() const { return letters_.empty(); }
    std::size_t size() const { return letters_.size(); }
    const std::vector<Letter>& letters() const { return letters_; }
    auto begin() const { return letters_.begin(); }
    auto end() const { return letters_.end(); }

    bool is_subset_of(const Alphabet& other) const;
    Alphabet united(const Alphabet& other) const;
    Alphabet without(const Letter& x) const;

    bool operator==(const Alphabet&) const = default;
    auto operator<=>(const Alphabet&) const = default;

private:
    std::vector<Letter> letters_;
};

/// Either a single atom a? (ideal {a, eps}) or an alphabet atom D* (ideal D^*).
class Atom {
public:
    enum class Kind { single, star };

    static Atom single(Letter a);
    /// Throws PreconditionError on an empty alphabet.
    static Atom star(Alphabet letters);

    Kind kind() const { return kind_; }
    bool is_single() const { return kind_ == Kind::single; }
    bool is_star() const { return kind_ == Kind::star; }
    /// The letter of a single atom.
    const Letter& letter() const { return letters_.letters().front(); }
    /// {a} for a?, D for D*.
    const Alphabet& letters() const { return letters_; }
    bool contains_letter(const Letter& x) const { return letters_.contains(x); }

    bool operator==(const Atom&) const = default;
    auto operator<=>(const Atom&) const = default;

private:
    Atom(Kind kind, Alphabet letters) : kind_(kind), letters_(std::move(letters)) {}

    Kind kind_;
    Alphabet letters_;
};

/// Finite sequence of atoms over an ambient alphabet. The empty sequence denotes {eps}.
/// Equality is syntactic and ignores the ambient alphabet.
struct IdealRep {
    std::vector<Atom> atoms;
    Alphabet ambient;

    IdealRep() = default;
    IdealRep(std::vector<Atom> atoms_, Alphabet ambient_)
        : atoms(std::move(atoms_)), ambient(std::move(ambient_)) {}
    /// Ambient alphabet = letters occurring in the atoms.
    explicit IdealRep(std::vector<Atom> atoms_);

    std::size_t size() const { return atoms.size(); }
    bool empty() const { return atoms.empty(); }
    const Atom& operator[](std::size_t i) const { return atoms[i]; }

    bool operator==(const IdealRep& other) const { return atoms == other.atoms; }
    auto operator<=>(const IdealRep& other) const { return atoms <=> other.atoms; }
};

/// Max-plus carrier: a nonnegative big integer or -infinity.
class Weight {
public:
    Weight() = default; // -infinity
    Weight(BigInt v) : value_(std::move(v)) {}
    Weight(long v) : value_(BigInt(v)) {}

    static Weight neg_inf() { return Weight(); }
    static Weight zero() { return Weight(BigInt(0)); }

    bool is_neg_inf() const { return !value_.has_value(); }
    const BigInt& value() const { return *value_; }

    friend Weight operator+(const Weight& a, const Weight& b);
    friend bool operator==(const Weight& a, const Weight& b);
    friend std::strong_ordering operator<=>(const Weight& a, const Weight& b);

    std::string to_string() const;

private:
    std::optional<BigInt> value_;
};

Weight max(const Weight& a, const Weight& b);

enum class Absorption { neither, left_absorbs, right_absorbs, both };

/// Monotone map from atoms of a sub-representation (0-based) to atoms of a
/// super-representation (0-based).
struct Embedding {
    std::vector<std::size_t> map;
    bool operator==(const Embedding&) const = default;
};

/// Idl(outer) ⊇ Idl(inner).
bool atom_contains(const Atom& outer, const Atom& inner);

Absorption absorbs(const Atom& left, const Atom& right);

/// No adjacent pair of atoms is absorptive.
bool is_reduced(std::span<const Atom> atoms);
inline bool is_reduced(const IdealRep& rep) { return is_reduced(std::span<const Atom>(rep.atoms)); }
bool is_left_reduced(std::span<const Atom> atoms);
bool is_right_reduced(std::span<const Atom> atoms);

/// Canonical reduced representation of the same ideal. Scans left to right;
/// on absorption keeps the absorbing atom (the left one on `both`).
IdealRep reduce(const IdealRep& rep);

/// Shortest-prefix cursor step. `cursor` is the length of the shortest prefix of
/// `atoms` embedding the input read so far (0 at the start); returns the new
/// length after reading `x`, or atoms.size() + 1 once the input no longer embeds.
std::size_t advance_cursor(std::span<const Atom> atoms, std::size_t cursor, const Letter& x);

/// Same cursor, advanced by a whole atom instead of a letter.
std::size_t advance_cursor(std::span<const Atom> atoms, std::size_t cursor, const Atom& alpha);

/// w ∈ Idl(rep). Throws PreconditionError if w uses a letter outside rep.ambient.
bool ideal_member(const Word& w, const IdealRep& rep);

/// Word with one letter per single atom and (sorted D)^(m+1) per alphabet atom D*.
Word characteristic_word(const IdealRep& rep, std::size_t m);

/// Idl(sub) ⊆ Idl(sup).
bool ideal_includes(const IdealRep& sub, const IdealRep& sup);

/// Idl(sub) ⊊ Idl(sup). Both must be reduced (PreconditionError otherwise).
bool strict_includes(const IdealRep& sub, const IdealRep& sup);

/// Shortest-prefix embedding of sub into sup, or nullopt when Idl(sub) ⊄ Idl(sup).
std::optional<Embedding> embedding(const IdealRep& sub, const IdealRep& sup);

/// 1 for a single atom, (k+1)^|D| for D*.
BigInt weight(const Atom& atom, const BigInt& k);
BigInt weight(const IdealRep& rep, const BigInt& k);

/// Strict inclusion chain of 2^ell reduced representations over {a0, ..., a_ell}.
/// Throws PreconditionError when ell > cap.
std::vector<IdealRep> chain_family(unsigned ell, unsigned cap = 12);

// ---- text format -----------------------------------------------------------

std::string to_string(const Atom& atom);
/// `a?`, `{a,b}*`; whitespace separated; `eps` for the empty representation.
std::string to_string(const IdealRep& rep);

Atom parse_atom(std::string_view token);
/// Parses the ideal representation text format. When `ambient` is absent the
/// ambient alphabet is the set of letters occurring in the atoms.
IdealRep parse_rep(std::string_view text, std::optional<Alphabet> ambient = std::nullopt);

/// Letters concatenated when every token is one character, space separated otherwise;
/// `eps` for the empty word.
std::string to_string(const Word& w);
/// Inverse of to_string(Word): splits on whitespace; text without whitespace is
/// one letter when `alphabet` contains it and one letter per character otherwise.
Word parse_word(std::string_view text, const Alphabet* alphabet = nullptr);

} // namespace downclose
