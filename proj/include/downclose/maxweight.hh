#pragma once

// Max-plus matrices over the reduced ideal automaton and extraction of a
// canonical maximum-weight accepted ideal representation.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "downclose/ideals.hh"
#include "downclose/nfa.hh"

namespace downclose {

/// Square max-plus matrix; entries default to -infinity.
class MaxPlusMatrix {
public:
    explicit MaxPlusMatrix(std::size_t n = 0) : n_(n), cells_(n * n) {}
    static MaxPlusMatrix identity(std::size_t n);

    std::size_t size() const { return n_; }
    Weight& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }
    const Weight& operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

    bool operator==(const MaxPlusMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<Weight> cells_;
};

/// (A ⊗ B)(i,j) = max_k A(i,k) + B(k,j). PreconditionError on a size mismatch.
MaxPlusMatrix operator*(const MaxPlusMatrix& a, const MaxPlusMatrix& b);

/// n-th max-plus power by repeated squaring; the identity for n = 0.
MaxPlusMatrix matpow(const MaxPlusMatrix& m, const BigInt& n);

/// Ideal automaton with states 0..n-1 in topological order, state 0 initial,
/// state n-1 the unique final state carrying an epsilon self-loop, and at most
/// one edge per ordered state pair.
struct NormalizedIdealNfa {
    struct Edge {
        std::size_t from;
        std::size_t to;
        std::optional<Atom> atom; ///< nullopt for epsilon
        Weight weight;            ///< mu_m of the atom, 0 for epsilon
    };

    std::vector<std::string> names;
    /// Kept edges sorted by (from, to); the final self-loop is implicit.
    std::vector<Edge> edges;
    /// Parallel edges discarded by the merge.
    std::vector<Edge> merged;
    /// Weight parameter: the number of states.
    BigInt m;

    std::size_t num_states() const { return names.size(); }
    std::size_t initial() const { return 0; }
    std::size_t final_state() const { return names.size() - 1; }
};

/// Unique final state (reusing a lone sink final, adding a fresh one otherwise),
/// states renumbered topologically and parallel edges merged under mu_m with m the
/// resulting state count; ties keep the atom with the least serialized form.
/// Trims the input first; PreconditionError on an empty language.
NormalizedIdealNfa normalize(const IdealNfa& n);

/// Entry (i,j) is mu_m of the edge label i -> j, 0 for epsilon and the final loop.
MaxPlusMatrix matrix_of(const NormalizedIdealNfa& n, const BigInt& m);

/// Below this state count suffix_maxima powers the matrix; above it uses a
/// longest-path pass over the acyclic automaton, which yields the same values.
inline constexpr std::size_t matpow_state_limit = 48;

/// Per state, the maximal weight of a path to the final state.
std::vector<Weight> suffix_maxima(const NormalizedIdealNfa& n);
std::vector<Weight> suffix_maxima_matpow(const NormalizedIdealNfa& n);
std::vector<Weight> suffix_maxima_dag(const NormalizedIdealNfa& n);

/// Walks from the initial state; at each step takes the edge maximizing
/// weight + maxima[target], preferring the smallest target index.
IdealRep extract_canonical_path(const NormalizedIdealNfa& n, const std::vector<Weight>& maxima,
                                const Alphabet& ambient);

} // namespace downclose
