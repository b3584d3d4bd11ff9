#include <catch_amalgamated.hpp>

#include "downclose/decision.hh"
#include "downclose/maxweight.hh"
#include "downclose/transducer.hh"
#include "support.hh"

using namespace downclose;
using namespace downclose::testing;

namespace {

MaxPlusMatrix random_matrix(Rng& rng, std::size_t n) {
    MaxPlusMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (uniform(rng, 0, 2) != 0) {
                m(i, j) = Weight(static_cast<long>(uniform(rng, 0, 20)));
            }
        }
    }
    return m;
}

/// Maximal weight over every accepted path, by exhaustive path enumeration.
BigInt max_path_weight(const NormalizedIdealNfa& n) {
    std::vector<std::vector<const NormalizedIdealNfa::Edge*>> out(n.num_states());
    for (const auto& e : n.edges) {
        out[e.from].push_back(&e);
    }
    BigInt best = -1;
    std::vector<std::pair<std::size_t, BigInt>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [q, w] = stack.back();
        stack.pop_back();
        if (q == n.final_state()) {
            best = std::max(best, w);
        }
        for (const auto* e : out[q]) {
            stack.emplace_back(e->to, w + (e->atom ? weight(*e->atom, n.m) : BigInt(0)));
        }
    }
    return best;
}

IdealNfa reduced_of(const LetterNfa& a) { return reduce_ideal_nfa(ideal_automaton(scc_collapse(a))); }

} // namespace

TEST_CASE("max-plus identity and power laws") {
    Rng rng(41);
    for (int i = 0; i < 30; ++i) {
        std::size_t n = uniform(rng, 1, 6);
        MaxPlusMatrix m = random_matrix(rng, n);
        CHECK(MaxPlusMatrix::identity(n) * m == m);
        CHECK(m * MaxPlusMatrix::identity(n) == m);
        CHECK(matpow(m, 0) == MaxPlusMatrix::identity(n));
        CHECK(matpow(m, 1) == m);
        std::size_t a = uniform(rng, 0, 7), b = uniform(rng, 0, 7);
        CHECK(matpow(m, a + b) == matpow(m, a) * matpow(m, b));
        MaxPlusMatrix x = random_matrix(rng, n), y = random_matrix(rng, n);
        CHECK((m * x) * y == m * (x * y));
    }
    CHECK_THROWS_AS(MaxPlusMatrix(2) * MaxPlusMatrix(3), PreconditionError);
}

TEST_CASE("max-plus product example") {
    MaxPlusMatrix a(2), b(2);
    a(0, 0) = Weight(1);
    a(0, 1) = Weight(5);
    b(0, 1) = Weight(2);
    b(1, 1) = Weight(0);
    MaxPlusMatrix c = a * b;
    CHECK(c(0, 1) == Weight(5));
    CHECK(c(0, 0).is_neg_inf());
    CHECK(c(1, 1).is_neg_inf());
}

TEST_CASE("normalize adds a fresh final state and merges parallel edges") {
    AtomNfa a;
    StateId p = a.add_state("p");
    StateId q = a.add_state("q");
    StateId r = a.add_state("r");
    a.set_initial(p);
    a.set_final(q);
    a.set_final(r);
    a.add_transition(p, parse_atom("a?"), q);
    a.add_transition(p, parse_atom("{a,b}*"), q);
    a.add_transition(p, parse_atom("b?"), r);
    a.add_transition(q, parse_atom("c?"), r);
    NormalizedIdealNfa n = normalize(make_ideal_nfa(a));
    CHECK(n.num_states() == 4);
    CHECK(n.m == 4);
    CHECK(n.names.back() == "final");
    CHECK(n.merged.size() == 1);
    for (const auto& e : n.edges) {
        CHECK(e.from < e.to);
        if (e.from == 0 && e.to == 1) {
            REQUIRE(e.atom);
            CHECK(to_string(*e.atom) == "{a,b}*");
        }
    }
}

TEST_CASE("normalize reuses a unique sink final state") {
    AtomNfa a;
    StateId p = a.add_state("p");
    StateId q = a.add_state("q");
    a.set_initial(p);
    a.set_final(q);
    a.add_transition(p, parse_atom("a?"), q);
    NormalizedIdealNfa n = normalize(make_ideal_nfa(a));
    CHECK(n.num_states() == 2);
    CHECK(n.names.back() == "q");
}

TEST_CASE("normalize rejects the empty language") {
    AtomNfa a;
    a.set_initial(a.add_state("p"));
    CHECK_THROWS_AS(normalize(make_ideal_nfa(a)), PreconditionError);
}

TEST_CASE("matrix power and longest path agree") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        LetterNfa a = random_nfa(rng, 7, 3, 12);
        IdealNfa red = reduced_of(a);
        if (is_empty_language(red.nfa)) {
            continue;
        }
        NormalizedIdealNfa n = normalize(red);
        auto x = suffix_maxima_matpow(n);
        auto y = suffix_maxima_dag(n);
        REQUIRE(x == y);
        REQUIRE(suffix_maxima(n) == x);
        MaxPlusMatrix m = matrix_of(n, n.m);
        CHECK(matpow(m, n.num_states())(0, n.final_state()) == x[0]);
    }
}

TEST_CASE("extracted path attains the maximal weight") {
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        LetterNfa a = random_nfa(rng, 6, 3, 10);
        IdealNfa red = reduced_of(a);
        if (is_empty_language(red.nfa)) {
            continue;
        }
        NormalizedIdealNfa n = normalize(red);
        auto maxima = suffix_maxima(n);
        Alphabet amb = alphabet_of(a);
        IdealRep rep = extract_canonical_path(n, maxima, amb);
        REQUIRE_FALSE(maxima[0].is_neg_inf());
        CHECK(weight(rep, n.m) == maxima[0].value());
        CHECK(max_path_weight(n) == maxima[0].value());
        BigInt best = 0;
        for (const auto& r : enumerate_path_ideals(red, 100000, amb)) {
            best = std::max(best, weight(r, n.m));
        }
        CHECK(best == maxima[0].value());
        CHECK(extract_canonical_path(n, maxima, amb) == rep);
    }
}

TEST_CASE("ties go to the smallest target state") {
    AtomNfa a;
    StateId p = a.add_state("p");
    StateId q = a.add_state("q");
    StateId r = a.add_state("r");
    StateId f = a.add_state("f");
    a.set_initial(p);
    a.set_final(f);
    a.add_transition(p, parse_atom("a?"), q);
    a.add_transition(p, parse_atom("b?"), r);
    a.add_transition(q, parse_atom("c?"), f);
    a.add_transition(r, parse_atom("c?"), f);
    NormalizedIdealNfa n = normalize(make_ideal_nfa(a));
    IdealRep rep = extract_canonical_path(n, suffix_maxima(n), Alphabet::from_tokens({"a", "b", "c"}));
    CHECK(to_string(rep) == "a? c?");
}

TEST_CASE("worked example weight") {
    NfaCandidate c = nfa_candidate(load_nfa("worked_example.nfa"));
    CHECK(c.states == 10);
    CHECK(c.weight == 1574);
    CHECK(to_string(c.rep) == "{a,b}* c? {d,e}* {a,c,f}*");
}
