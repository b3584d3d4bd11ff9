#include <catch_amalgamated.hpp>

#include "downclose/oracle.hh"
#include "support.hh"

using namespace downclose;
using namespace downclose::testing;

namespace {

Word w(const std::string& s) {
    Word out;
    for (char c : s) {
        out.push_back(Letter{std::string(1, c)});
    }
    return out;
}

} // namespace

TEST_CASE("subword relation") {
    CHECK(oracle::is_subword(w(""), w("abc")));
    CHECK(oracle::is_subword(w("ac"), w("abc")));
    CHECK_FALSE(oracle::is_subword(w("ca"), w("abc")));
    CHECK_FALSE(oracle::is_subword(w("aa"), w("a")));
}

TEST_CASE("table membership examples") {
    IdealRep r = parse_rep("{a,b}* c? {a,b}*");
    CHECK(oracle::ideal_member_dp(w("abcab"), r));
    CHECK(oracle::ideal_member_dp(w("bbbb"), r));
    CHECK_FALSE(oracle::ideal_member_dp(w("cc"), r));
    CHECK(oracle::ideal_member_dp(w(""), parse_rep("eps")));
    CHECK_FALSE(oracle::ideal_member_dp(w("a"), parse_rep("eps")));
}

TEST_CASE("closure words are downward closed") {
    Rng rng(81);
    for (int i = 0; i < 100; ++i) {
        LetterNfa a = random_nfa(rng, 4, 2, 7);
        auto s = oracle::dcl_words(a, 4).words;
        for (const auto& x : s) {
            for (std::size_t k = 0; k < x.size(); ++k) {
                Word y = x;
                y.erase(y.begin() + static_cast<std::ptrdiff_t>(k));
                REQUIRE(s.count(y) == 1);
            }
        }
        for (std::size_t n = 0; n <= 4; ++n) {
            for (const auto& x : all_words(a.alphabet(), n)) {
                if (accepts(a, x)) {
                    REQUIRE(s.count(x) == 1);
                }
            }
        }
    }
    CHECK_THROWS_AS(oracle::dcl_words(parse_nfa("alphabet: a b\nstates: p\ninitial: p\nfinal: p\np a p\np b p\n"), 10, 50),
                    CapExceeded);
}

TEST_CASE("inclusion by characteristic words") {
    CHECK(oracle::includes(parse_rep("a? b?"), parse_rep("{a,b}*")));
    CHECK_FALSE(oracle::includes(parse_rep("{a,b}*"), parse_rep("{a}* {b}*")));
    CHECK(oracle::includes(parse_rep("{a}* {b}*"), parse_rep("{a,b}*")));
    CHECK(oracle::includes(parse_rep("eps"), parse_rep("a?")));
}

TEST_CASE("naive reduction") {
    CHECK(to_string(oracle::naive_reduce(parse_rep("a? {a,b}* b?"))) == "{a,b}*");
    CHECK(to_string(oracle::naive_reduce(parse_rep("a? b?"))) == "a? b?");
}

TEST_CASE("brute-force decomposition yields pairwise incomparable ideals") {
    Rng rng(82);
    for (int i = 0; i < 200; ++i) {
        LetterNfa a = random_nfa(rng, 4, 3, 7);
        auto ideals = oracle::decompose_bruteforce(a);
        for (const auto& r : ideals) {
            for (const auto& s : ideals) {
                if (!(r == s)) {
                    REQUIRE_FALSE(oracle::includes(r, s));
                }
            }
        }
        REQUIRE(oracle::directed_bruteforce(a) == (ideals.size() <= 1));
    }
    CHECK(oracle::decompose_bruteforce(load_nfa("k2.nfa")).size() == 2);
}

TEST_CASE("substring fixpoint parser") {
    LetterCfg k1 = load_cfg("k1.cfg");
    CHECK(oracle::cyk(k1, w("c")));
    CHECK(oracle::cyk(k1, w("abcab")));
    CHECK_FALSE(oracle::cyk(k1, w("abc")));
    CHECK(oracle::cyk(k1, w("abc"), true));
    CHECK(oracle::cyk(k1, w("bbb"), true));
    CHECK_FALSE(oracle::cyk(k1, w("cc"), true));
    LetterCfg unit = parse_cfg("terminals: a\nstart: S\nS -> A | eps\nA -> S a\n");
    CHECK(oracle::cyk(unit, w("aaa")));
    auto words = oracle::cfg_words(k1, 5);
    CHECK(words == std::set<Word>{w("c"), w("abcab")});
    CHECK(oracle::cfg_words(k1, 2, true).size() == 1 + 3 + 8);
}
