#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "downclose/cfg.hh"
#include "downclose/transducer.hh"
#include "support.hh"

using namespace downclose;
using namespace downclose::testing;

namespace {

using AtomWord = std::vector<Atom>;

std::vector<Atom> gamma2() {
    return {parse_atom("a?"), parse_atom("b?"), parse_atom("{a}*"), parse_atom("{b}*"), parse_atom("{a,b}*")};
}

std::vector<AtomWord> atom_words_upto(const std::vector<Atom>& g, std::size_t n) {
    std::vector<AtomWord> out{{}};
    std::vector<AtomWord> layer{{}};
    for (std::size_t len = 1; len <= n; ++len) {
        std::vector<AtomWord> next;
        for (const auto& w : layer) {
            for (const auto& x : g) {
                next.push_back(w);
                next.back().push_back(x);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

AtomWord rev(AtomWord w) {
    std::reverse(w.begin(), w.end());
    return w;
}

bool left_reduced(const AtomWord& w) {
    for (std::size_t k = 1; k < w.size(); ++k) {
        auto ab = absorbs(w[k - 1], w[k]);
        if (ab == Absorption::left_absorbs || ab == Absorption::both) {
            return false;
        }
    }
    return true;
}

/// Accepted words of an acyclic atom automaton.
std::set<AtomWord> nfa_words(const AtomNfa& a) {
    std::set<AtomWord> out;
    if (a.num_states() == 0) {
        return out;
    }
    auto edges = a.out_edges();
    std::vector<std::pair<StateId, AtomWord>> stack{{a.initial(), {}}};
    while (!stack.empty()) {
        auto [q, w] = stack.back();
        stack.pop_back();
        REQUIRE(w.size() <= 64);
        if (a.is_final(q)) {
            out.insert(w);
        }
        for (auto i : edges[q]) {
            const auto& t = a.transitions()[i];
            AtomWord v = w;
            if (!t.is_epsilon()) {
                v.push_back(a.symbol(t.label));
            }
            stack.emplace_back(t.to, std::move(v));
        }
    }
    return out;
}

/// Language of an acyclic atom grammar.
std::set<AtomWord> cfg_words(const AtomCfg& g) {
    std::vector<std::set<AtomWord>> lang(g.num_nonterminals());
    auto heads = g.by_head();
    for (auto a : bottom_up_order(g)) {
        for (auto p : heads[a]) {
            std::set<AtomWord> acc{{}};
            for (const auto& s : g.productions()[p].body) {
                std::set<AtomWord> next;
                for (const auto& u : acc) {
                    if (s.terminal) {
                        AtomWord v = u;
                        v.push_back(g.terminal(s.id));
                        next.insert(v);
                    } else {
                        for (const auto& x : lang[s.id]) {
                            AtomWord v = u;
                            v.insert(v.end(), x.begin(), x.end());
                            next.insert(v);
                        }
                    }
                }
                acc = std::move(next);
            }
            lang[a].insert(acc.begin(), acc.end());
        }
    }
    return lang[g.start()];
}

AtomNfa trie(const std::vector<AtomWord>& ws) {
    AtomNfa a;
    a.set_initial(a.add_state("r"));
    std::map<AtomWord, StateId> node{{{}, a.initial()}};
    for (const auto& w : ws) {
        AtomWord prefix;
        StateId q = a.initial();
        for (const auto& x : w) {
            prefix.push_back(x);
            auto it = node.find(prefix);
            if (it == node.end()) {
                StateId r = a.add_state("n" + std::to_string(node.size()));
                a.add_transition(q, x, r);
                it = node.emplace(prefix, r).first;
            }
            q = it->second;
        }
        a.set_final(q);
    }
    return a;
}

} // namespace

TEST_CASE("left reducer is functional and left reducing") {
    Transducer tl = build_TL(gamma2());
    for (const auto& w : atom_words_upto(tl.alphabet(), 4)) {
        auto out = tl.run(w);
        REQUIRE(out.size() == 1);
        const AtomWord& v = *out.begin();
        CHECK(left_reduced(v));
        CHECK(v.size() <= w.size());
        REQUIRE(reduce(IdealRep(v)) == reduce(IdealRep(w)));
    }
}

TEST_CASE("right reducer mirrors the left reducer") {
    auto g = gamma2();
    Transducer tl = build_TL(g);
    Transducer tr = build_TR(g);
    for (const auto& w : atom_words_upto(tl.alphabet(), 4)) {
        REQUIRE(tr.apply(w) == rev(tl.apply(rev(w))));
    }
}

TEST_CASE("right then left reduction yields the reduced form") {
    auto g = gamma2();
    Transducer tl = build_TL(g);
    Transducer tr = build_TR(g);
    for (const auto& w : atom_words_upto(tl.alphabet(), 4)) {
        IdealRep out(tl.apply(tr.apply(w)));
        REQUIRE(is_reduced(out));
        REQUIRE(out == reduce(IdealRep(w)));
    }
}

TEST_CASE("empty input and empty alphabet") {
    Transducer tl = build_TL(gamma2());
    CHECK(tl.apply({}).empty());
    CHECK_THROWS_AS(build_TL({}), PreconditionError);
}

TEST_CASE("image of an automaton") {
    Rng rng(31);
    auto g = gamma2();
    Transducer tl = build_TL(g);
    Transducer tr = build_TR(g);
    auto pool = atom_words_upto(g, 3);
    for (int i = 0; i < 100; ++i) {
        std::vector<AtomWord> ws;
        for (std::size_t k = uniform(rng, 1, 6); k > 0; --k) {
            ws.push_back(pool[uniform(rng, 0, pool.size() - 1)]);
        }
        AtomNfa a = trie(ws);
        std::set<AtomWord> want_l, want_r;
        for (const auto& w : ws) {
            want_l.insert(tl.apply(w));
            want_r.insert(tr.apply(w));
        }
        REQUIRE(nfa_words(apply_to_nfa(tl, a)) == want_l);
        REQUIRE(nfa_words(apply_to_nfa(tr, a)) == want_r);
    }
    AtomNfa foreign;
    foreign.set_initial(foreign.add_state("p"));
    foreign.add_transition(0, parse_atom("c?"), 0);
    CHECK_THROWS_AS(apply_to_nfa(tl, foreign), PreconditionError);
}

TEST_CASE("image of a grammar") {
    Rng rng(32);
    auto g = gamma2();
    Transducer tl = build_TL(g);
    Transducer tr = build_TR(g);
    auto pool = atom_words_upto(g, 3);
    for (int i = 0; i < 100; ++i) {
        AtomCfg c;
        c.set_start(c.add_nonterminal("S"));
        std::size_t half = c.add_nonterminal("H");
        std::set<AtomWord> want_l, want_r;
        std::vector<AtomWord> heads, tails;
        for (std::size_t k = uniform(rng, 1, 3); k > 0; --k) {
            heads.push_back(pool[uniform(rng, 0, pool.size() - 1)]);
        }
        for (std::size_t k = uniform(rng, 1, 3); k > 0; --k) {
            tails.push_back(pool[uniform(rng, 0, pool.size() - 1)]);
        }
        // S -> u H for each head u, H -> v for each tail v.
        for (const auto& u : heads) {
            std::vector<Symbol> body;
            for (const auto& x : u) {
                body.push_back(Symbol::t(c.add_terminal(x)));
            }
            body.push_back(Symbol::n(half));
            c.add_production(c.start(), body);
        }
        for (const auto& v : tails) {
            std::vector<Symbol> body;
            for (const auto& x : v) {
                body.push_back(Symbol::t(c.add_terminal(x)));
            }
            c.add_production(half, body);
        }
        for (const auto& u : heads) {
            for (const auto& v : tails) {
                AtomWord w = u;
                w.insert(w.end(), v.begin(), v.end());
                want_l.insert(tl.apply(w));
                want_r.insert(tr.apply(w));
            }
        }
        REQUIRE(cfg_words(apply_to_cfg(tl, c)) == want_l);
        REQUIRE(cfg_words(apply_to_cfg(tr, c)) == want_r);
    }
}

TEST_CASE("grammar image rejects epsilon-input output edges") {
    Transducer t({parse_atom("a?")});
    StateId p = t.add_state("p");
    StateId q = t.add_state("q");
    t.set_initial(p);
    t.set_final(q);
    t.add_edge(p, epsilon, 0, q);
    AtomCfg c;
    c.set_start(c.add_nonterminal("S"));
    c.add_production(0, {});
    CHECK_THROWS_AS(apply_to_cfg(t, c), PreconditionError);
    CHECK_THROWS_AS(t.add_edge(p, 3, 0, q), PreconditionError);
}

TEST_CASE("non-functional transducer is reported") {
    Transducer t({parse_atom("a?"), parse_atom("b?")});
    StateId p = t.add_state("p");
    StateId q = t.add_state("q");
    t.set_initial(p);
    t.set_final(q);
    t.add_edge(p, 0, 0, q);
    t.add_edge(p, 0, 1, q);
    CHECK_THROWS_AS(t.apply({parse_atom("a?")}), InternalError);
    CHECK_THROWS_AS(t.apply({parse_atom("b?")}), PreconditionError);
}
