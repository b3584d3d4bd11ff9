#include "support.hh"

#include <fstream>
#include <functional>
#include <utility>
#include <sstream>

namespace downclose::testing {

std::string data_path(const std::string& name) { return std::string(DOWNCLOSE_TEST_DATA) + "/" + name; }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

LetterNfa load_nfa(const std::string& name) { return parse_nfa(read_text(data_path(name))); }
LetterCfg load_cfg(const std::string& name) { return parse_cfg(read_text(data_path(name))); }

std::vector<Letter> letters(std::size_t n) {
    std::vector<Letter> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(Letter{std::string(1, char('a' + i))});
    }
    return out;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

LetterNfa random_nfa(Rng& rng, std::size_t max_states, std::size_t max_letters, std::size_t max_transitions) {
    LetterNfa a;
    std::size_t n = uniform(rng, 1, max_states);
    auto sigma = letters(uniform(rng, 1, max_letters));
    for (std::size_t q = 0; q < n; ++q) {
        a.add_state("q" + std::to_string(q));
    }
    for (const auto& x : sigma) {
        a.add_symbol(x);
    }
    a.set_initial(0);
    for (std::size_t q = 0; q < n; ++q) {
        if (uniform(rng, 0, 2) == 0) {
            a.set_final(StateId(q));
        }
    }
    if (a.finals().empty()) {
        a.set_final(StateId(uniform(rng, 0, n - 1)));
    }
    std::size_t m = uniform(rng, 0, max_transitions);
    for (std::size_t i = 0; i < m; ++i) {
        StateId p = StateId(uniform(rng, 0, n - 1));
        StateId q = StateId(uniform(rng, 0, n - 1));
        // Mostly forward edges, so that several components and branches occur.
        if (q < p && uniform(rng, 0, 3) != 0) {
            std::swap(p, q);
        }
        std::size_t label = uniform(rng, 0, 6) == 0 ? epsilon : uniform(rng, 0, sigma.size() - 1);
        a.add_transition(p, label, q);
    }
    return a;
}

IdealRep random_reduced_rep(Rng& rng, std::size_t max_len, const std::vector<Letter>& sigma) {
    std::size_t len = uniform(rng, 0, max_len);
    std::vector<Atom> atoms;
    for (std::size_t tries = 0; atoms.size() < len && tries < 50 * (len + 1); ++tries) {
        Atom x = Atom::single(sigma[uniform(rng, 0, sigma.size() - 1)]);
        if (uniform(rng, 0, 1) == 0) {
            std::vector<Letter> d;
            for (const auto& l : sigma) {
                if (uniform(rng, 0, 1) == 0) {
                    d.push_back(l);
                }
            }
            if (d.empty()) {
                d.push_back(sigma[uniform(rng, 0, sigma.size() - 1)]);
            }
            x = Atom::star(Alphabet(d));
        }
        atoms.push_back(x);
        if (!is_reduced(atoms)) {
            atoms.pop_back();
        }
    }
    return IdealRep(std::move(atoms), Alphabet(sigma));
}

Word random_word(Rng& rng, std::size_t len, const std::vector<Letter>& sigma) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) {
        w.push_back(sigma[uniform(rng, 0, sigma.size() - 1)]);
    }
    return w;
}

LetterCfg finite_grammar(const std::vector<Word>& words, const std::vector<Letter>& sigma) {
    LetterCfg g;
    for (const auto& x : sigma) {
        g.add_terminal(x);
    }
    g.set_start(g.add_nonterminal("S"));
    for (const auto& w : words) {
        std::vector<Symbol> body;
        for (const auto& x : w) {
            body.push_back(Symbol::t(g.add_terminal(x)));
        }
        g.add_production(0, body);
    }
    return g;
}

LetterCfg random_cfg(Rng& rng, std::size_t max_nonterminals, const std::vector<Letter>& sigma) {
    LetterCfg g;
    for (const auto& x : sigma) {
        g.add_terminal(x);
    }
    std::size_t n = uniform(rng, 1, max_nonterminals);
    for (std::size_t i = 0; i < n; ++i) {
        g.add_nonterminal("N" + std::to_string(i));
    }
    g.set_start(0);
    std::size_t prods = uniform(rng, 1, 2 * n + 2);
    for (std::size_t i = 0; i < prods; ++i) {
        std::size_t head = uniform(rng, 0, n - 1);
        std::size_t len = uniform(rng, 0, 3);
        std::vector<Symbol> body;
        for (std::size_t k = 0; k < len; ++k) {
            if (uniform(rng, 0, 1) == 0) {
                body.push_back(Symbol::t(uniform(rng, 0, sigma.size() - 1)));
            } else {
                body.push_back(Symbol::n(uniform(rng, 0, n - 1)));
            }
        }
        g.add_production(head, body);
    }
    return g;
}

LetterSlp word_slp(const Word& w) {
    LetterCfg g;
    std::size_t counter = 0;
    // Builds a balanced binary SLP bottom-up; returns the symbol for w[lo, hi).
    std::function<Symbol(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) -> Symbol {
        if (hi - lo == 1) {
            return Symbol::t(g.add_terminal(w[lo]));
        }
        std::size_t mid = lo + (hi - lo) / 2;
        Symbol l = build(lo, mid);
        Symbol r = build(mid, hi);
        std::size_t x = g.add_fresh("X" + std::to_string(counter++));
        g.add_production(x, {l, r});
        return Symbol::n(x);
    };
    if (w.empty()) {
        g.set_start(g.add_nonterminal("S"));
        g.add_production(0, {});
        return LetterSlp::from_cfg(g);
    }
    Symbol top = build(0, w.size());
    std::size_t s = g.add_fresh("S");
    g.add_production(s, {top});
    g.set_start(s);
    return LetterSlp::from_cfg(g);
}

std::vector<Word> all_words(const std::vector<Letter>& sigma, std::size_t n) {
    std::vector<Word> out{Word{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Word> next;
        for (const auto& w : out) {
            for (const auto& x : sigma) {
                next.push_back(w);
                next.back().push_back(x);
            }
        }
        out = std::move(next);
    }
    return out;
}

} // namespace downclose::testing
