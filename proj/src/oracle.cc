#include "downclose/oracle.hh"

#include <algorithm>
#include <functional>
#include <map>

namespace downclose::oracle {

bool is_subword(const Word& u, const Word& v) {
    std::size_t i = 0;
    for (std::size_t j = 0; j < v.size() && i < u.size(); ++j) {
        if (u[i] == v[j]) {
            ++i;
        }
    }
    return i == u.size();
}

bool ideal_member_dp(const Word& w, const IdealRep& r) {
    const std::size_t n = r.size();
    const std::size_t len = w.size();
    std::vector<std::vector<char>> reach(n + 1, std::vector<char>(len + 1, 0));
    reach[0][0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Atom& atom = r.atoms[i];
        for (std::size_t j = 0; j <= len; ++j) {
            if (reach[i][j]) {
                reach[i + 1][j] = 1;
            }
        }
        if (atom.is_single()) {
            for (std::size_t j = 0; j < len; ++j) {
                if (reach[i][j] && w[j] == atom.letter()) {
                    reach[i + 1][j + 1] = 1;
                }
            }
        } else {
            for (std::size_t j = 0; j < len; ++j) {
                if (reach[i + 1][j] && atom.contains_letter(w[j])) {
                    reach[i + 1][j + 1] = 1;
                }
            }
        }
    }
    return reach[n][len] != 0;
}

namespace {

using States = std::vector<char>;

/// Reflexive-transitive reachability over all transitions, by Warshall.
std::vector<std::vector<char>> reachability(const LetterNfa& a) {
    const std::size_t n = a.num_states();
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (std::size_t q = 0; q < n; ++q) {
        r[q][q] = 1;
    }
    for (const auto& t : a.transitions()) {
        r[t.from][t.to] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (r[i][k]) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (r[k][j]) {
                        r[i][j] = 1;
                    }
                }
            }
        }
    }
    return r;
}

} // namespace

WordSet dcl_words(const LetterNfa& a, std::size_t bound, std::size_t cap) {
    WordSet out;
    out.bound = bound;
    const std::size_t n = a.num_states();
    if (n == 0) {
        return out;
    }
    auto r = reachability(a);
    auto close = [&](const States& s) {
        States c(n, 0);
        for (std::size_t p = 0; p < n; ++p) {
            if (s[p]) {
                for (std::size_t q = 0; q < n; ++q) {
                    if (r[p][q]) {
                        c[q] = 1;
                    }
                }
            }
        }
        return c;
    };
    auto has_final = [&](const States& s) {
        for (std::size_t q = 0; q < n; ++q) {
            if (s[q] && a.is_final(StateId(q))) {
                return true;
            }
        }
        return false;
    };
    States init(n, 0);
    init[a.initial()] = 1;
    Word w;
    std::function<void(const States&)> dfs = [&](const States& s) {
        if (!has_final(s)) {
            return;
        }
        out.words.insert(w);
        if (out.words.size() > cap) {
            throw CapExceeded("downward closure enumeration exceeds the cap");
        }
        if (w.size() == bound) {
            return;
        }
        for (std::size_t x = 0; x < a.alphabet().size(); ++x) {
            States next(n, 0);
            for (const auto& t : a.transitions()) {
                if (t.label == x && s[t.from]) {
                    next[t.to] = 1;
                }
            }
            w.push_back(a.symbol(x));
            dfs(close(next));
            w.pop_back();
        }
    };
    dfs(close(init));
    return out;
}

bool includes(const IdealRep& r, const IdealRep& s) {
    Word w;
    for (const auto& atom : r.atoms) {
        if (atom.is_single()) {
            w.push_back(atom.letter());
        } else {
            for (std::size_t k = 0; k <= s.size() + 1; ++k) {
                for (const auto& x : atom.letters()) {
                    w.push_back(x);
                }
            }
        }
    }
    return ideal_member_dp(w, s);
}

namespace {

/// The star atom x absorbs y: y's letters are all in x.
bool swallows(const Atom& x, const Atom& y) {
    if (!x.is_star()) {
        return false;
    }
    for (const auto& l : y.letters()) {
        if (!x.contains_letter(l)) {
            return false;
        }
    }
    return true;
}

} // namespace

IdealRep naive_reduce(const IdealRep& r) {
    std::vector<Atom> atoms = r.atoms;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
            if (swallows(atoms[i], atoms[i + 1])) {
                atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                changed = true;
                break;
            }
            if (swallows(atoms[i + 1], atoms[i])) {
                atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return IdealRep(std::move(atoms), r.ambient);
}

std::set<IdealRep> decompose_bruteforce(const LetterNfa& a, std::size_t cap) {
    const std::size_t n = a.num_states();
    if (n == 0) {
        return {};
    }
    Alphabet ambient(a.alphabet());
    auto r = reachability(a);
    std::vector<char> useful(n, 0);
    for (std::size_t q = 0; q < n; ++q) {
        if (!r[a.initial()][q]) {
            continue;
        }
        for (std::size_t f = 0; f < n; ++f) {
            if (r[q][f] && a.is_final(StateId(f))) {
                useful[q] = 1;
            }
        }
    }
    if (!useful[a.initial()]) {
        return {};
    }
    // Component of q: the smallest state strongly connected to it.
    std::vector<std::size_t> comp(n);
    for (std::size_t q = 0; q < n; ++q) {
        comp[q] = q;
        for (std::size_t p = 0; p < q; ++p) {
            if (r[p][q] && r[q][p]) {
                comp[q] = p;
                break;
            }
        }
    }
    std::map<std::size_t, std::vector<Letter>> loop_letters;
    std::map<std::size_t, bool> accepting;
    for (std::size_t q = 0; q < n; ++q) {
        if (useful[q] && a.is_final(StateId(q))) {
            accepting[comp[q]] = true;
        }
    }
    for (const auto& t : a.transitions()) {
        if (!t.is_epsilon() && comp[t.from] == comp[t.to] && useful[t.from]) {
            loop_letters[comp[t.from]].push_back(a.symbol(t.label));
        }
    }

    std::vector<IdealRep> found;
    std::vector<Atom> path;
    std::function<void(std::size_t)> walk = [&](std::size_t c) {
        std::size_t mark = path.size();
        if (loop_letters.count(c)) {
            path.push_back(Atom::star(Alphabet(loop_letters[c])));
        }
        if (accepting.count(c)) {
            found.push_back(naive_reduce(IdealRep(path, ambient)));
            if (found.size() > cap) {
                throw CapExceeded("ideal path enumeration exceeds the cap");
            }
        }
        for (const auto& t : a.transitions()) {
            if (comp[t.from] != c || comp[t.to] == c || !useful[t.to]) {
                continue;
            }
            std::size_t inner = path.size();
            if (!t.is_epsilon()) {
                path.push_back(Atom::single(a.symbol(t.label)));
            }
            walk(comp[t.to]);
            path.resize(inner, Atom::single(Letter{"x"}));
        }
        path.resize(mark, Atom::single(Letter{"x"}));
    };
    walk(comp[a.initial()]);

    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::set<IdealRep> out;
    for (std::size_t i = 0; i < found.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < found.size() && keep; ++j) {
            if (i == j || !includes(found[i], found[j])) {
                continue;
            }
            // Strictly smaller, or equivalent to an earlier one.
            if (!includes(found[j], found[i]) || j < i) {
                keep = false;
            }
        }
        if (keep) {
            out.insert(found[i]);
        }
    }
    return out;
}

bool directed_bruteforce(const LetterNfa& a, std::size_t cap) { return decompose_bruteforce(a, cap).size() <= 1; }

bool cyk(const LetterCfg& g, const Word& w, bool downward) {
    const std::size_t n = w.size();
    const std::size_t N = g.num_nonterminals();
    if (N == 0) {
        return false;
    }
    // d[A][i][j]: A derives w[i..j) (or a superword of it when downward).
    std::vector<std::vector<std::vector<char>>> d(N, std::vector<std::vector<char>>(n + 1, std::vector<char>(n + 1, 0)));
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            for (std::size_t i = 0; i <= n; ++i) {
                std::vector<char> cur(n + 1, 0);
                cur[i] = 1;
                for (const auto& s : p.body) {
                    std::vector<char> next(n + 1, 0);
                    for (std::size_t c = i; c <= n; ++c) {
                        if (!cur[c]) {
                            continue;
                        }
                        if (s.terminal) {
                            if (c < n && w[c] == g.terminal(s.id)) {
                                next[c + 1] = 1;
                            }
                            if (downward) {
                                next[c] = 1;
                            }
                        } else {
                            for (std::size_t j = c; j <= n; ++j) {
                                if (d[s.id][c][j]) {
                                    next[j] = 1;
                                }
                            }
                        }
                    }
                    cur = std::move(next);
                }
                for (std::size_t j = i; j <= n; ++j) {
                    if (cur[j] && !d[p.head][i][j]) {
                        d[p.head][i][j] = 1;
                        changed = true;
                    }
                }
            }
        }
    }
    return d[g.start()][0][n] != 0;
}

std::set<Word> cfg_words(const LetterCfg& g, std::size_t bound, bool downward) {
    std::set<Word> out;
    std::vector<Letter> sigma(g.terminals().begin(), g.terminals().end());
    std::sort(sigma.begin(), sigma.end());
    Word w;
    std::function<void()> rec = [&] {
        if (cyk(g, w, downward)) {
            out.insert(w);
        }
        if (w.size() == bound) {
            return;
        }
        for (const auto& x : sigma) {
            w.push_back(x);
            rec();
            w.pop_back();
        }
    };
    rec();
    return out;
}

} // namespace downclose::oracle
