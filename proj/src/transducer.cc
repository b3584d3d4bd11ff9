#include "downclose/transducer.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace downclose {

Transducer::Transducer(std::vector<Atom> alphabet) : alphabet_(std::move(alphabet)) {
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
}

StateId Transducer::add_state(std::string name) {
    names_.push_back(std::move(name));
    final_.push_back(false);
    return static_cast<StateId>(names_.size() - 1);
}

void Transducer::add_edge(StateId from, std::size_t in, std::size_t out, StateId to) {
    if (from >= num_states() || to >= num_states()) {
        throw PreconditionError("transducer edge references an undeclared state");
    }
    if ((in != epsilon && in >= alphabet_.size()) || (out != epsilon && out >= alphabet_.size())) {
        throw PreconditionError("transducer edge label outside the alphabet");
    }
    if (seen_.emplace(from, in, out, to).second) {
        edges_.push_back({from, in, out, to});
    }
}

std::optional<std::size_t> Transducer::index_of(const Atom& x) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), x);
    if (it != alphabet_.end() && *it == x) {
        return static_cast<std::size_t>(it - alphabet_.begin());
    }
    return std::nullopt;
}

std::set<std::vector<Atom>> Transducer::run(const std::vector<Atom>& w) const {
    std::vector<std::size_t> input;
    for (const auto& x : w) {
        auto i = index_of(x);
        if (!i) {
            return {};
        }
        input.push_back(*i);
    }
    const std::size_t max_out = w.size() + num_states();
    using Config = std::tuple<StateId, std::size_t, std::vector<std::size_t>>;
    std::set<Config> seen;
    std::deque<Config> todo;
    auto push = [&](Config c) {
        if (std::get<2>(c).size() <= max_out && seen.insert(c).second) {
            todo.push_back(std::move(c));
        }
    };
    push({initial_, 0, {}});
    std::set<std::vector<Atom>> outputs;
    while (!todo.empty()) {
        auto [q, pos, out] = todo.front();
        todo.pop_front();
        if (pos == input.size() && final_[q]) {
            std::vector<Atom> o;
            for (auto i : out) {
                o.push_back(alphabet_[i]);
            }
            outputs.insert(std::move(o));
        }
        for (const auto& e : edges_) {
            if (e.from != q) {
                continue;
            }
            std::size_t next = pos;
            if (e.in != epsilon) {
                if (pos == input.size() || input[pos] != e.in) {
                    continue;
                }
                ++next;
            }
            auto o = out;
            if (e.out != epsilon) {
                o.push_back(e.out);
            }
            push({e.to, next, std::move(o)});
        }
    }
    return outputs;
}

std::vector<Atom> Transducer::apply(const std::vector<Atom>& w) const {
    auto outs = run(w);
    if (outs.empty()) {
        throw PreconditionError("transducer has no output on the given input");
    }
    if (outs.size() > 1) {
        throw InternalError("transducer is not functional on the given input");
    }
    return *outs.begin();
}

Transducer build_TL(const std::vector<Atom>& gamma) {
    Transducer t(gamma);
    const auto& g = t.alphabet();
    if (g.empty()) {
        throw PreconditionError("transducer alphabet must be nonempty");
    }
    StateId t0 = t.add_state("t0");
    StateId t1 = t.add_state("t1");
    std::vector<StateId> phi(g.size(), t1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].is_star()) {
            phi[i] = t.add_state(to_string(g[i]));
        }
    }
    t.set_initial(t0);
    for (StateId q = 0; q < t.num_states(); ++q) {
        t.set_final(q);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        t.add_edge(t0, i, i, phi[i]);
        t.add_edge(t1, i, i, phi[i]);
    }
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (!g[s].is_star()) {
            continue;
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto ab = absorbs(g[s], g[i]);
            if (ab == Absorption::left_absorbs || ab == Absorption::both) {
                t.add_edge(phi[s], i, epsilon, phi[s]);
            } else {
                t.add_edge(phi[s], i, i, phi[i]);
            }
        }
    }
    return t;
}

Transducer reverse(const Transducer& t) {
    Transducer r(t.alphabet());
    for (StateId q = 0; q < t.num_states(); ++q) {
        r.add_state(t.name(q));
    }
    auto taken = [&](const std::string& name) {
        for (StateId q = 0; q < t.num_states(); ++q) {
            if (t.name(q) == name) {
                return true;
            }
        }
        return false;
    };
    std::string init = "init";
    while (taken(init)) {
        init += '\'';
    }
    StateId fresh = r.add_state(init);
    for (const auto& e : t.edges()) {
        r.add_edge(e.to, e.in, e.out, e.from);
    }
    for (StateId q = 0; q < t.num_states(); ++q) {
        if (t.is_final(q)) {
            r.add_edge(fresh, epsilon, epsilon, q);
        }
    }
    r.set_initial(fresh);
    r.set_final(t.initial());
    return r;
}

AtomNfa apply_to_nfa(const Transducer& t, const AtomNfa& n) {
    std::vector<std::size_t> to_t(n.alphabet().size());
    for (std::size_t i = 0; i < n.alphabet().size(); ++i) {
        auto idx = t.index_of(n.symbol(i));
        if (!idx) {
            throw PreconditionError("atom " + to_string(n.symbol(i)) + " is outside the transducer alphabet");
        }
        to_t[i] = *idx;
    }
    AtomNfa out;
    if (n.num_states() == 0) {
        return out;
    }
    for (const auto& x : t.alphabet()) {
        out.add_symbol(x);
    }
    std::map<std::pair<StateId, std::size_t>, std::vector<std::size_t>> tedges;
    for (std::size_t i = 0; i < t.edges().size(); ++i) {
        const auto& e = t.edges()[i];
        tedges[{e.from, e.in}].push_back(i);
    }
    auto nout = n.out_edges();
    std::map<std::pair<StateId, StateId>, StateId> ids;
    std::deque<std::pair<StateId, StateId>> todo;
    auto get = [&](StateId tq, StateId nq) {
        auto [it, fresh] = ids.emplace(std::make_pair(tq, nq), 0);
        if (fresh) {
            it->second = out.add_state("(" + t.name(tq) + "," + n.name(nq) + ")");
            out.set_final(it->second, t.is_final(tq) && n.is_final(nq));
            todo.emplace_back(tq, nq);
        }
        return it->second;
    };
    auto add = [&](StateId from, std::size_t tout, StateId to) {
        if (tout == epsilon) {
            out.add_transition(from, epsilon, to);
        } else {
            out.add_transition(from, t.alphabet()[tout], to);
        }
    };
    out.set_initial(get(t.initial(), n.initial()));
    while (!todo.empty()) {
        auto [tq, nq] = todo.front();
        todo.pop_front();
        StateId from = ids.at({tq, nq});
        if (auto it = tedges.find({tq, epsilon}); it != tedges.end()) {
            for (auto i : it->second) {
                const auto& e = t.edges()[i];
                StateId to = get(e.to, nq);
                add(from, e.out, to);
            }
        }
        for (auto ni : nout[nq]) {
            const auto& nt = n.transitions()[ni];
            if (nt.is_epsilon()) {
                StateId to = get(tq, nt.to);
                out.add_transition(from, epsilon, to);
                continue;
            }
            auto it = tedges.find({tq, to_t[nt.label]});
            if (it == tedges.end()) {
                continue;
            }
            for (auto i : it->second) {
                const auto& e = t.edges()[i];
                StateId to = get(e.to, nt.to);
                add(from, e.out, to);
            }
        }
    }
    return trim(out);
}

IdealNfa reduce_ideal_nfa(const IdealNfa& n) {
    if (n.nfa.alphabet().empty()) {
        return make_ideal_nfa(trim(n.nfa));
    }
    auto tl = build_TL(n.nfa.alphabet());
    auto tr = reverse(tl);
    return make_ideal_nfa(apply_to_nfa(tl, apply_to_nfa(tr, n.nfa)));
}

using Bits = std::vector<char>;

AtomCfg apply_to_cfg(const Transducer& t, const AtomCfg& g0) {
    for (const auto& e : t.edges()) {
        if (e.in == epsilon && e.out != epsilon) {
            throw PreconditionError("epsilon-input edges must have epsilon output");
        }
    }
    const AtomCfg g = binarize(g0);
    const std::size_t S = t.num_states();
    const std::size_t N = g.num_nonterminals();

    std::vector<std::size_t> tidx(g.terminals().size());
    for (std::size_t i = 0; i < g.terminals().size(); ++i) {
        auto idx = t.index_of(g.terminal(i));
        if (!idx) {
            throw PreconditionError("atom " + to_string(g.terminal(i)) + " is outside the transducer alphabet");
        }
        tidx[i] = *idx;
    }

    // eps[p][q]: q reachable from p by epsilon/epsilon edges
    std::vector<Bits> eps(S, Bits(S, 0));
    for (std::size_t p = 0; p < S; ++p) {
        eps[p][p] = 1;
        std::vector<std::size_t> stack{p};
        while (!stack.empty()) {
            auto q = stack.back();
            stack.pop_back();
            for (const auto& e : t.edges()) {
                if (e.from == q && e.in == epsilon && !eps[p][e.to]) {
                    eps[p][e.to] = 1;
                    stack.push_back(e.to);
                }
            }
        }
    }

    // trel[x][p][q]: outputs (alphabet index or epsilon) of reading terminal x from p to q
    std::vector<std::vector<std::map<std::size_t, std::set<std::size_t>>>> trel(
        g.terminals().size(), std::vector<std::map<std::size_t, std::set<std::size_t>>>(S));
    for (std::size_t x = 0; x < g.terminals().size(); ++x) {
        for (std::size_t p = 0; p < S; ++p) {
            for (const auto& e : t.edges()) {
                if (e.in != tidx[x] || !eps[p][e.from]) {
                    continue;
                }
                for (std::size_t q = 0; q < S; ++q) {
                    if (eps[e.to][q]) {
                        trel[x][p][q].insert(e.out);
                    }
                }
            }
        }
    }

    // derivable relation per nonterminal, as bit rows
    std::vector<std::vector<Bits>> rel(N, std::vector<Bits>(S, Bits(S, 0)));
    auto row = [&](const Symbol& s, std::size_t p) {
        Bits r(S, 0);
        if (s.terminal) {
            for (const auto& [q, outs] : trel[s.id][p]) {
                r[q] = 1;
            }
        } else {
            r = rel[s.id][p];
        }
        return r;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& pr : g.productions()) {
            auto& target = rel[pr.head];
            for (std::size_t p = 0; p < S; ++p) {
                Bits r(S, 0);
                if (pr.body.empty()) {
                    r = eps[p];
                } else if (pr.body.size() == 1) {
                    r = row(pr.body[0], p);
                } else {
                    Bits mid = row(pr.body[0], p);
                    for (std::size_t m = 0; m < S; ++m) {
                        if (!mid[m]) {
                            continue;
                        }
                        Bits tail = row(pr.body[1], m);
                        for (std::size_t q = 0; q < S; ++q) {
                            r[q] |= tail[q];
                        }
                    }
                }
                for (std::size_t q = 0; q < S; ++q) {
                    if (r[q] && !target[p][q]) {
                        target[p][q] = 1;
                        changed = true;
                    }
                }
            }
        }
    }

    AtomCfg out;
    for (const auto& x : t.alphabet()) {
        out.add_terminal(x);
    }
    const std::size_t start = out.add_fresh(g.name(g.start()) + "'");
    out.set_start(start);

    std::map<std::tuple<bool, std::size_t, std::size_t, std::size_t>, std::size_t> ids;
    std::deque<std::tuple<std::size_t, std::size_t, std::size_t>> todo;
    auto triple = [&](const Symbol& s, std::size_t p, std::size_t q) {
        auto key = std::make_tuple(s.terminal, s.id, p, q);
        auto it = ids.find(key);
        if (it != ids.end()) {
            return it->second;
        }
        std::string base = g.symbol_string(s) + "[" + t.name(static_cast<StateId>(p)) + "," +
                           t.name(static_cast<StateId>(q)) + "]";
        std::size_t id = out.add_fresh(base);
        ids.emplace(key, id);
        if (s.terminal) {
            for (auto y : trel[s.id][p].at(q)) {
                if (y == epsilon) {
                    out.add_production(id, {});
                } else {
                    out.add_production(id, {Symbol::t(y)});
                }
            }
        } else {
            todo.emplace_back(s.id, p, q);
        }
        return id;
    };

    for (std::size_t f = 0; f < S; ++f) {
        if (t.is_final(static_cast<StateId>(f)) && rel[g.start()][t.initial()][f]) {
            out.add_production(start, {Symbol::n(triple(Symbol::n(g.start()), t.initial(), f))});
        }
    }
    auto by_head = g.by_head();
    auto has = [&](const Symbol& s, std::size_t p, std::size_t q) {
        return s.terminal ? trel[s.id][p].count(q) > 0 : rel[s.id][p][q] != 0;
    };
    while (!todo.empty()) {
        auto [a, p, q] = todo.front();
        todo.pop_front();
        std::size_t head = ids.at({false, a, p, q});
        for (auto pi : by_head[a]) {
            const auto& body = g.productions()[pi].body;
            if (body.empty()) {
                if (eps[p][q]) {
                    out.add_production(head, {});
                }
            } else if (body.size() == 1) {
                if (has(body[0], p, q)) {
                    out.add_production(head, {Symbol::n(triple(body[0], p, q))});
                }
            } else {
                for (std::size_t m = 0; m < S; ++m) {
                    if (has(body[0], p, m) && has(body[1], m, q)) {
                        auto l = triple(body[0], p, m);
                        auto r = triple(body[1], m, q);
                        out.add_production(head, {Symbol::n(l), Symbol::n(r)});
                    }
                }
            }
        }
    }
    return out;
}

std::string to_string(const Transducer& t) {
    std::string s = "alphabet:";
    for (const auto& x : t.alphabet()) {
        s += ' ' + to_string(x);
    }
    s += "\nstates:";
    for (StateId q = 0; q < t.num_states(); ++q) {
        s += ' ' + t.name(q);
    }
    s += "\ninitial: " + (t.num_states() ? t.name(t.initial()) : std::string());
    s += "\nfinal:";
    for (StateId q = 0; q < t.num_states(); ++q) {
        if (t.is_final(q)) {
            s += ' ' + t.name(q);
        }
    }
    s += '\n';
    auto label = [&](std::size_t i) { return i == epsilon ? std::string("eps") : to_string(t.alphabet()[i]); };
    for (const auto& e : t.edges()) {
        s += t.name(e.from) + ' ' + label(e.in) + '/' + label(e.out) + ' ' + t.name(e.to) + '\n';
    }
    return s;
}

} // namespace downclose
