#include "downclose/nfa.hh"

#include "downclose/graph.hh"

#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace downclose {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

Letter parse_letter_symbol(std::string_view tok, std::size_t line) {
    if (!is_valid_letter_token(tok)) {
        throw ParseError("invalid letter '" + std::string(tok) + "'", line);
    }
    return Letter{std::string(tok)};
}

Atom parse_atom_symbol(std::string_view tok, std::size_t line) {
    try {
        return parse_atom(tok);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    } catch (const PreconditionError& e) {
        throw ParseError(e.what(), line);
    }
}

template <class Sym, class ParseSym>
Nfa<Sym> parse_generic(std::string_view text, ParseSym parse_sym) {
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> edges;
    std::optional<std::vector<std::string_view>> alphabet, states, initial, finals;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty()) {
            continue;
        }
        auto header = [&](std::string_view key, auto& slot) {
            if (toks[0] != key) {
                return false;
            }
            if (slot) {
                throw ParseError("duplicate section '" + std::string(key) + "'", lineno);
            }
            slot.emplace(toks.begin() + 1, toks.end());
            return true;
        };
        if (header("alphabet:", alphabet) || header("states:", states) || header("initial:", initial) ||
            header("final:", finals)) {
            continue;
        }
        if (toks.size() != 3) {
            throw ParseError("expected 'state label state'", lineno);
        }
        edges.emplace_back(lineno, toks);
    }
    if (!alphabet || !states || !initial || !finals) {
        throw ParseError("missing one of the sections alphabet:, states:, initial:, final:");
    }
    Nfa<Sym> a;
    std::map<std::string, StateId, std::less<>> ids;
    for (auto s : *states) {
        if (s == "eps") {
            throw ParseError("'eps' is reserved");
        }
        if (!ids.emplace(std::string(s), 0).second) {
            throw ParseError("duplicate state '" + std::string(s) + "'");
        }
        ids[std::string(s)] = a.add_state(std::string(s));
    }
    auto state = [&](std::string_view s, std::size_t line) {
        auto it = ids.find(s);
        if (it == ids.end()) {
            throw ParseError("undeclared state '" + std::string(s) + "'", line);
        }
        return it->second;
    };
    for (auto x : *alphabet) {
        a.add_symbol(parse_sym(x, 0));
    }
    if (initial->size() != 1) {
        throw ParseError("exactly one initial state required");
    }
    a.set_initial(state(initial->front(), 0));
    for (auto f : *finals) {
        a.set_final(state(f, 0));
    }
    for (const auto& [line, toks] : edges) {
        StateId p = state(toks[0], line);
        StateId q = state(toks[2], line);
        if (toks[1] == "eps") {
            a.add_transition(p, epsilon, q);
            continue;
        }
        auto idx = a.symbol_index(parse_sym(toks[1], line));
        if (!idx) {
            throw ParseError("label '" + std::string(toks[1]) + "' not in alphabet", line);
        }
        a.add_transition(p, *idx, q);
    }
    return a;
}

} // namespace

LetterNfa parse_nfa(std::string_view text) { return parse_generic<Letter>(text, parse_letter_symbol); }

AtomNfa parse_atom_nfa(std::string_view text) { return parse_generic<Atom>(text, parse_atom_symbol); }

Alphabet alphabet_of(const LetterNfa& a) { return Alphabet(a.alphabet()); }

Alphabet letters_of(const AtomNfa& a) {
    Alphabet out;
    for (const auto& x : a.alphabet()) {
        out = out.united(x.letters());
    }
    return out;
}

Validated validate(const LetterNfa& a) {
    if (a.num_states() == 0) {
        throw PreconditionError("automaton has no states");
    }
    for (const auto& t : a.transitions()) {
        if (t.from >= a.num_states() || t.to >= a.num_states()) {
            throw PreconditionError("transition references an undeclared state");
        }
        if (t.label != epsilon && t.label >= a.alphabet().size()) {
            throw PreconditionError("transition label outside the alphabet");
        }
    }
    Validated out;
    auto reach = reachable_states(a);
    for (StateId q = 0; q < a.num_states(); ++q) {
        if (!reach[q]) {
            out.warnings.push_back("pruned unreachable state " + a.name(q));
        }
    }
    out.nfa = out.warnings.empty() ? a : restrict_states(a, reach);
    return out;
}

PartiallyOrderedNfa scc_collapse(const LetterNfa& a) {
    const std::size_t n = a.num_states();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& t : a.transitions()) {
        adj[t.from].push_back(t.to);
    }
    auto sccs = strongly_connected(adj);
    const auto& comp = sccs.comp;
    const std::size_t ncomp = sccs.count;

    // Topological order of components; ties broken by smallest member id.
    std::vector<StateId> rep(ncomp, std::numeric_limits<StateId>::max());
    for (StateId q = 0; q < n; ++q) {
        rep[comp[q]] = std::min(rep[comp[q]], q);
    }
    std::vector<std::set<std::size_t>> succ(ncomp);
    std::vector<std::size_t> indeg(ncomp, 0);
    for (const auto& t : a.transitions()) {
        std::size_t cp = comp[t.from], cq = comp[t.to];
        if (cp != cq && succ[cp].insert(cq).second) {
            ++indeg[cq];
        }
    }
    std::set<std::pair<StateId, std::size_t>> ready;
    for (std::size_t c = 0; c < ncomp; ++c) {
        if (indeg[c] == 0) {
            ready.emplace(rep[c], c);
        }
    }
    std::vector<StateId> pos(ncomp);
    PartiallyOrderedNfa r;
    while (!ready.empty()) {
        auto [m, c] = *ready.begin();
        ready.erase(ready.begin());
        pos[c] = r.nfa.add_state(a.name(m));
        for (auto d : succ[c]) {
            if (--indeg[d] == 0) {
                ready.emplace(rep[d], d);
            }
        }
    }
    for (const auto& x : a.alphabet()) {
        r.nfa.add_symbol(x);
    }
    for (const auto& t : a.transitions()) {
        StateId p = pos[comp[t.from]], q = pos[comp[t.to]];
        if (p == q) {
            if (!t.is_epsilon()) {
                r.nfa.add_transition(p, t.label, p);
            }
            continue;
        }
        r.nfa.add_transition(p, t.label, q);
        if (!t.is_epsilon()) {
            r.nfa.add_transition(p, epsilon, q);
        }
    }
    if (n > 0) {
        r.nfa.set_initial(pos[comp[a.initial()]]);
    }
    for (StateId q = 0; q < n; ++q) {
        if (a.is_final(q)) {
            r.nfa.set_final(pos[comp[q]]);
        }
    }
    return r;
}

IdealNfa ideal_automaton(const PartiallyOrderedNfa& r) {
    const auto& a = r.nfa;
    const std::size_t n = a.num_states();
    std::vector<std::vector<Letter>> loops(n);
    std::set<std::pair<StateId, StateId>> letter_edge;
    for (const auto& t : a.transitions()) {
        if (t.from == t.to) {
            if (!t.is_epsilon()) {
                loops[t.from].push_back(a.symbol(t.label));
            }
            continue;
        }
        if (t.from > t.to) {
            throw PreconditionError("automaton is not partially ordered");
        }
        if (!t.is_epsilon()) {
            letter_edge.emplace(t.from, t.to);
        }
    }
    IdealNfa out;
    auto& b = out.nfa;
    for (StateId q = 0; q < n; ++q) {
        b.add_state(a.name(q));
        b.add_state(a.name(q) + "^c");
    }
    for (StateId q = 0; q < n; ++q) {
        if (loops[q].empty()) {
            b.add_transition(2 * q, epsilon, 2 * q + 1);
        } else {
            b.add_transition(2 * q, Atom::star(Alphabet(loops[q])), 2 * q + 1);
        }
        b.set_final(2 * q + 1, a.is_final(q));
    }
    for (const auto& t : a.transitions()) {
        if (t.from == t.to) {
            continue;
        }
        if (!t.is_epsilon()) {
            b.add_transition(2 * t.from + 1, Atom::single(a.symbol(t.label)), 2 * t.to);
        } else if (!letter_edge.count({t.from, t.to})) {
            // an epsilon edge parallel to a letter edge is dominated by the letter atom
            b.add_transition(2 * t.from + 1, epsilon, 2 * t.to);
        }
    }
    if (n > 0) {
        b.set_initial(2 * a.initial());
    }
    out.order.resize(2 * n);
    for (StateId q = 0; q < 2 * n; ++q) {
        out.order[q] = q;
    }
    return out;
}

IdealNfa make_ideal_nfa(AtomNfa a) {
    auto order = topological_order(a);
    if (!order) {
        throw PreconditionError("ideal automaton is not acyclic");
    }
    return IdealNfa{std::move(a), std::move(*order)};
}

std::vector<IdealRep> enumerate_path_ideals(const IdealNfa& n, std::size_t cap, const Alphabet& ambient) {
    const auto& a = n.nfa;
    if (a.num_states() == 0) {
        return {};
    }
    auto out = a.out_edges();
    // Reduced suffix representations per state; reduce(x y) = reduce(x reduce(y)).
    std::vector<std::set<IdealRep>> suffixes(a.num_states());
    for (auto it = n.order.rbegin(); it != n.order.rend(); ++it) {
        StateId q = *it;
        auto& here = suffixes[q];
        if (a.is_final(q)) {
            here.insert(IdealRep({}, ambient));
        }
        for (auto i : out[q]) {
            const auto& t = a.transitions()[i];
            if (t.to == q) {
                throw PreconditionError("ideal automaton has a self-loop");
            }
            for (const auto& s : suffixes[t.to]) {
                if (t.is_epsilon()) {
                    here.insert(s);
                } else {
                    std::vector<Atom> atoms{a.symbol(t.label)};
                    atoms.insert(atoms.end(), s.atoms.begin(), s.atoms.end());
                    here.insert(reduce(IdealRep(std::move(atoms), ambient)));
                }
                if (here.size() > cap) {
                    throw CapExceeded("more than " + std::to_string(cap) + " path ideals");
                }
            }
        }
    }
    const auto& res = suffixes[a.initial()];
    return {res.begin(), res.end()};
}

LetterNfa pad_epsilon(const LetterNfa& a) {
    const Letter hash{"#"};
    if (a.symbol_index(hash)) {
        throw PreconditionError("'#' already in the alphabet");
    }
    LetterNfa b;
    for (StateId q = 0; q < a.num_states(); ++q) {
        b.add_state(a.name(q));
        b.set_final(q, a.is_final(q));
    }
    for (const auto& x : a.alphabet()) {
        b.add_symbol(x);
    }
    std::size_t h = b.add_symbol(hash);
    for (const auto& t : a.transitions()) {
        std::size_t label = t.is_epsilon() ? h : *b.symbol_index(a.symbol(t.label));
        b.add_transition(t.from, label, t.to);
    }
    for (StateId q = 0; q < a.num_states(); ++q) {
        b.add_transition(q, h, q);
    }
    if (a.num_states() > 0) {
        b.set_initial(a.initial());
    }
    return b;
}

LetterNfa determinize_preserving(const LetterNfa& a) {
    const auto& ts = a.transitions();
    for (const auto& t : ts) {
        if (t.is_epsilon()) {
            throw PreconditionError("determinize_preserving requires an epsilon-free automaton");
        }
    }
    std::string base = "b";
    auto clashes = [&](const std::string& prefix) {
        for (std::size_t j = 1; j <= ts.size(); ++j) {
            if (a.symbol_index(Letter{prefix + std::to_string(j)})) {
                return true;
            }
        }
        return false;
    };
    while (clashes(base)) {
        base = "_" + base;
    }
    LetterNfa d;
    const std::size_t n = ts.size();
    // state (p, j): j == 0 means no selector read, j in 1..n means b_j was just read
    std::map<std::pair<StateId, std::size_t>, StateId> ids;
    std::vector<std::pair<StateId, std::size_t>> todo;
    auto get = [&](StateId p, std::size_t j) {
        auto [it, fresh] = ids.emplace(std::make_pair(p, j), 0);
        if (fresh) {
            it->second = d.add_state(j == 0 ? a.name(p) : a.name(p) + "." + std::to_string(j));
            d.set_final(it->second, j == 0 && a.is_final(p));
            todo.emplace_back(p, j);
        }
        return it->second;
    };
    for (const auto& x : a.alphabet()) {
        d.add_symbol(x);
    }
    std::vector<std::size_t> sel(n);
    for (std::size_t j = 1; j <= n; ++j) {
        d.add_symbol(Letter{base + std::to_string(j)});
    }
    for (std::size_t j = 1; j <= n; ++j) {
        sel[j - 1] = *d.symbol_index(Letter{base + std::to_string(j)});
    }
    if (a.num_states() == 0) {
        return d;
    }
    d.set_initial(get(a.initial(), 0));
    while (!todo.empty()) {
        auto [p, j] = todo.back();
        todo.pop_back();
        StateId from = ids.at({p, j});
        for (std::size_t k = 1; k <= n; ++k) {
            StateId to = get(p, k);
            d.add_transition(from, sel[k - 1], to);
        }
        if (j > 0 && ts[j - 1].from == p) {
            StateId to = get(ts[j - 1].to, 0);
            d.add_transition(from, *d.symbol_index(a.symbol(ts[j - 1].label)), to);
        }
    }
    return d;
}

bool is_deterministic(const LetterNfa& a) {
    std::set<std::pair<StateId, std::size_t>> seen;
    for (const auto& t : a.transitions()) {
        if (t.is_epsilon() || !seen.emplace(t.from, t.label).second) {
            return false;
        }
    }
    return true;
}

bool accepts(const LetterNfa& a, const Word& w) {
    if (a.num_states() == 0) {
        return false;
    }
    auto out = a.out_edges();
    auto closure = [&](std::vector<bool> cur) {
        std::vector<StateId> stack;
        for (StateId q = 0; q < cur.size(); ++q) {
            if (cur[q]) {
                stack.push_back(q);
            }
        }
        while (!stack.empty()) {
            StateId q = stack.back();
            stack.pop_back();
            for (auto i : out[q]) {
                const auto& t = a.transitions()[i];
                if (t.is_epsilon() && !cur[t.to]) {
                    cur[t.to] = true;
                    stack.push_back(t.to);
                }
            }
        }
        return cur;
    };
    std::vector<bool> cur(a.num_states(), false);
    cur[a.initial()] = true;
    cur = closure(std::move(cur));
    for (const auto& x : w) {
        auto idx = a.symbol_index(x);
        if (!idx) {
            return false;
        }
        std::vector<bool> next(a.num_states(), false);
        for (const auto& t : a.transitions()) {
            if (t.label == *idx && cur[t.from]) {
                next[t.to] = true;
            }
        }
        cur = closure(std::move(next));
    }
    for (StateId q = 0; q < a.num_states(); ++q) {
        if (cur[q] && a.is_final(q)) {
            return true;
        }
    }
    return false;
}

} // namespace downclose
