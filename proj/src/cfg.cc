#include "downclose/cfg.hh"

#include <algorithm>
#include <functional>

#include "downclose/graph.hh"
#include "downclose/transducer.hh"

namespace downclose {

namespace {

/// Copy of g keeping the flagged nonterminals (start always kept) and the
/// productions whose symbols all survive.
template <class T>
Cfg<T> restrict_nonterminals(const Cfg<T>& g, std::vector<bool> keep) {
    // a start symbol kept only to stay well formed contributes no productions
    const bool start_forced = !keep[g.start()];
    keep[g.start()] = true;
    Cfg<T> out;
    for (const auto& x : g.terminals()) {
        out.add_terminal(x);
    }
    std::vector<std::size_t> map(g.num_nonterminals(), 0);
    for (std::size_t a = 0; a < g.num_nonterminals(); ++a) {
        if (keep[a]) {
            map[a] = out.add_nonterminal(g.name(a));
        }
    }
    out.set_start(map[g.start()]);
    for (const auto& p : g.productions()) {
        if (!keep[p.head] || (start_forced && p.head == g.start())) {
            continue;
        }
        std::vector<Symbol> body;
        bool ok = true;
        for (const auto& s : p.body) {
            if (!s.terminal && (!keep[s.id] || (start_forced && s.id == g.start()))) {
                ok = false;
                break;
            }
            body.push_back(s.terminal ? s : Symbol::n(map[s.id]));
        }
        if (ok) {
            out.add_production(map[p.head], std::move(body));
        }
    }
    return out;
}

template <class T>
std::vector<std::vector<std::size_t>> dependency_graph(const Cfg<T>& g) {
    std::vector<std::vector<std::size_t>> adj(g.num_nonterminals());
    for (const auto& p : g.productions()) {
        for (const auto& s : p.body) {
            if (!s.terminal) {
                adj[p.head].push_back(s.id);
            }
        }
    }
    for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return adj;
}

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

template <class T, class ParseSym>
Cfg<T> parse_generic(std::string_view text, ParseSym parse_sym) {
    struct Line {
        std::size_t no;
        std::vector<std::string_view> toks;
    };
    std::optional<std::vector<std::string_view>> terminals, start;
    std::vector<Line> rules;
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        auto toks = split_ws(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++lineno;
        if (toks.empty()) {
            continue;
        }
        if (toks[0] == "terminals:" || toks[0] == "start:") {
            auto& slot = toks[0] == "start:" ? start : terminals;
            if (slot) {
                throw ParseError("duplicate section '" + std::string(toks[0]) + "'", lineno);
            }
            slot.emplace(toks.begin() + 1, toks.end());
            continue;
        }
        if (toks.size() < 2 || toks[1] != "->") {
            throw ParseError("expected 'HEAD -> BODY | ...'", lineno);
        }
        rules.push_back({lineno, std::move(toks)});
    }
    if (!terminals || !start) {
        throw ParseError("missing section terminals: or start:");
    }
    if (start->size() != 1) {
        throw ParseError("exactly one start symbol required");
    }
    Cfg<T> g;
    std::set<std::string, std::less<>> terminal_tokens;
    for (auto tok : *terminals) {
        g.add_terminal(parse_sym(tok, 0));
        terminal_tokens.emplace(tok);
    }
    auto declare = [&](std::string_view name, std::size_t line) {
        if (auto id = g.find_nonterminal(name)) {
            return *id;
        }
        std::string s(name);
        if (terminal_tokens.count(s) || !g.is_free_name(s)) {
            throw ParseError("'" + s + "' cannot be used as a nonterminal", line);
        }
        return g.add_nonterminal(s);
    };
    for (const auto& r : rules) {
        declare(r.toks[0], r.no);
    }
    if (!g.find_nonterminal(start->front())) {
        declare(start->front(), 0);
    }
    g.set_start(*g.find_nonterminal(start->front()));
    for (const auto& r : rules) {
        std::size_t head = *g.find_nonterminal(r.toks[0]);
        std::vector<std::vector<std::string_view>> alts(1);
        for (std::size_t i = 2; i < r.toks.size(); ++i) {
            if (r.toks[i] == "|") {
                alts.emplace_back();
            } else {
                alts.back().push_back(r.toks[i]);
            }
        }
        for (const auto& alt : alts) {
            if (alt.empty()) {
                throw ParseError("empty alternative (write eps)", r.no);
            }
            std::vector<Symbol> body;
            if (alt.size() == 1 && alt[0] == "eps") {
                g.add_production(head, {});
                continue;
            }
            for (auto tok : alt) {
                if (tok == "eps") {
                    throw ParseError("eps must stand alone", r.no);
                }
                if (terminal_tokens.count(tok)) {
                    body.push_back(Symbol::t(*g.find_terminal(parse_sym(tok, r.no))));
                } else if (auto id = g.find_nonterminal(tok)) {
                    body.push_back(Symbol::n(*id));
                } else {
                    throw ParseError("undefined symbol '" + std::string(tok) + "'", r.no);
                }
            }
            g.add_production(head, std::move(body));
        }
    }
    return g;
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
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
}

} // namespace

template <class T>
std::vector<bool> productive(const Cfg<T>& g) {
    const auto& ps = g.productions();
    std::vector<bool> prod(g.num_nonterminals(), false);
    std::vector<std::size_t> missing(ps.size(), 0);
    std::vector<std::vector<std::size_t>> users(g.num_nonterminals());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (const auto& s : ps[i].body) {
            if (!s.terminal) {
                ++missing[i];
                users[s.id].push_back(i);
            }
        }
        if (missing[i] == 0 && !prod[ps[i].head]) {
            prod[ps[i].head] = true;
            todo.push_back(ps[i].head);
        }
    }
    while (!todo.empty()) {
        auto a = todo.back();
        todo.pop_back();
        for (auto i : users[a]) {
            if (--missing[i] == 0 && !prod[ps[i].head]) {
                prod[ps[i].head] = true;
                todo.push_back(ps[i].head);
            }
        }
    }
    return prod;
}

template <class T>
std::vector<bool> reachable(const Cfg<T>& g) {
    std::vector<bool> seen(g.num_nonterminals(), false);
    if (g.num_nonterminals() == 0) {
        return seen;
    }
    auto adj = dependency_graph(g);
    std::vector<std::size_t> stack{g.start()};
    seen[g.start()] = true;
    while (!stack.empty()) {
        auto a = stack.back();
        stack.pop_back();
        for (auto b : adj[a]) {
            if (!seen[b]) {
                seen[b] = true;
                stack.push_back(b);
            }
        }
    }
    return seen;
}

template <class T>
Cfg<T> prune(const Cfg<T>& g) {
    if (g.num_nonterminals() == 0) {
        return g;
    }
    auto g1 = restrict_nonterminals(g, productive(g));
    return restrict_nonterminals(g1, reachable(g1));
}

template <class T>
bool is_empty_language(const Cfg<T>& g) {
    return g.num_nonterminals() == 0 || !productive(g)[g.start()];
}

template <class T>
bool is_acyclic(const Cfg<T>& g) {
    auto adj = dependency_graph(g);
    auto sccs = strongly_connected(adj);
    std::vector<std::size_t> size(sccs.count, 0);
    for (auto c : sccs.comp) {
        ++size[c];
    }
    for (std::size_t a = 0; a < adj.size(); ++a) {
        if (size[sccs.comp[a]] > 1 || std::binary_search(adj[a].begin(), adj[a].end(), a)) {
            return false;
        }
    }
    return true;
}

template <class T>
std::vector<std::size_t> bottom_up_order(const Cfg<T>& g) {
    if (!is_acyclic(g)) {
        throw PreconditionError("grammar is not acyclic");
    }
    auto adj = dependency_graph(g);
    const std::size_t n = adj.size();
    std::vector<char> state(n, 0);
    std::vector<std::size_t> order;
    for (std::size_t root = 0; root < n; ++root) {
        if (state[root]) {
            continue;
        }
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        state[root] = 1;
        while (!stack.empty()) {
            auto [v, k] = stack.back();
            if (k < adj[v].size()) {
                ++stack.back().second;
                auto w = adj[v][k];
                if (!state[w]) {
                    state[w] = 1;
                    stack.emplace_back(w, 0);
                }
                continue;
            }
            order.push_back(v);
            stack.pop_back();
        }
    }
    return order;
}

template <class T>
Cfg<T> binarize(const Cfg<T>& g) {
    Cfg<T> out;
    for (const auto& x : g.terminals()) {
        out.add_terminal(x);
    }
    for (const auto& n : g.names()) {
        out.add_nonterminal(n);
    }
    if (g.num_nonterminals() == 0) {
        return out;
    }
    out.set_start(g.start());
    for (const auto& p : g.productions()) {
        if (p.body.size() <= 2) {
            out.add_production(p.head, p.body);
            continue;
        }
        std::size_t head = p.head;
        for (std::size_t i = 0; i + 2 < p.body.size(); ++i) {
            std::size_t rest = out.add_fresh(g.name(p.head) + "." + std::to_string(i + 1));
            out.add_production(head, {p.body[i], Symbol::n(rest)});
            head = rest;
        }
        out.add_production(head, {p.body[p.body.size() - 2], p.body.back()});
    }
    return out;
}

template <class T>
Cfg<T> to_cnf(const Cfg<T>& g0) {
    Cfg<T> g = prune(g0);
    if (is_empty_language(g)) {
        return restrict_nonterminals(g, std::vector<bool>(g.num_nonterminals(), false));
    }

    // fresh start symbol when the start occurs in a body
    bool start_in_body = false;
    for (const auto& p : g.productions()) {
        for (const auto& s : p.body) {
            start_in_body |= !s.terminal && s.id == g.start();
        }
    }
    Cfg<T> h;
    for (const auto& x : g.terminals()) {
        h.add_terminal(x);
    }
    for (const auto& n : g.names()) {
        h.add_nonterminal(n);
    }
    h.set_start(g.start());
    if (start_in_body) {
        std::size_t s0 = h.add_fresh(g.name(g.start()) + "0");
        h.add_production(s0, {Symbol::n(g.start())});
        h.set_start(s0);
    }

    // terminals inside long bodies get their own nonterminal
    std::map<std::size_t, std::size_t> term_nt;
    auto term = [&](std::size_t x) {
        auto it = term_nt.find(x);
        if (it != term_nt.end()) {
            return it->second;
        }
        std::size_t a = h.add_fresh("T_" + symbol_to_string(g.terminal(x)));
        h.add_production(a, {Symbol::t(x)});
        term_nt.emplace(x, a);
        return a;
    };
    for (const auto& p : g.productions()) {
        if (p.body.size() < 2) {
            h.add_production(p.head, p.body);
            continue;
        }
        std::vector<Symbol> body;
        for (const auto& s : p.body) {
            body.push_back(s.terminal ? Symbol::n(term(s.id)) : s);
        }
        h.add_production(p.head, std::move(body));
    }
    h = binarize(h);

    // epsilon removal
    const std::size_t n = h.num_nonterminals();
    std::vector<bool> nullable(n, false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : h.productions()) {
            if (nullable[p.head]) {
                continue;
            }
            bool all = std::all_of(p.body.begin(), p.body.end(),
                                   [&](const Symbol& s) { return !s.terminal && nullable[s.id]; });
            if (all) {
                nullable[p.head] = true;
                changed = true;
            }
        }
    }
    Cfg<T> e;
    for (const auto& x : h.terminals()) {
        e.add_terminal(x);
    }
    for (const auto& nm : h.names()) {
        e.add_nonterminal(nm);
    }
    e.set_start(h.start());
    for (const auto& p : h.productions()) {
        if (p.body.size() == 2) {
            e.add_production(p.head, p.body);
            for (int drop = 0; drop < 2; ++drop) {
                const auto& s = p.body[drop];
                if (!s.terminal && nullable[s.id]) {
                    e.add_production(p.head, {p.body[1 - drop]});
                }
            }
        } else if (p.body.size() == 1) {
            e.add_production(p.head, p.body);
        }
    }

    // unit removal
    auto by_head = e.by_head();
    Cfg<T> u;
    for (const auto& x : e.terminals()) {
        u.add_terminal(x);
    }
    for (const auto& nm : e.names()) {
        u.add_nonterminal(nm);
    }
    u.set_start(e.start());
    if (nullable[h.start()]) {
        u.add_production(e.start(), {});
    }
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> order{a};
        seen[a] = true;
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (auto pi : by_head[order[i]]) {
                const auto& body = e.productions()[pi].body;
                if (body.size() == 1 && !body[0].terminal && !seen[body[0].id]) {
                    seen[body[0].id] = true;
                    order.push_back(body[0].id);
                }
            }
        }
        for (auto b : order) {
            for (auto pi : by_head[b]) {
                const auto& body = e.productions()[pi].body;
                if (!(body.size() == 1 && !body[0].terminal)) {
                    u.add_production(a, body);
                }
            }
        }
    }
    return prune(u);
}

template <class T>
bool is_cnf(const Cfg<T>& g) {
    for (const auto& p : g.productions()) {
        if (p.body.empty()) {
            if (p.head != g.start()) {
                return false;
            }
        } else if (p.body.size() == 1) {
            if (!p.body[0].terminal) {
                return false;
            }
        } else if (p.body.size() == 2) {
            for (const auto& s : p.body) {
                if (s.terminal || s.id == g.start()) {
                    return false;
                }
            }
        } else {
            return false;
        }
    }
    return true;
}

template <class T>
std::string to_string(const Cfg<T>& g) {
    std::string s = "terminals:";
    for (const auto& x : g.terminals()) {
        s += ' ' + symbol_to_string(x);
    }
    s += "\nstart: " + (g.num_nonterminals() ? g.name(g.start()) : std::string()) + '\n';
    auto by_head = g.by_head();
    for (std::size_t a = 0; a < g.num_nonterminals(); ++a) {
        if (by_head[a].empty()) {
            continue;
        }
        s += g.name(a) + " ->";
        bool first = true;
        for (auto pi : by_head[a]) {
            if (!first) {
                s += " |";
            }
            first = false;
            const auto& body = g.productions()[pi].body;
            if (body.empty()) {
                s += " eps";
            }
            for (const auto& sym : body) {
                s += ' ' + g.symbol_string(sym);
            }
        }
        s += '\n';
    }
    return s;
}

#define DOWNCLOSE_INSTANTIATE(T)                                                                   \
    template std::vector<bool> productive(const Cfg<T>&);                                          \
    template std::vector<bool> reachable(const Cfg<T>&);                                           \
    template Cfg<T> prune(const Cfg<T>&);                                                          \
    template bool is_empty_language(const Cfg<T>&);                                                \
    template bool is_acyclic(const Cfg<T>&);                                                       \
    template std::vector<std::size_t> bottom_up_order(const Cfg<T>&);                              \
    template Cfg<T> binarize(const Cfg<T>&);                                                       \
    template Cfg<T> to_cnf(const Cfg<T>&);                                                         \
    template bool is_cnf(const Cfg<T>&);                                                           \
    template std::string to_string(const Cfg<T>&);

DOWNCLOSE_INSTANTIATE(Letter)
DOWNCLOSE_INSTANTIATE(Atom)

#undef DOWNCLOSE_INSTANTIATE

LetterCfg parse_cfg(std::string_view text) { return parse_generic<Letter>(text, parse_letter_symbol); }

AtomCfg parse_atom_cfg(std::string_view text) { return parse_generic<Atom>(text, parse_atom_symbol); }

// ---- ideal grammars -----------------------------------------------------------

SelfProductionClasses self_production_classes(const LetterCfg& g) {
    const std::size_t n = g.num_nonterminals();
    SelfProductionClasses c;
    c.kind.assign(n, SelfProduction::none);
    c.rep.resize(n);
    c.alph.assign(n, Alphabet());
    c.left.assign(n, Alphabet());
    c.right.assign(n, Alphabet());

    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& p : g.productions()) {
            Alphabet acc = c.alph[p.head];
            for (const auto& s : p.body) {
                acc = acc.united(s.terminal ? Alphabet({g.terminal(s.id)}) : c.alph[s.id]);
            }
            if (acc != c.alph[p.head]) {
                c.alph[p.head] = std::move(acc);
                changed = true;
            }
        }
    }

    auto adj = dependency_graph(g);
    auto sccs = strongly_connected(adj);
    std::vector<std::size_t> size(sccs.count, 0), smallest(sccs.count, n);
    std::vector<bool> cyclic(sccs.count, false), twice(sccs.count, false);
    for (std::size_t a = 0; a < n; ++a) {
        auto k = sccs.comp[a];
        ++size[k];
        smallest[k] = std::min(smallest[k], a);
        if (std::binary_search(adj[a].begin(), adj[a].end(), a)) {
            cyclic[k] = true;
        }
    }
    auto same = [&](const Symbol& s, std::size_t k) { return !s.terminal && sccs.comp[s.id] == k; };
    for (const auto& p : g.productions()) {
        auto k = sccs.comp[p.head];
        if (p.body.size() >= 2 &&
            std::count_if(p.body.begin(), p.body.end(), [&](const Symbol& s) { return same(s, k); }) >= 2) {
            twice[k] = true;
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        auto k = sccs.comp[a];
        c.rep[a] = a;
        if (twice[k]) {
            c.kind[a] = SelfProduction::twice;
        } else if (size[k] > 1 || cyclic[k]) {
            c.kind[a] = SelfProduction::once;
            c.rep[a] = smallest[k];
        }
    }
    for (const auto& p : g.productions()) {
        std::size_t a = p.head;
        if (c.kind[a] != SelfProduction::once) {
            continue;
        }
        auto k = sccs.comp[a];
        auto r = c.rep[a];
        for (std::size_t i = 0; i < p.body.size(); ++i) {
            if (!same(p.body[i], k)) {
                continue;
            }
            for (std::size_t j = 0; j < p.body.size(); ++j) {
                if (j == i) {
                    continue;
                }
                const auto& s = p.body[j];
                Alphabet letters = s.terminal ? Alphabet({g.terminal(s.id)}) : c.alph[s.id];
                auto& side = j < i ? c.left[r] : c.right[r];
                side = side.united(letters);
            }
        }
    }
    return c;
}

AtomCfg ideal_grammar(const LetterCfg& g0) {
    if (!is_cnf(g0)) {
        throw PreconditionError("ideal_grammar requires a grammar in Chomsky normal form");
    }
    const LetterCfg g = prune(g0);
    AtomCfg out;
    if (is_empty_language(g)) {
        out.set_start(out.add_nonterminal(g.name(g.start())));
        return out;
    }
    const auto cls = self_production_classes(g);
    const std::size_t n = g.num_nonterminals();
    auto sccs = strongly_connected(dependency_graph(g));

    std::vector<std::size_t> bar(n, 0), inner(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        if (cls.rep[a] == a) {
            bar[a] = out.add_nonterminal(g.name(a));
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (cls.kind[a] == SelfProduction::once && cls.rep[a] == a) {
            inner[a] = out.add_fresh(g.name(a) + "^");
        }
    }
    auto bar_of = [&](std::size_t a) { return bar[cls.rep[a]]; };
    out.set_start(bar_of(g.start()));

    for (std::size_t a = 0; a < n; ++a) {
        if (cls.kind[a] == SelfProduction::twice) {
            out.add_production(bar[a], {Symbol::t(out.add_terminal(Atom::star(cls.alph[a])))});
        }
        if (cls.kind[a] == SelfProduction::once && cls.rep[a] == a) {
            std::vector<Symbol> body;
            if (!cls.left[a].empty()) {
                body.push_back(Symbol::t(out.add_terminal(Atom::star(cls.left[a]))));
            }
            body.push_back(Symbol::n(inner[a]));
            if (!cls.right[a].empty()) {
                body.push_back(Symbol::t(out.add_terminal(Atom::star(cls.right[a]))));
            }
            out.add_production(bar[a], std::move(body));
        }
    }
    for (const auto& p : g.productions()) {
        std::size_t a = p.head;
        std::size_t target = cls.kind[a] == SelfProduction::once ? inner[cls.rep[a]] : bar[a];
        if (p.body.size() == 1 && p.body[0].terminal) {
            out.add_production(target, {Symbol::t(out.add_terminal(Atom::single(g.terminal(p.body[0].id))))});
        } else if (p.body.size() == 2) {
            bool produces_head = false;
            for (const auto& s : p.body) {
                produces_head |= sccs.comp[s.id] == sccs.comp[a];
            }
            if (!produces_head) {
                out.add_production(target, {Symbol::n(bar_of(p.body[0].id)), Symbol::n(bar_of(p.body[1].id))});
            }
        }
    }
    for (std::size_t y = 0; y < out.num_nonterminals(); ++y) {
        out.add_production(y, {});
    }
    if (!is_acyclic(out)) {
        throw InternalError("ideal grammar is cyclic");
    }
    return out;
}

AtomCfg reduced_ideal_grammar(const LetterCfg& g) {
    AtomCfg idl = ideal_grammar(to_cnf(g));
    AtomCfg red;
    if (idl.terminals().empty()) {
        red = to_cnf(idl);
    } else {
        auto tl = build_TL(idl.terminals());
        auto tr = reverse(tl);
        red = to_cnf(apply_to_cfg(tl, apply_to_cfg(tr, idl)));
    }
    if (!is_acyclic(red)) {
        throw InternalError("reduced ideal grammar is cyclic");
    }
    return red;
}

BigInt derivation_bound(std::size_t nonterminals) { return BigInt(3) << (2 * nonterminals); }

WeightTable weight_table(const AtomCfg& g, const BigInt& m) {
    auto order = bottom_up_order(g);
    auto by_head = g.by_head();
    WeightTable table{m, std::vector<Weight>(g.num_nonterminals())};
    auto& t = table.entries;
    std::vector<Weight> tw;
    for (const auto& x : g.terminals()) {
        tw.emplace_back(weight(x, m));
    }
    for (std::size_t round = 0; round < std::max<std::size_t>(1, g.num_nonterminals()); ++round) {
        bool changed = false;
        for (auto a : order) {
            for (auto pi : by_head[a]) {
                Weight w = Weight::zero();
                for (const auto& s : g.productions()[pi].body) {
                    w = w + (s.terminal ? tw[s.id] : t[s.id]);
                }
                if (w > t[a]) {
                    t[a] = w;
                    changed = true;
                }
            }
        }
        if (!changed) {
            break;
        }
    }
    return table;
}

} // namespace downclose
