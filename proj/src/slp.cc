#include "downclose/slp.hh"

#include <algorithm>
#include <cstdint>

namespace downclose {

namespace {

template <class T>
std::string cycle_message(const Cfg<T>& g) {
    const std::size_t n = g.num_nonterminals();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& p : g.productions()) {
        for (const auto& s : p.body) {
            if (!s.terminal) {
                adj[p.head].push_back(s.id);
            }
        }
    }
    std::vector<char> color(n, 0);
    for (std::size_t root = 0; root < n; ++root) {
        if (color[root]) {
            continue;
        }
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto [v, k] = stack.back();
            if (k == adj[v].size()) {
                color[v] = 2;
                stack.pop_back();
                continue;
            }
            ++stack.back().second;
            auto w = adj[v][k];
            if (color[w] == 1) {
                std::string msg;
                bool on = false;
                for (const auto& [u, _] : stack) {
                    on |= u == w;
                    if (on) {
                        msg += g.name(u) + " -> ";
                    }
                }
                return msg + g.name(w);
            }
            if (color[w] == 0) {
                color[w] = 1;
                stack.emplace_back(w, 0);
            }
        }
    }
    return {};
}

constexpr std::uint64_t P1 = 2305843009213693951ULL; // 2^61 - 1
constexpr std::uint64_t P2 = 2305843009213693921ULL;
constexpr std::uint64_t B1 = 1000003;
constexpr std::uint64_t B2 = 911382323;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct Fingerprint {
    std::uint64_t h1 = 0, h2 = 0, p1 = 1, p2 = 1;

    void append(const Fingerprint& o) {
        h1 = (mulmod(h1, o.p1, P1) + o.h1) % P1;
        h2 = (mulmod(h2, o.p2, P2) + o.h2) % P2;
        p1 = mulmod(p1, o.p1, P1);
        p2 = mulmod(p2, o.p2, P2);
    }
    bool same_value(const Fingerprint& o) const { return h1 == o.h1 && h2 == o.h2; }
};

template <class T>
Fingerprint fingerprint(const Slp<T>& s) {
    std::vector<Fingerprint> fp(s.grammar().num_nonterminals());
    std::vector<Fingerprint> tf;
    for (const auto& x : s.grammar().terminals()) {
        auto code = fnv1a(symbol_to_string(x));
        tf.push_back({code % P1 + 1, code % P2 + 1, B1, B2});
    }
    for (auto a : s.order()) {
        Fingerprint f;
        for (const auto& sym : s.body(a)) {
            f.append(sym.terminal ? tf[sym.id] : fp[sym.id]);
        }
        fp[a] = f;
    }
    return fp[s.start()];
}

template <class T>
std::size_t add_copy_header(Cfg<T>& out, const Cfg<T>& g) {
    for (const auto& x : g.terminals()) {
        out.add_terminal(x);
    }
    for (const auto& n : g.names()) {
        out.add_nonterminal(n);
    }
    return g.num_nonterminals();
}

} // namespace

template <class T>
Slp<T> Slp<T>::from_cfg(Cfg<T> g) {
    const std::size_t n = g.num_nonterminals();
    if (n == 0) {
        throw ParseError("SLP has no nonterminals");
    }
    Slp<T> s;
    s.prod_.assign(n, g.productions().size());
    for (std::size_t i = 0; i < g.productions().size(); ++i) {
        auto h = g.productions()[i].head;
        if (s.prod_[h] != g.productions().size()) {
            throw ParseError("nonterminal " + g.name(h) + " has more than one production");
        }
        s.prod_[h] = i;
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (s.prod_[a] == g.productions().size()) {
            throw ParseError("nonterminal " + g.name(a) + " has no production");
        }
    }
    if (auto cyc = cycle_message(g); !cyc.empty()) {
        throw ParseError("SLP is cyclic: " + cyc);
    }
    s.order_ = bottom_up_order(g);
    s.len_.assign(n, BigInt(0));
    for (auto a : s.order_) {
        BigInt l = 0;
        for (const auto& sym : g.productions()[s.prod_[a]].body) {
            l += sym.terminal ? BigInt(1) : s.len_[sym.id];
        }
        s.len_[a] = l;
    }
    s.g_ = std::move(g);
    return s;
}

template <class T>
const T& char_at(const Slp<T>& s, const BigInt& i0) {
    if (i0 < 1 || i0 > s.length()) {
        throw PreconditionError("index " + i0.str() + " out of range 1.." + s.length().str());
    }
    BigInt i = i0;
    std::size_t a = s.start();
    for (;;) {
        for (const auto& sym : s.body(a)) {
            if (sym.terminal) {
                if (i == 1) {
                    return s.grammar().terminal(sym.id);
                }
                i -= 1;
            } else if (i <= s.length(sym.id)) {
                a = sym.id;
                break;
            } else {
                i -= s.length(sym.id);
            }
        }
    }
}

template <class T>
std::vector<T> expand(const Slp<T>& s, std::size_t cap) {
    if (s.length() > cap) {
        throw CapExceeded("SLP value longer than " + std::to_string(cap));
    }
    std::vector<T> out;
    SlpReader<T> r(s);
    while (const T* x = r.next()) {
        out.push_back(*x);
    }
    return out;
}

template <class T>
SlpReader<T>::SlpReader(const Slp<T>& s) : s_(&s), stack_{{s.start(), 0}} {}

template <class T>
const T* SlpReader<T>::next() {
    while (!stack_.empty()) {
        auto& [a, k] = stack_.back();
        const auto& body = s_->body(a);
        if (k == body.size()) {
            stack_.pop_back();
            continue;
        }
        const Symbol sym = body[k++];
        if (sym.terminal) {
            return &s_->grammar().terminal(sym.id);
        }
        stack_.emplace_back(sym.id, 0);
    }
    return nullptr;
}

template <class T>
Slp<T> drop_last(const Slp<T>& s) {
    if (s.length() == 0) {
        throw PreconditionError("cannot drop the last symbol of an empty value");
    }
    const auto& g = s.grammar();
    Cfg<T> out;
    const std::size_t n = add_copy_header(out, g);
    for (std::size_t a = 0; a < n; ++a) {
        out.add_production(a, s.body(a));
    }
    // walk the rightmost path, creating a truncated copy of each nonterminal on it
    std::size_t a = s.start();
    std::size_t head = out.add_fresh(g.name(a) + "-");
    out.set_start(head);
    for (;;) {
        const auto& body = s.body(a);
        std::size_t last = body.size();
        while (last > 0 && !body[last - 1].terminal && s.length(body[last - 1].id) == 0) {
            --last;
        }
        std::vector<Symbol> nb(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(last - 1));
        const Symbol sym = body[last - 1];
        if (sym.terminal) {
            out.add_production(head, std::move(nb));
            break;
        }
        std::size_t next = out.add_fresh(g.name(sym.id) + "-");
        nb.push_back(Symbol::n(next));
        out.add_production(head, std::move(nb));
        head = next;
        a = sym.id;
    }
    return Slp<T>::from_cfg(prune(out));
}

template <class T>
Slp<T> slp_from_word(const std::vector<T>& w, std::size_t chunk) {
    Cfg<T> g;
    for (const auto& x : w) {
        g.add_terminal(x);
    }
    std::size_t start = g.add_fresh("S");
    g.set_start(start);
    std::vector<Symbol> top;
    chunk = std::max<std::size_t>(chunk, 1);
    for (std::size_t i = 0; i < w.size(); i += chunk) {
        std::size_t c = g.add_fresh("C" + std::to_string(i / chunk + 1));
        std::vector<Symbol> body;
        for (std::size_t j = i; j < std::min(w.size(), i + chunk); ++j) {
            body.push_back(Symbol::t(*g.find_terminal(w[j])));
        }
        g.add_production(c, std::move(body));
        top.push_back(Symbol::n(c));
    }
    g.add_production(start, std::move(top));
    return Slp<T>::from_cfg(std::move(g));
}

template <class T>
SlpEquality slp_equal(const Slp<T>& x, const Slp<T>& y, std::size_t cap) {
    if (x.length() != y.length()) {
        return {false, false};
    }
    if (!fingerprint(x).same_value(fingerprint(y))) {
        return {false, false};
    }
    if (x.length() > cap) {
        return {true, true};
    }
    SlpReader<T> rx(x), ry(y);
    for (;;) {
        const T* a = rx.next();
        const T* b = ry.next();
        if (!a || !b) {
            return {a == b, false};
        }
        if (!(*a == *b)) {
            return {false, false};
        }
    }
}

#define DOWNCLOSE_INSTANTIATE(T)                                                                   \
    template class Slp<T>;                                                                         \
    template class SlpReader<T>;                                                                   \
    template const T& char_at(const Slp<T>&, const BigInt&);                                       \
    template std::vector<T> expand(const Slp<T>&, std::size_t);                                    \
    template Slp<T> drop_last(const Slp<T>&);                                                      \
    template Slp<T> slp_from_word(const std::vector<T>&, std::size_t);                             \
    template SlpEquality slp_equal(const Slp<T>&, const Slp<T>&, std::size_t);

DOWNCLOSE_INSTANTIATE(Letter)
DOWNCLOSE_INSTANTIATE(Atom)

#undef DOWNCLOSE_INSTANTIATE

AtomSlp complement_ideal(const LetterSlp& b, const Alphabet& sigma) {
    if (sigma.size() < 2) {
        throw PreconditionError("complement ideal needs at least two letters");
    }
    if (b.length() == 0) {
        throw PreconditionError("complement ideal needs a nonempty word");
    }
    const auto& g = b.grammar();
    AtomCfg out;
    for (const auto& n : g.names()) {
        out.add_nonterminal(n);
    }
    out.set_start(g.start());
    std::vector<std::pair<std::size_t, std::size_t>> pieces;
    for (const auto& x : g.terminals()) {
        if (!sigma.contains(x)) {
            throw PreconditionError("letter " + x.token + " is outside the alphabet");
        }
        pieces.emplace_back(out.add_terminal(Atom::star(sigma.without(x))), out.add_terminal(Atom::single(x)));
    }
    for (std::size_t a = 0; a < g.num_nonterminals(); ++a) {
        std::vector<Symbol> body;
        for (const auto& s : b.body(a)) {
            if (s.terminal) {
                body.push_back(Symbol::t(pieces[s.id].first));
                body.push_back(Symbol::t(pieces[s.id].second));
            } else {
                body.push_back(s);
            }
        }
        out.add_production(a, std::move(body));
    }
    return drop_last(AtomSlp::from_cfg(std::move(out)));
}

LetterCfg ideal_language_grammar(const AtomSlp& i) {
    const auto& g = i.grammar();
    Alphabet letters;
    for (const auto& x : g.terminals()) {
        letters = letters.united(x.letters());
    }
    LetterCfg out;
    for (const auto& x : letters) {
        out.add_terminal(x);
    }
    for (const auto& n : g.names()) {
        out.add_nonterminal(n);
    }
    out.set_start(g.start());
    std::vector<std::size_t> atom_nt;
    for (const auto& x : g.terminals()) {
        std::size_t y = out.add_fresh("I_" + to_string(x));
        out.add_production(y, {});
        for (const auto& l : x.letters()) {
            auto t = Symbol::t(*out.find_terminal(l));
            if (x.is_single()) {
                out.add_production(y, {t});
            } else {
                out.add_production(y, {Symbol::n(y), t});
            }
        }
        atom_nt.push_back(y);
    }
    for (std::size_t a = 0; a < g.num_nonterminals(); ++a) {
        std::vector<Symbol> body;
        for (const auto& s : i.body(a)) {
            body.push_back(s.terminal ? Symbol::n(atom_nt[s.id]) : s);
        }
        out.add_production(a, std::move(body));
    }
    return out;
}

AtomSlp extract_max_slp(const AtomCfg& g, const WeightTable& t) {
    if (g.num_nonterminals() == 0 || t[g.start()].is_neg_inf()) {
        throw PreconditionError("grammar generates the empty language");
    }
    std::vector<Weight> tw;
    for (const auto& x : g.terminals()) {
        tw.emplace_back(weight(x, t.m));
    }
    auto by_head = g.by_head();
    const std::size_t none = g.productions().size();
    std::vector<std::size_t> choice(g.num_nonterminals(), none);
    std::vector<std::size_t> todo{g.start()};
    std::vector<std::size_t> kept;
    std::vector<bool> seen(g.num_nonterminals(), false);
    seen[g.start()] = true;
    while (!todo.empty()) {
        auto a = todo.back();
        todo.pop_back();
        kept.push_back(a);
        for (auto pi : by_head[a]) {
            Weight w = Weight::zero();
            for (const auto& s : g.productions()[pi].body) {
                w = w + (s.terminal ? tw[s.id] : t[s.id]);
            }
            if (w == t[a]) {
                choice[a] = pi;
                break;
            }
        }
        if (choice[a] == none) {
            throw InternalError("no production attains the weight of " + g.name(a));
        }
        for (const auto& s : g.productions()[choice[a]].body) {
            if (!s.terminal && !seen[s.id]) {
                seen[s.id] = true;
                todo.push_back(s.id);
            }
        }
    }
    std::sort(kept.begin(), kept.end());
    AtomCfg out;
    std::vector<std::size_t> map(g.num_nonterminals(), 0);
    for (auto a : kept) {
        map[a] = out.add_nonterminal(g.name(a));
    }
    out.set_start(map[g.start()]);
    for (auto a : kept) {
        std::vector<Symbol> body;
        for (const auto& s : g.productions()[choice[a]].body) {
            body.push_back(s.terminal ? Symbol::t(out.add_terminal(g.terminal(s.id))) : Symbol::n(map[s.id]));
        }
        out.add_production(map[a], std::move(body));
    }
    return AtomSlp::from_cfg(std::move(out));
}

IdealRep rep_of(const AtomSlp& s, std::size_t cap) { return IdealRep(expand(s, cap)); }

AtomSlp slp_of(const IdealRep& rep) { return slp_from_word(rep.atoms); }

AtomSlp parse_slp(std::string_view text) { return AtomSlp::from_cfg(parse_atom_cfg(text)); }

LetterSlp parse_letter_slp(std::string_view text) { return LetterSlp::from_cfg(parse_cfg(text)); }

} // namespace downclose
