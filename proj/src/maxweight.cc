#include "downclose/maxweight.hh"

#include <algorithm>
#include <map>

namespace downclose {

MaxPlusMatrix MaxPlusMatrix::identity(std::size_t n) {
    MaxPlusMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Weight::zero();
    }
    return m;
}

MaxPlusMatrix operator*(const MaxPlusMatrix& a, const MaxPlusMatrix& b) {
    if (a.size() != b.size()) {
        throw PreconditionError("max-plus product of matrices of different sizes");
    }
    const std::size_t n = a.size();
    MaxPlusMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Weight& x = a(i, k);
            if (x.is_neg_inf()) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                const Weight& y = b(k, j);
                if (y.is_neg_inf()) {
                    continue;
                }
                Weight s = x + y;
                if (c(i, j) < s) {
                    c(i, j) = std::move(s);
                }
            }
        }
    }
    return c;
}

MaxPlusMatrix matpow(const MaxPlusMatrix& m, const BigInt& n) {
    if (n < 0) {
        throw PreconditionError("negative matrix power");
    }
    MaxPlusMatrix result = MaxPlusMatrix::identity(m.size());
    MaxPlusMatrix base = m;
    BigInt e = n;
    while (e > 0) {
        if ((e & 1) != 0) {
            result = result * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

namespace {

Weight edge_weight(const std::optional<Atom>& atom, const BigInt& m) {
    return atom ? Weight(weight(*atom, m)) : Weight::zero();
}

std::string serialized(const std::optional<Atom>& atom) {
    return atom ? to_string(*atom) : std::string("eps");
}

} // namespace

NormalizedIdealNfa normalize(const IdealNfa& in) {
    AtomNfa a = trim(in.nfa);
    if (is_empty_language(a)) {
        throw PreconditionError("ideal automaton accepts nothing");
    }
    auto finals = a.finals();
    bool reuse = finals.size() == 1;
    if (reuse) {
        for (const auto& t : a.transitions()) {
            if (t.from == finals[0]) {
                reuse = false;
                break;
            }
        }
    }
    if (!reuse) {
        std::string name = "final";
        auto taken = [&](const std::string& s) {
            return std::find(a.names().begin(), a.names().end(), s) != a.names().end();
        };
        while (taken(name)) {
            name += '\'';
        }
        StateId f = a.add_state(name);
        for (auto q : finals) {
            a.set_final(q, false);
            a.add_transition(q, epsilon, f);
        }
        a.set_final(f);
    }
    auto order = topological_order(a);
    if (!order) {
        throw PreconditionError("ideal automaton is not acyclic");
    }
    std::vector<std::size_t> index(a.num_states());
    NormalizedIdealNfa out;
    for (std::size_t i = 0; i < order->size(); ++i) {
        index[(*order)[i]] = i;
        out.names.push_back(a.name((*order)[i]));
    }
    if (index[a.initial()] != 0 || !a.is_final((*order).back())) {
        throw InternalError("normalized automaton has misplaced initial or final state");
    }
    out.m = BigInt(out.names.size());

    std::map<std::pair<std::size_t, std::size_t>, NormalizedIdealNfa::Edge> best;
    for (const auto& t : a.transitions()) {
        NormalizedIdealNfa::Edge e{index[t.from], index[t.to], std::nullopt, Weight::zero()};
        if (!t.is_epsilon()) {
            e.atom = a.symbol(t.label);
        }
        e.weight = edge_weight(e.atom, out.m);
        auto [it, fresh] = best.emplace(std::make_pair(e.from, e.to), e);
        if (fresh) {
            continue;
        }
        auto& kept = it->second;
        bool better = kept.weight < e.weight ||
                      (kept.weight == e.weight && serialized(e.atom) < serialized(kept.atom));
        if (better) {
            out.merged.push_back(kept);
            kept = e;
        } else {
            out.merged.push_back(e);
        }
    }
    for (auto& [key, e] : best) {
        out.edges.push_back(std::move(e));
    }
    return out;
}

MaxPlusMatrix matrix_of(const NormalizedIdealNfa& n, const BigInt& m) {
    if (m < BigInt(n.num_states())) {
        throw PreconditionError("weight parameter below the state count");
    }
    MaxPlusMatrix mat(n.num_states());
    for (const auto& e : n.edges) {
        mat(e.from, e.to) = edge_weight(e.atom, m);
    }
    mat(n.final_state(), n.final_state()) = Weight::zero();
    return mat;
}

std::vector<Weight> suffix_maxima_matpow(const NormalizedIdealNfa& n) {
    auto p = matpow(matrix_of(n, n.m), n.m);
    std::vector<Weight> out(n.num_states());
    for (std::size_t s = 0; s < n.num_states(); ++s) {
        out[s] = p(s, n.final_state());
    }
    return out;
}

std::vector<Weight> suffix_maxima_dag(const NormalizedIdealNfa& n) {
    std::vector<std::vector<const NormalizedIdealNfa::Edge*>> out_edges(n.num_states());
    for (const auto& e : n.edges) {
        out_edges[e.from].push_back(&e);
    }
    std::vector<Weight> best(n.num_states());
    best[n.final_state()] = Weight::zero();
    for (std::size_t s = n.num_states(); s-- > 0;) {
        for (const auto* e : out_edges[s]) {
            best[s] = max(best[s], e->weight + best[e->to]);
        }
    }
    return best;
}

std::vector<Weight> suffix_maxima(const NormalizedIdealNfa& n) {
    return n.num_states() <= matpow_state_limit ? suffix_maxima_matpow(n) : suffix_maxima_dag(n);
}

IdealRep extract_canonical_path(const NormalizedIdealNfa& n, const std::vector<Weight>& maxima,
                                const Alphabet& ambient) {
    if (maxima.size() != n.num_states() || maxima[n.initial()].is_neg_inf()) {
        throw PreconditionError("no accepted representation");
    }
    std::vector<std::vector<const NormalizedIdealNfa::Edge*>> out_edges(n.num_states());
    for (const auto& e : n.edges) {
        out_edges[e.from].push_back(&e);
    }
    std::vector<Atom> atoms;
    std::size_t s = n.initial();
    while (s != n.final_state()) {
        const NormalizedIdealNfa::Edge* pick = nullptr;
        for (const auto* e : out_edges[s]) {
            if (e->weight + maxima[e->to] == maxima[s] && (!pick || e->to < pick->to)) {
                pick = e;
            }
        }
        if (!pick) {
            throw InternalError("suffix maxima are inconsistent with the automaton");
        }
        if (pick->atom) {
            atoms.push_back(*pick->atom);
        }
        s = pick->to;
    }
    return IdealRep(std::move(atoms), ambient);
}

} // namespace downclose
