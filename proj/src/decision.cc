#include "downclose/decision.hh"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <unordered_set>

#include "downclose/transducer.hh"

namespace downclose {

// ---- NFA pipeline ---------------------------------------------------------------

namespace {

LetterNfa cleaned(const LetterNfa& a) { return trim(validate(a).nfa); }

} // namespace

IdealNfa reduced_ideal_nfa(const LetterNfa& a, const Caps& caps) {
    LetterNfa t = cleaned(a);
    if (is_empty_language(t)) {
        throw PreconditionError("automaton accepts nothing");
    }
    IdealNfa red = reduce_ideal_nfa(ideal_automaton(scc_collapse(t)));
    if (red.nfa.num_states() > caps.states) {
        throw CapExceeded("reduced ideal automaton has " + std::to_string(red.nfa.num_states()) +
                          " states, cap is " + std::to_string(caps.states));
    }
    return red;
}

NfaCandidate nfa_candidate(const LetterNfa& a, const Caps& caps) {
    NormalizedIdealNfa norm = normalize(reduced_ideal_nfa(a, caps));
    auto maxima = suffix_maxima(norm);
    NfaCandidate out;
    out.rep = extract_canonical_path(norm, maxima, alphabet_of(a));
    out.states = norm.num_states();
    out.weight = maxima[norm.initial()].value();
    return out;
}

IdealRep nfa_candidate_ideal(const LetterNfa& a, const Caps& caps) { return nfa_candidate(a, caps).rep; }

// ---- embedding automaton --------------------------------------------------------------

std::size_t EmbeddingDfa::step(std::size_t state, const Letter& x) const {
    const auto& ls = letters.letters();
    auto it = std::lower_bound(ls.begin(), ls.end(), x);
    if (state > size || it == ls.end() || *it != x) {
        return sink();
    }
    return delta[state][static_cast<std::size_t>(it - ls.begin())];
}

bool EmbeddingDfa::accepts(const Word& w) const {
    std::size_t s = 0;
    for (const auto& x : w) {
        s = step(s, x);
    }
    return s != sink();
}

EmbeddingDfa build_embedding_dfa(const IdealRep& v, const Alphabet& extra) {
    EmbeddingDfa d;
    d.letters = v.ambient.united(extra);
    for (const auto& atom : v.atoms) {
        d.letters = d.letters.united(atom.letters());
    }
    d.size = v.size();
    d.delta.assign(d.size + 2, std::vector<std::size_t>(d.letters.size(), d.sink()));
    for (std::size_t s = 0; s <= d.size; ++s) {
        for (std::size_t x = 0; x < d.letters.size(); ++x) {
            d.delta[s][x] = advance_cursor(v.atoms, s, d.letters.letters()[x]);
        }
    }
    return d;
}

Inclusion nfa_included_in_ideal(const LetterNfa& a, const IdealRep& v, bool want_witness) {
    LetterNfa t = cleaned(a);
    if (is_empty_language(t)) {
        return {true, std::nullopt};
    }
    // The collapse accepts the downward closure and is trimmed, so every word
    // reaching the sink in the product is a prefix of a word of the closure.
    LetterNfa c = trim(scc_collapse(t).nfa);
    EmbeddingDfa dfa = build_embedding_dfa(v, alphabet_of(c));
    std::vector<std::size_t> label_letter(c.alphabet().size());
    for (std::size_t i = 0; i < c.alphabet().size(); ++i) {
        const auto& ls = dfa.letters.letters();
        label_letter[i] = static_cast<std::size_t>(std::lower_bound(ls.begin(), ls.end(), c.symbol(i)) - ls.begin());
    }
    const std::size_t width = dfa.size + 2;
    auto out = c.out_edges();

    struct Edge {
        std::size_t to;
        std::size_t label; // NFA label or epsilon
    };
    std::map<std::size_t, std::size_t> id;
    std::vector<std::size_t> key;
    std::vector<std::vector<Edge>> fwd;
    auto intern = [&](std::size_t k) {
        auto [it, fresh] = id.emplace(k, key.size());
        if (fresh) {
            key.push_back(k);
            fwd.emplace_back();
        }
        return it->second;
    };
    std::vector<std::size_t> bad;
    std::deque<std::size_t> queue{intern(std::size_t(c.initial()) * width)};
    std::vector<char> expanded;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        if (expanded.size() < key.size()) {
            expanded.resize(key.size(), 0);
        }
        if (expanded[u]) {
            continue;
        }
        expanded[u] = 1;
        std::size_t q = key[u] / width;
        std::size_t d = key[u] % width;
        if (d == dfa.sink()) {
            bad.push_back(u);
            if (!want_witness) {
                return {false, std::nullopt};
            }
            continue;
        }
        for (auto i : out[q]) {
            const auto& tr = c.transitions()[i];
            std::size_t nd = tr.is_epsilon() ? d : dfa.delta[d][label_letter[tr.label]];
            std::size_t w = intern(std::size_t(tr.to) * width + nd);
            fwd[u].push_back({w, tr.label});
            queue.push_back(w);
        }
    }
    if (bad.empty()) {
        return {true, std::nullopt};
    }

    // Letter distance to a sink state, epsilon edges free.
    const std::size_t n = key.size();
    std::vector<std::vector<Edge>> bwd(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& e : fwd[u]) {
            bwd[e.to].push_back({u, e.label});
        }
    }
    constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n, inf);
    std::deque<std::size_t> dq;
    for (auto u : bad) {
        dist[u] = 0;
        dq.push_back(u);
    }
    while (!dq.empty()) {
        std::size_t u = dq.front();
        dq.pop_front();
        for (const auto& e : bwd[u]) {
            std::size_t nd = dist[u] + (e.label == epsilon ? 0 : 1);
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                if (e.label == epsilon) {
                    dq.push_front(e.to);
                } else {
                    dq.push_back(e.to);
                }
            }
        }
    }

    auto closure = [&](std::vector<std::size_t> set) {
        std::vector<char> in(n, 0);
        for (auto u : set) {
            in[u] = 1;
        }
        for (std::size_t k = 0; k < set.size(); ++k) {
            for (const auto& e : fwd[set[k]]) {
                if (e.label == epsilon && !in[e.to]) {
                    in[e.to] = 1;
                    set.push_back(e.to);
                }
            }
        }
        return set;
    };
    auto best = [&](const std::vector<std::size_t>& set) {
        std::size_t m = inf;
        for (auto u : set) {
            m = std::min(m, dist[u]);
        }
        return m;
    };
    Word w;
    std::vector<std::size_t> cur = closure({0});
    std::size_t remaining = best(cur);
    while (remaining > 0) {
        bool moved = false;
        for (std::size_t x = 0; x < c.alphabet().size() && !moved; ++x) {
            std::vector<std::size_t> next;
            for (auto u : cur) {
                for (const auto& e : fwd[u]) {
                    if (e.label == x) {
                        next.push_back(e.to);
                    }
                }
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            next = closure(std::move(next));
            if (!next.empty() && best(next) == remaining - 1) {
                w.push_back(c.symbol(x));
                cur = std::move(next);
                --remaining;
                moved = true;
            }
        }
        if (!moved) {
            throw InternalError("witness reconstruction lost the shortest path");
        }
    }
    return {false, std::move(w)};
}

Verdict nfa_directed(const LetterNfa& a, const Caps& caps, bool want_witness) {
    Verdict v;
    if (is_empty_language(cleaned(a))) {
        v.directed = true;
        v.empty = true;
        return v;
    }
    v.candidate = nfa_candidate_ideal(a, caps);
    Inclusion inc = nfa_included_in_ideal(a, *v.candidate, want_witness);
    v.directed = inc.included;
    v.witness = std::move(inc.witness);
    return v;
}

// ---- CFG pipeline --------------------------------------------------------------------

AtomSlp cfg_candidate_ideal(const LetterCfg& g) {
    if (is_empty_language(g)) {
        throw PreconditionError("grammar generates the empty language");
    }
    AtomCfg red = reduced_ideal_grammar(g);
    WeightTable t = weight_table(red, derivation_bound(red.num_nonterminals()));
    return extract_max_slp(red, t);
}

namespace {

/// Cursor over an expanded value with a next-occurrence table.
class ExpandedCursor {
public:
    using Value = std::size_t;

    ExpandedCursor(const std::vector<Atom>& atoms, const std::vector<Letter>& letters)
        : n_(atoms.size()), single_(atoms.size() + 1, 0), next_(letters.size()) {
        for (std::size_t i = 0; i < n_; ++i) {
            single_[i + 1] = atoms[i].is_single();
        }
        for (std::size_t x = 0; x < letters.size(); ++x) {
            auto& row = next_[x];
            row.assign(n_ + 2, n_ + 1);
            for (std::size_t j = n_; j >= 1; --j) {
                row[j] = atoms[j - 1].contains_letter(letters[x]) ? j : row[j + 1];
            }
        }
    }

    Value start() const { return 0; }
    Value sink() const { return n_ + 1; }
    Value step(const Value& p, std::size_t x) const {
        if (p > n_) {
            return sink();
        }
        std::size_t from = (p == 0 || single_[p]) ? p + 1 : p;
        return from > n_ ? sink() : next_[x][from];
    }

private:
    std::size_t n_;
    std::vector<char> single_;
    std::vector<std::vector<std::size_t>> next_;
};

/// Cursor over an SLP value; atoms are located by descending the SLP.
class CompressedCursor {
public:
    using Value = BigInt;

    CompressedCursor(const AtomSlp& s, const std::vector<Letter>& letters) : s_(s), letters_(letters) {
        const auto& g = s.grammar();
        tcontains_.resize(g.terminals().size());
        for (std::size_t t = 0; t < g.terminals().size(); ++t) {
            for (std::size_t x = 0; x < letters.size(); ++x) {
                tcontains_[t].push_back(g.terminal(t).contains_letter(letters[x]));
            }
        }
        ncontains_.assign(g.num_nonterminals(), std::vector<char>(letters.size(), 0));
        for (auto a : s.order()) {
            for (const auto& sym : s.body(a)) {
                const auto& row = sym.terminal ? tcontains_[sym.id] : ncontains_[sym.id];
                for (std::size_t x = 0; x < letters.size(); ++x) {
                    ncontains_[a][x] |= row[x];
                }
            }
        }
        first_.assign(g.num_nonterminals(), std::vector<std::optional<BigInt>>(letters.size()));
        first_done_.assign(g.num_nonterminals(), std::vector<char>(letters.size(), 0));
    }

    Value start() const { return 0; }
    Value sink() const { return s_.length() + 1; }
    Value step(const Value& p, std::size_t x) {
        if (p > s_.length()) {
            return sink();
        }
        BigInt from = (p == 0 || char_at(s_, p).is_single()) ? BigInt(p + 1) : p;
        if (from > s_.length()) {
            return sink();
        }
        auto r = search(s_.start(), from, x);
        return r ? *r : sink();
    }

private:
    /// First 1-based position >= from inside val(a) whose atom contains letter x.
    std::optional<BigInt> search(std::size_t a, const BigInt& from, std::size_t x) {
        if (!ncontains_[a][x] || from > s_.length(a)) {
            return std::nullopt;
        }
        if (from <= 1) {
            return first(a, x);
        }
        BigInt offset = 0;
        for (const auto& sym : s_.body(a)) {
            BigInt len = sym.terminal ? BigInt(1) : s_.length(sym.id);
            if (offset + len >= from) {
                BigInt local = from - offset;
                std::optional<BigInt> r;
                if (sym.terminal) {
                    if (tcontains_[sym.id][x]) {
                        r = BigInt(1);
                    }
                } else {
                    r = local <= 1 ? first(sym.id, x) : search(sym.id, local, x);
                }
                if (r) {
                    return offset + *r;
                }
            }
            offset += len;
        }
        return std::nullopt;
    }

    std::optional<BigInt> first(std::size_t a, std::size_t x) {
        if (first_done_[a][x]) {
            return first_[a][x];
        }
        std::optional<BigInt> r;
        if (ncontains_[a][x]) {
            BigInt offset = 0;
            for (const auto& sym : s_.body(a)) {
                if (sym.terminal) {
                    if (tcontains_[sym.id][x]) {
                        r = offset + 1;
                        break;
                    }
                    offset += 1;
                } else {
                    if (ncontains_[sym.id][x]) {
                        r = offset + *first(sym.id, x);
                        break;
                    }
                    offset += s_.length(sym.id);
                }
            }
        }
        first_done_[a][x] = 1;
        first_[a][x] = r;
        return r;
    }

    const AtomSlp& s_;
    std::vector<Letter> letters_;
    std::vector<std::vector<char>> tcontains_;
    std::vector<std::vector<char>> ncontains_;
    std::vector<std::vector<std::optional<BigInt>>> first_;
    std::vector<std::vector<char>> first_done_;
};

/// Derivation record: a word of L(A) together with the cursor it reaches.
struct Record {
    enum class Kind { empty, letter, pair } kind;
    std::size_t a = 0; ///< letter id or left record
    std::size_t b = 0; ///< right record
    std::uint64_t length = 0;
};

template <class Cursor>
Inclusion max_cursor_search(const LetterCfg& cnf, Cursor& cursor, const std::vector<std::size_t>& letter_of_terminal,
                            const std::vector<Letter>& letters, std::size_t witness_cap, bool want_witness) {
    using Value = typename Cursor::Value;
    const auto heads = cnf.by_head();
    const Value sink = cursor.sink();

    struct Entry {
        std::size_t nt;
        Value p;
        std::optional<Value> value;
        std::size_t record = 0;
        std::vector<std::size_t> dependents;
        bool queued = false;
    };
    std::vector<Entry> entries;
    std::map<std::pair<std::size_t, Value>, std::size_t> index;
    std::vector<Record> records;
    std::unordered_set<std::uint64_t> dep_seen;
    std::deque<std::size_t> work;

    auto get = [&](std::size_t nt, const Value& p) {
        auto [it, fresh] = index.emplace(std::make_pair(nt, p), entries.size());
        if (fresh) {
            entries.push_back(Entry{nt, p, std::nullopt, 0, {}, true});
            work.push_back(it->second);
        }
        return it->second;
    };
    auto depend = [&](std::size_t on, std::size_t who) {
        std::uint64_t k = (std::uint64_t(on) << 32) | std::uint64_t(who);
        if (dep_seen.insert(k).second) {
            entries[on].dependents.push_back(who);
        }
    };
    auto sat_add = [](std::uint64_t x, std::uint64_t y) {
        return x > std::numeric_limits<std::uint64_t>::max() - y ? std::numeric_limits<std::uint64_t>::max() : x + y;
    };

    const std::size_t root = get(cnf.start(), cursor.start());
    while (!work.empty()) {
        std::size_t e = work.front();
        work.pop_front();
        entries[e].queued = false;
        if (entries[e].value && *entries[e].value == sink) {
            continue;
        }
        const std::size_t nt = entries[e].nt;
        const Value p = entries[e].p;
        std::optional<Value> best = entries[e].value;
        std::optional<Record> best_rec;
        for (auto pi : heads[nt]) {
            const auto& body = cnf.productions()[pi].body;
            std::optional<Value> cand;
            Record rec{};
            if (body.empty()) {
                cand = p;
                rec = {Record::Kind::empty, 0, 0, 0};
            } else if (body.size() == 1 && body[0].terminal) {
                std::size_t x = letter_of_terminal[body[0].id];
                cand = cursor.step(p, x);
                rec = {Record::Kind::letter, x, 0, 1};
            } else if (body.size() == 2 && !body[0].terminal && !body[1].terminal) {
                std::size_t eb = get(body[0].id, p);
                depend(eb, e);
                if (!entries[eb].value) {
                    continue;
                }
                std::size_t ec = get(body[1].id, *entries[eb].value);
                depend(ec, e);
                if (!entries[ec].value) {
                    continue;
                }
                cand = *entries[ec].value;
                rec = {Record::Kind::pair, entries[eb].record, entries[ec].record,
                       sat_add(records[entries[eb].record].length, records[entries[ec].record].length)};
            } else {
                throw InternalError("grammar is not in Chomsky normal form");
            }
            if (!best || *best < *cand) {
                best = cand;
                best_rec = rec;
            }
        }
        if (best_rec) {
            entries[e].value = best;
            entries[e].record = records.size();
            records.push_back(*best_rec);
            if (e == root && *best == sink) {
                break;
            }
            for (auto d : entries[e].dependents) {
                if (!entries[d].queued) {
                    entries[d].queued = true;
                    work.push_back(d);
                }
            }
        }
    }

    const auto& r = entries[root];
    if (!r.value || *r.value != sink) {
        return {true, std::nullopt};
    }
    if (!want_witness || records[r.record].length > witness_cap) {
        return {false, std::nullopt};
    }
    std::vector<std::size_t> ids;
    std::vector<std::size_t> stack{r.record};
    while (!stack.empty()) {
        const Record& rec = records[stack.back()];
        stack.pop_back();
        if (rec.kind == Record::Kind::letter) {
            ids.push_back(rec.a);
        } else if (rec.kind == Record::Kind::pair) {
            stack.push_back(rec.b);
            stack.push_back(rec.a);
        }
    }
    // Subwords of the derived word stay in the downward closure: cut after the
    // first sink step, then drop letters while the rest still leaves the ideal.
    auto sink_at = [&](const std::vector<std::size_t>& word) -> std::optional<std::size_t> {
        Value c = cursor.start();
        for (std::size_t k = 0; k < word.size(); ++k) {
            c = cursor.step(c, word[k]);
            if (c == sink) {
                return k;
            }
        }
        return std::nullopt;
    };
    auto cut = sink_at(ids);
    if (!cut) {
        throw InternalError("derived witness stays inside the ideal");
    }
    ids.resize(*cut + 1);
    if (ids.size() <= 512) {
        for (std::size_t k = 0; k < ids.size();) {
            auto shorter = ids;
            shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(k));
            if (sink_at(shorter)) {
                ids = std::move(shorter);
            } else {
                ++k;
            }
        }
    }
    Word w;
    for (auto x : ids) {
        w.push_back(letters[x]);
    }
    return {false, std::move(w)};
}

} // namespace

Inclusion cfg_included_in_ideal(const LetterCfg& g, const AtomSlp& i, const Caps& caps, InclusionRoute route,
                                bool want_witness) {
    if (is_empty_language(g)) {
        return {true, std::nullopt};
    }
    LetterCfg cnf = to_cnf(g);
    Alphabet universe(cnf.terminals());
    for (const auto& atom : i.grammar().terminals()) {
        universe = universe.united(atom.letters());
    }
    const auto& letters = universe.letters();
    std::vector<std::size_t> letter_of_terminal;
    for (const auto& x : cnf.terminals()) {
        letter_of_terminal.push_back(
            static_cast<std::size_t>(std::lower_bound(letters.begin(), letters.end(), x) - letters.begin()));
    }
    if (route == InclusionRoute::automatic) {
        route = i.length() <= caps.expand ? InclusionRoute::expanded : InclusionRoute::compressed;
    }
    if (route == InclusionRoute::expanded) {
        auto atoms = expand(i, std::max<std::size_t>(caps.expand, static_cast<std::size_t>(i.length())));
        ExpandedCursor cursor(atoms, letters);
        return max_cursor_search(cnf, cursor, letter_of_terminal, letters, caps.expand, want_witness);
    }
    CompressedCursor cursor(i, letters);
    return max_cursor_search(cnf, cursor, letter_of_terminal, letters, caps.expand, want_witness);
}

Verdict cfg_directed(const LetterCfg& g, const Caps& caps, bool want_witness) {
    Verdict v;
    if (is_empty_language(g)) {
        v.directed = true;
        v.empty = true;
        return v;
    }
    v.candidate_slp = cfg_candidate_ideal(g);
    Inclusion inc = cfg_included_in_ideal(g, *v.candidate_slp, caps, InclusionRoute::automatic, want_witness);
    v.directed = inc.included;
    v.witness = std::move(inc.witness);
    return v;
}

// ---- equivalence and counting ---------------------------------------------------------

DceResult dce_directed_nfa(const LetterNfa& a1, const LetterNfa& a2, bool assume_directed, const Caps& caps) {
    auto candidate = [&](const LetterNfa& a, const char* which) -> std::optional<IdealRep> {
        if (is_empty_language(cleaned(a))) {
            return std::nullopt;
        }
        if (!assume_directed) {
            Verdict v = nfa_directed(a, caps, false);
            if (!v.directed) {
                throw PreconditionError(std::string(which) + " input is not directed");
            }
            return v.candidate;
        }
        return nfa_candidate_ideal(a, caps);
    };
    auto c1 = candidate(a1, "first");
    auto c2 = candidate(a2, "second");
    return {c1 == c2, false};
}

DceResult dce_directed_cfg(const LetterCfg& g1, const LetterCfg& g2, bool assume_directed, const Caps& caps) {
    auto candidate = [&](const LetterCfg& g, const char* which) -> std::optional<AtomSlp> {
        if (is_empty_language(g)) {
            return std::nullopt;
        }
        if (!assume_directed) {
            Verdict v = cfg_directed(g, caps, false);
            if (!v.directed) {
                throw PreconditionError(std::string(which) + " input is not directed");
            }
            return v.candidate_slp;
        }
        return cfg_candidate_ideal(g);
    };
    auto c1 = candidate(g1, "first");
    auto c2 = candidate(g2, "second");
    if (!c1 || !c2) {
        return {!c1 && !c2, false};
    }
    SlpEquality eq = slp_equal(*c1, *c2, caps.expand);
    return {eq.equal, eq.probabilistic};
}

std::vector<IdealRep> maximal_ideals(const LetterNfa& a, const Caps& caps) {
    if (is_empty_language(cleaned(a))) {
        return {};
    }
    auto reps = enumerate_path_ideals(reduced_ideal_nfa(a, caps), caps.enumerate, alphabet_of(a));
    std::vector<IdealRep> out;
    for (const auto& r : reps) {
        bool dominated = false;
        for (const auto& s : reps) {
            if (strict_includes(r, s)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            out.push_back(r);
        }
    }
    return out;
}

std::size_t count_maximal_ideals(const LetterNfa& a, const Caps& caps) { return maximal_ideals(a, caps).size(); }

// ---- compressed membership reduction ----------------------------------------------------

Letter pair_letter(const Letter& x, const Letter& y) {
    if (x.token.find(':') != std::string::npos || y.token.find(':') != std::string::npos) {
        throw PreconditionError("pair components must not contain ':'");
    }
    return Letter{x.token + ":" + y.token};
}

std::pair<Letter, Letter> split_pair_letter(const Letter& p) {
    auto pos = p.token.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == p.token.size() ||
        p.token.find(':', pos + 1) != std::string::npos) {
        throw PreconditionError("'" + p.token + "' is not a pair letter x:y");
    }
    return {Letter{p.token.substr(0, pos)}, Letter{p.token.substr(pos + 1)}};
}

Word convolution(const Word& u, const Word& v) {
    if (u.size() != v.size()) {
        throw PreconditionError("convolution of words of different lengths");
    }
    Word out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.push_back(pair_letter(u[i], v[i]));
    }
    return out;
}

LetterCfg membership_grammar(const LetterNfa& r, const LetterSlp& a) {
    const std::size_t Q = r.num_states();
    using Rel = std::vector<std::vector<char>>;
    auto empty_rel = [&] { return Rel(Q, std::vector<char>(Q, 0)); };

    Rel eps = empty_rel();
    for (std::size_t q = 0; q < Q; ++q) {
        eps[q][q] = 1;
    }
    for (const auto& t : r.transitions()) {
        if (t.is_epsilon()) {
            eps[t.from][t.to] = 1;
        }
    }
    for (std::size_t k = 0; k < Q; ++k) {
        for (std::size_t i = 0; i < Q; ++i) {
            if (eps[i][k]) {
                for (std::size_t j = 0; j < Q; ++j) {
                    eps[i][j] |= eps[k][j];
                }
            }
        }
    }
    auto compose = [&](const Rel& x, const Rel& y) {
        Rel z = empty_rel();
        for (std::size_t i = 0; i < Q; ++i) {
            for (std::size_t k = 0; k < Q; ++k) {
                if (x[i][k]) {
                    for (std::size_t j = 0; j < Q; ++j) {
                        z[i][j] |= y[k][j];
                    }
                }
            }
        }
        return z;
    };

    const LetterCfg sg = binarize(a.grammar());
    const auto sheads = sg.by_head();
    // Outputs per SLP terminal and closed state pair.
    std::vector<std::map<std::pair<std::size_t, std::size_t>, std::set<Letter>>> outputs(sg.terminals().size());
    std::vector<Rel> trel(sg.terminals().size(), empty_rel());
    for (const auto& t : r.transitions()) {
        if (t.is_epsilon()) {
            continue;
        }
        auto [x, y] = split_pair_letter(r.symbol(t.label));
        auto xi = sg.find_terminal(x);
        if (!xi) {
            continue;
        }
        for (std::size_t p = 0; p < Q; ++p) {
            if (!eps[p][t.from]) {
                continue;
            }
            for (std::size_t q = 0; q < Q; ++q) {
                if (eps[t.to][q]) {
                    trel[*xi][p][q] = 1;
                    outputs[*xi][{p, q}].insert(y);
                }
            }
        }
    }
    std::vector<Rel> nrel(sg.num_nonterminals(), empty_rel());
    auto sym_rel = [&](const Symbol& s) -> const Rel& { return s.terminal ? trel[s.id] : nrel[s.id]; };
    for (auto x : bottom_up_order(sg)) {
        Rel acc = empty_rel();
        for (auto pi : sheads[x]) {
            Rel cur = eps;
            for (const auto& s : sg.productions()[pi].body) {
                cur = compose(cur, sym_rel(s));
            }
            for (std::size_t i = 0; i < Q; ++i) {
                for (std::size_t j = 0; j < Q; ++j) {
                    acc[i][j] |= cur[i][j];
                }
            }
        }
        nrel[x] = acc;
    }

    LetterCfg out;
    std::set<Letter> all_outputs;
    for (const auto& m : outputs) {
        for (const auto& [pq, ys] : m) {
            all_outputs.insert(ys.begin(), ys.end());
        }
    }
    for (const auto& y : all_outputs) {
        out.add_terminal(y);
    }
    const std::size_t start = out.add_fresh("S");
    out.set_start(start);
    if (Q == 0) {
        return out;
    }
    std::map<std::tuple<bool, std::size_t, std::size_t, std::size_t>, std::size_t> ids;
    std::vector<std::tuple<bool, std::size_t, std::size_t, std::size_t>> todo;
    auto node = [&](const Symbol& s, std::size_t p, std::size_t q) {
        auto k = std::make_tuple(s.terminal, s.id, p, q);
        auto it = ids.find(k);
        if (it != ids.end()) {
            return it->second;
        }
        std::string base = sg.symbol_string(s) + "[" + r.name(StateId(p)) + "," + r.name(StateId(q)) + "]";
        std::size_t id = out.add_fresh(base);
        ids.emplace(k, id);
        todo.push_back(k);
        return id;
    };
    for (auto f : r.finals()) {
        if (nrel[sg.start()][r.initial()][f]) {
            out.add_production(start, {Symbol::n(node(Symbol::n(sg.start()), r.initial(), f))});
        }
    }
    while (!todo.empty()) {
        auto [terminal, sid, p, q] = todo.back();
        todo.pop_back();
        std::size_t head = ids.at({terminal, sid, p, q});
        if (terminal) {
            for (const auto& y : outputs[sid][{p, q}]) {
                out.add_production(head, {Symbol::t(*out.find_terminal(y))});
            }
            continue;
        }
        for (auto pi : sheads[sid]) {
            const auto& body = sg.productions()[pi].body;
            if (body.empty()) {
                if (eps[p][q]) {
                    out.add_production(head, {});
                }
            } else if (body.size() == 1) {
                if (sym_rel(body[0])[p][q]) {
                    out.add_production(head, {Symbol::n(node(body[0], p, q))});
                }
            } else {
                for (std::size_t m = 0; m < Q; ++m) {
                    if (sym_rel(body[0])[p][m] && sym_rel(body[1])[m][q]) {
                        out.add_production(head, {Symbol::n(node(body[0], p, m)), Symbol::n(node(body[1], m, q))});
                    }
                }
            }
        }
    }
    return prune(out);
}

LetterCfg union_grammar(const LetterCfg& g1, const LetterCfg& g2) {
    LetterCfg out;
    for (const auto* g : {&g1, &g2}) {
        for (const auto& x : g->terminals()) {
            out.add_terminal(x);
        }
    }
    std::vector<std::size_t> starts;
    for (const auto* g : {&g1, &g2}) {
        std::vector<std::size_t> map;
        for (const auto& n : g->names()) {
            map.push_back(out.add_fresh(n));
        }
        for (const auto& p : g->productions()) {
            std::vector<Symbol> body;
            for (const auto& s : p.body) {
                body.push_back(s.terminal ? Symbol::t(*out.find_terminal(g->terminal(s.id))) : Symbol::n(map[s.id]));
            }
            out.add_production(map[p.head], std::move(body));
        }
        starts.push_back(g->num_nonterminals() ? map[g->start()] : std::size_t(-1));
    }
    std::size_t s = out.add_fresh("S");
    out.set_start(s);
    for (auto st : starts) {
        if (st != std::size_t(-1)) {
            out.add_production(s, {Symbol::n(st)});
        }
    }
    return out;
}

LetterCfg hardness_instance(const LetterCfg& g, const LetterSlp& b) {
    Alphabet sigma(g.terminals());
    sigma = sigma.united(Alphabet(b.grammar().terminals()));
    if (sigma.size() < 2) {
        throw PreconditionError("hardness instance needs at least two letters");
    }
    if (b.length() > BigInt(1u << 20)) {
        throw PreconditionError("word length too large for the length check");
    }
    const std::size_t n = static_cast<std::size_t>(b.length());
    if (!is_empty_language(g)) {
        // Possible word lengths per nonterminal, lengths above n collapsed into n + 1.
        const std::size_t L = n + 2;
        std::vector<std::vector<char>> lens(g.num_nonterminals(), std::vector<char>(L, 0));
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& p : g.productions()) {
                std::vector<char> cur(L, 0);
                cur[0] = 1;
                for (const auto& s : p.body) {
                    std::vector<char> next(L, 0);
                    for (std::size_t i = 0; i < L; ++i) {
                        if (!cur[i]) {
                            continue;
                        }
                        if (s.terminal) {
                            next[std::min(i + 1, L - 1)] = 1;
                        } else {
                            for (std::size_t j = 0; j < L; ++j) {
                                if (lens[s.id][j]) {
                                    next[std::min(i + j, L - 1)] = 1;
                                }
                            }
                        }
                    }
                    cur = std::move(next);
                }
                for (std::size_t i = 0; i < L; ++i) {
                    if (cur[i] && !lens[p.head][i]) {
                        lens[p.head][i] = 1;
                        changed = true;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < L; ++i) {
            if (lens[g.start()][i] && i != n) {
                throw PreconditionError("grammar generates a word whose length differs from |val(b)|");
            }
        }
    }
    return union_grammar(g, ideal_language_grammar(complement_ideal(b, sigma)));
}

} // namespace downclose
