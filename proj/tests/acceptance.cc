// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 when any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "downclose/decision.hh"
#include "downclose/oracle.hh"
#include "downclose/transducer.hh"
#include "support.hh"

using namespace downclose;
using namespace downclose::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what << " (" << detail << ")" << std::endl;
    if (!ok) {
        ++failures;
    }
}

/// Runs a criterion body; exceptions count as failures.
void criterion(int n, const std::string& what, const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
    }
    report(n, ok, what, detail.str());
}

/// (k+1)^|D| summed over star atoms plus one per single atom, computed from scratch.
BigInt weight_oracle(const IdealRep& r, unsigned k) {
    BigInt total = 0;
    for (const auto& atom : r.atoms) {
        if (atom.is_single()) {
            total += 1;
        } else {
            BigInt p = 1;
            for (std::size_t i = 0; i < atom.letters().size(); ++i) {
                p *= k + 1;
            }
            total += p;
        }
    }
    return total;
}

/// Every atom word of an acyclic atom grammar; Error beyond `cap` words per nonterminal.
std::set<std::vector<Atom>> atom_language(const AtomCfg& g, std::size_t cap) {
    std::vector<std::set<std::vector<Atom>>> lang(g.num_nonterminals());
    const auto heads = g.by_head();
    for (auto a : bottom_up_order(g)) {
        for (auto pi : heads[a]) {
            std::set<std::vector<Atom>> cur{{}};
            for (const auto& s : g.productions()[pi].body) {
                std::set<std::vector<Atom>> next;
                for (const auto& u : cur) {
                    if (s.terminal) {
                        auto v = u;
                        v.push_back(g.terminal(s.id));
                        next.insert(v);
                    } else {
                        for (const auto& w : lang[s.id]) {
                            auto v = u;
                            v.insert(v.end(), w.begin(), w.end());
                            next.insert(v);
                        }
                    }
                    if (next.size() > cap) {
                        throw Error("atom language too large");
                    }
                }
                cur = std::move(next);
            }
            lang[a].insert(cur.begin(), cur.end());
        }
    }
    return lang[g.start()];
}

} // namespace

int main() {
    criterion(1, "worked example: 10-state reduced automaton, weight 1574, witness cb", [](auto& d) {
        auto t0 = Clock::now();
        LetterNfa a = load_nfa("worked_example.nfa");
        NfaCandidate c = nfa_candidate(a);
        IdealRep expected = parse_rep("{a,b}* c? {d,e}* {a,c,f}*");
        BigInt formula = BigInt(11) * 11 * 11 + 2 * BigInt(11) * 11 + 1;
        Verdict v = nfa_directed(a);
        double secs = seconds_since(t0);
        auto dcl = oracle::dcl_words(a, 4).words;
        bool witness_ok = v.witness && !oracle::ideal_member_dp(*v.witness, expected) && dcl.count(*v.witness);
        d << "states " << c.states << ", candidate " << to_string(c.rep) << ", weight " << c.weight << ", oracle weight "
          << weight_oracle(c.rep, 10) << ", witness " << (v.witness ? to_string(*v.witness) : "none") << ", "
          << secs << " s";
        return c.states == 10 && c.rep == expected && c.weight == 1574 && formula == 1574 &&
               weight_oracle(c.rep, 10) == 1574 && !v.directed && witness_ok && to_string(*v.witness) == "cb" &&
               secs < 1.0;
    });

    criterion(2, "K1 directed with {a,b}* c? {a,b}*, K2 not, K1+K2 directed, dce K1 = K1+K2", [](auto& d) {
        double worst = 0;
        auto timed = [&](auto f) {
            auto t0 = Clock::now();
            auto r = f();
            worst = std::max(worst, seconds_since(t0));
            return r;
        };
        LetterCfg k1 = load_cfg("k1.cfg"), k2 = load_cfg("k2.cfg"), k12 = load_cfg("k1k2.cfg");
        Verdict v1 = timed([&] { return cfg_directed(k1); });
        Verdict v2 = timed([&] { return cfg_directed(k2); });
        Verdict v12 = timed([&] { return cfg_directed(k12); });
        DceResult e = timed([&] { return dce_directed_cfg(k1, k12); });
        std::string cand = v1.candidate_slp ? to_string(rep_of(*v1.candidate_slp, 1000)) : "none";
        // Oracle: the witness of K2 lies in the downward closure and outside the candidate.
        bool w2 = v2.witness && v2.candidate_slp && oracle::cyk(k2, *v2.witness, true) &&
                  !oracle::ideal_member_dp(*v2.witness, rep_of(*v2.candidate_slp, 1000));
        d << "K1 " << (v1.directed ? "directed" : "not directed") << " " << cand << ", K2 "
          << (v2.directed ? "directed" : "not directed") << ", K1+K2 " << (v12.directed ? "directed" : "not directed")
          << ", dce " << (e.equal ? "equal" : "not equal") << ", slowest " << worst << " s";
        return v1.directed && cand == "{a,b}* c? {a,b}*" && !v2.directed && w2 && v12.directed && e.equal &&
               !e.probabilistic && worst < 1.0;
    });

    criterion(3, "1000 random NFAs: verdicts and maximal-ideal counts match brute force", [](auto& d) {
        Rng rng(20240601);
        auto t0 = Clock::now();
        std::size_t verdict_mismatch = 0, count_mismatch = 0, not_directed = 0;
        for (int i = 0; i < 1000; ++i) {
            LetterNfa a = random_nfa(rng, 7, 3, 14);
            bool dir = nfa_directed(a).directed;
            auto brute = oracle::decompose_bruteforce(a);
            verdict_mismatch += dir != (brute.size() <= 1);
            count_mismatch += count_maximal_ideals(a) != brute.size();
            not_directed += !dir;
        }
        double secs = seconds_since(t0);
        d << verdict_mismatch << " verdict and " << count_mismatch << " count mismatches, " << not_directed
          << " not directed, " << secs << " s";
        return verdict_mismatch == 0 && count_mismatch == 0 && secs < 60.0;
    });

    criterion(4, "10000 reduced pairs: inclusion implies <= weight, strict inclusion implies <", [](auto& d) {
        Rng rng(77);
        std::size_t included = 0, strict = 0, violations = 0, oracle_disagree = 0;
        for (int i = 0; i < 10000; ++i) {
            unsigned k = static_cast<unsigned>(uniform(rng, 1, 8));
            auto sigma = letters(uniform(rng, 1, 4));
            IdealRep s = random_reduced_rep(rng, k, sigma);
            IdealRep r = random_reduced_rep(rng, k, sigma);
            if (i % 2 == 0 && !s.empty()) {
                // Sub-representation of s: drop atoms and shrink alphabets, then reduce.
                std::vector<Atom> atoms;
                for (const auto& x : s.atoms) {
                    if (uniform(rng, 0, 3) == 0) {
                        continue;
                    }
                    if (x.is_star() && uniform(rng, 0, 1) == 0) {
                        const auto& ls = x.letters().letters();
                        atoms.push_back(uniform(rng, 0, 1) ? Atom::single(ls[uniform(rng, 0, ls.size() - 1)])
                                                           : Atom::star(Alphabet(std::vector<Letter>(
                                                                 ls.begin(), ls.begin() + uniform(rng, 1, ls.size())))));
                    } else {
                        atoms.push_back(x);
                    }
                }
                r = reduce(IdealRep(atoms, Alphabet(sigma)));
            }
            bool inc = ideal_includes(r, s);
            bool st = strict_includes(r, s);
            oracle_disagree += inc != oracle::includes(r, s);
            BigInt wr = weight(r, k), ws = weight(s, k);
            oracle_disagree += wr != weight_oracle(r, k) || ws != weight_oracle(s, k);
            if (inc) {
                ++included;
                violations += !(wr <= ws);
            }
            if (st) {
                ++strict;
                violations += !(wr < ws);
            }
        }
        d << included << " included, " << strict << " strict, " << violations << " violations, " << oracle_disagree
          << " oracle disagreements";
        return violations == 0 && oracle_disagree == 0 && strict > 1000;
    });

    criterion(5, "chain family for l = 5: 32 reps, strict chain, strictly increasing weights", [](auto& d) {
        auto chain = chain_family(5);
        std::size_t k = 0;
        for (const auto& r : chain) {
            k = std::max(k, r.size());
        }
        std::size_t broken = 0;
        for (std::size_t i = 0; i < chain.size(); ++i) {
            for (std::size_t j = i + 1; j < chain.size(); ++j) {
                bool strict = strict_includes(chain[i], chain[j]) && oracle::includes(chain[i], chain[j]) &&
                              !oracle::includes(chain[j], chain[i]);
                broken += !strict || !(weight_oracle(chain[i], unsigned(k)) < weight_oracle(chain[j], unsigned(k)));
            }
        }
        std::set<BigInt> weights;
        for (const auto& r : chain) {
            weights.insert(weight(r, k));
        }
        d << chain.size() << " reps, " << weights.size() << " distinct weights at k = " << k << ", " << broken
          << " broken pairs";
        return chain.size() == 32 && weights.size() == 32 && broken == 0;
    });

    criterion(6, "complement ideal: exactly the other words of length n, plus a longer word", [](auto& d) {
        Rng rng(606);
        auto sigma = letters(2);
        Alphabet ab(sigma);
        std::size_t violations = 0;
        for (int i = 0; i < 200; ++i) {
            std::size_t n = uniform(rng, 1, 10);
            Word b = random_word(rng, n, sigma);
            IdealRep idl = rep_of(complement_ideal(word_slp(b), ab), 10000);
            for (const auto& u : all_words(sigma, n)) {
                violations += oracle::ideal_member_dp(u, idl) != (u != b);
            }
            bool longer = false;
            for (const auto& u : all_words(sigma, n + 1)) {
                if (oracle::ideal_member_dp(u, idl)) {
                    longer = true;
                    break;
                }
            }
            violations += !longer;
        }
        d << "200 samples, " << violations << " violations";
        return violations == 0;
    });

    criterion(7, "hardness instances: directed exactly when val(b) is not in L(g) (CYK)", [](auto& d) {
        Rng rng(7007);
        auto sigma = letters(2);
        std::size_t mismatches = 0, members = 0;
        for (int i = 0; i < 200; ++i) {
            std::size_t n = uniform(rng, 1, 6);
            LetterCfg g;
            Word b = random_word(rng, n, sigma);
            if (i % 2 == 0) {
                std::vector<Word> words;
                for (const auto& w : all_words(sigma, n)) {
                    if (uniform(rng, 0, 3) == 0) {
                        words.push_back(w);
                    }
                }
                if (uniform(rng, 0, 1) == 0) {
                    words.push_back(b);
                }
                g = finite_grammar(words, sigma);
            } else {
                // Relation automaton over pair letters applied to a compressed word.
                LetterNfa r;
                std::size_t states = uniform(rng, 1, 3);
                for (std::size_t q = 0; q < states; ++q) {
                    r.add_state("r" + std::to_string(q));
                }
                r.set_initial(0);
                r.set_final(StateId(uniform(rng, 0, states - 1)));
                for (std::size_t e = 0, m = uniform(rng, 2, 10); e < m; ++e) {
                    r.add_transition(StateId(uniform(rng, 0, states - 1)),
                                     pair_letter(sigma[uniform(rng, 0, 1)], sigma[uniform(rng, 0, 1)]),
                                     StateId(uniform(rng, 0, states - 1)));
                }
                g = membership_grammar(r, word_slp(random_word(rng, n, sigma)));
                g.add_terminal(sigma[0]);
                g.add_terminal(sigma[1]);
                if (uniform(rng, 0, 1) == 0) {
                    auto words = oracle::cfg_words(g, n);
                    if (!words.empty()) {
                        auto it = words.begin();
                        std::advance(it, uniform(rng, 0, words.size() - 1));
                        b = *it;
                    }
                }
            }
            bool member = oracle::cyk(g, b);
            members += member;
            bool directed = cfg_directed(hardness_instance(g, word_slp(b))).directed;
            mismatches += directed != !member;
        }
        d << "200 instances, " << members << " with val(b) in L(g), " << mismatches << " mismatches";
        return mismatches == 0 && members > 20 && members < 180;
    });

    criterion(8, "reduction: T_L(T_R(r)) = reduce(r) on all short atom words; pipeline outputs reduced", [](auto& d) {
        auto sigma = letters(2);
        Alphabet a{{sigma[0]}}, b{{sigma[1]}}, ab(sigma);
        std::vector<Atom> gamma{Atom::single(sigma[0]), Atom::single(sigma[1]), Atom::star(a), Atom::star(b),
                                Atom::star(ab)};
        Transducer tl = build_TL(gamma);
        Transducer tr = build_TR(gamma);
        std::size_t words = 0, bad_transduce = 0;
        std::vector<std::vector<Atom>> layer{{}};
        for (std::size_t len = 0; len <= 4; ++len) {
            std::vector<std::vector<Atom>> next;
            for (const auto& w : layer) {
                ++words;
                auto out = tl.apply(tr.apply(w));
                IdealRep rep(w, ab);
                bad_transduce += out != reduce(rep).atoms || out != oracle::naive_reduce(rep).atoms;
                for (const auto& x : gamma) {
                    next.push_back(w);
                    next.back().push_back(x);
                }
            }
            layer = std::move(next);
        }
        Rng rng(88);
        std::size_t reps = 0, unreduced = 0;
        for (int i = 0; i < 300; ++i) {
            LetterNfa nfa = random_nfa(rng, 6, 3, 12);
            if (is_empty_language(trim(nfa))) {
                continue;
            }
            for (const auto& r : enumerate_path_ideals(reduced_ideal_nfa(nfa), 100000, alphabet_of(nfa))) {
                ++reps;
                unreduced += !is_reduced(r);
            }
        }
        std::vector<LetterCfg> grammars{load_cfg("k1.cfg"), load_cfg("k2.cfg"), load_cfg("k1k2.cfg")};
        for (int i = 0; i < 150; ++i) {
            grammars.push_back(random_cfg(rng, 3, sigma));
        }
        std::size_t grammar_reps = 0;
        for (const auto& g : grammars) {
            if (is_empty_language(g)) {
                continue;
            }
            for (const auto& w : atom_language(reduced_ideal_grammar(g), 20000)) {
                ++grammar_reps;
                unreduced += !is_reduced(w);
            }
        }
        d << words << " atom words, " << bad_transduce << " transducer mismatches, " << reps << " automaton reps, "
          << grammar_reps << " grammar reps, " << unreduced << " unreduced";
        return words == 781 && bad_transduce == 0 && unreduced == 0 && reps > 0 && grammar_reps > 0;
    });

    criterion(9, "scaling: 500-state NFA under 10 s, doubling-chain CFG under 30 s", [](auto& d) {
        Rng rng(9);
        auto sigma = letters(10);
        // Random automaton: mostly forward edges with a few back edges, so both
        // large components and long component chains occur.
        LetterNfa a;
        const std::size_t n = 500;
        for (std::size_t q = 0; q < n; ++q) {
            a.add_state("q" + std::to_string(q));
        }
        for (const auto& x : sigma) {
            a.add_symbol(x);
        }
        a.set_initial(0);
        a.set_final(StateId(n - 1));
        for (std::size_t q = 0; q < n; ++q) {
            for (int e = 0; e < 3; ++e) {
                std::size_t to = std::min(n - 1, q + uniform(rng, 0, 5));
                if (uniform(rng, 0, 9) == 0) {
                    to = q - std::min(q, uniform(rng, 0, 3));
                }
                a.add_transition(StateId(q), uniform(rng, 0, 9), StateId(to));
            }
            if (uniform(rng, 0, 19) == 0) {
                a.set_final(StateId(q));
            }
        }
        auto t0 = Clock::now();
        Verdict v = nfa_directed(a);
        double nfa_secs = seconds_since(t0);

        LetterCfg g;
        g.add_terminal(sigma[0]);
        g.add_terminal(sigma[1]);
        for (int i = 0; i <= 15; ++i) {
            g.add_nonterminal("X" + std::to_string(i));
        }
        std::size_t A = g.add_nonterminal("A"), B = g.add_nonterminal("B");
        for (std::size_t i = 0; i < 15; ++i) {
            g.add_production(i, {Symbol::n(i + 1), Symbol::n(i + 1)});
        }
        g.add_production(15, {Symbol::n(A), Symbol::n(B)});
        g.add_production(A, {Symbol::t(0)});
        g.add_production(B, {Symbol::t(1)});
        g.set_start(0);
        t0 = Clock::now();
        Verdict w = cfg_directed(g);
        double cfg_secs = seconds_since(t0);
        BigInt len = w.candidate_slp ? w.candidate_slp->length() : BigInt(0);
        d << "NFA " << (v.directed ? "directed" : "not directed") << " in " << nfa_secs << " s, CFG "
          << (w.directed ? "directed" : "not directed") << " with |val| = " << len << " in " << cfg_secs << " s";
        return nfa_secs < 10.0 && cfg_secs < 30.0 && w.directed && len >= (BigInt(1) << 15);
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
