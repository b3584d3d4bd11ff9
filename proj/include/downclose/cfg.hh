#pragma once

// Context-free grammars over letters or atoms: the data model, cleanup and
// normal forms, the acyclic ideal grammar, weights and max-weight SLP extraction.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "downclose/errors.hh"
#include "downclose/ideals.hh"
#include "downclose/nfa.hh"

namespace downclose {

struct Symbol {
    bool terminal;
    std::size_t id;

    static Symbol t(std::size_t id) { return {true, id}; }
    static Symbol n(std::size_t id) { return {false, id}; }
    bool operator==(const Symbol&) const = default;
    auto operator<=>(const Symbol&) const = default;
};

struct Production {
    std::size_t head;
    std::vector<Symbol> body;
    bool operator==(const Production&) const = default;
};

/// Grammar with named nonterminals (dense ids, creation order), terminals in
/// insertion order and productions in insertion order (duplicates dropped).
template <class T>
class Cfg {
public:
    Cfg() = default;

    /// Throws PreconditionError when the name is taken.
    std::size_t add_nonterminal(const std::string& name) {
        if (!is_free_name(name)) {
            throw PreconditionError("name '" + name + "' already in use");
        }
        ntid_.emplace(name, names_.size());
        names_.push_back(name);
        return names_.size() - 1;
    }

    /// Adds a nonterminal named `base`, or `base'`, `base''`, ... if taken.
    std::size_t add_fresh(const std::string& base) {
        std::string name = base;
        while (!is_free_name(name)) {
            name += '\'';
        }
        return add_nonterminal(name);
    }

    bool is_free_name(const std::string& name) const {
        return name != "eps" && name != "|" && name != "->" && !ntid_.count(name) &&
               !terminal_tokens_.count(name);
    }

    std::optional<std::size_t> find_nonterminal(std::string_view name) const {
        auto it = ntid_.find(std::string(name));
        if (it == ntid_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::size_t add_terminal(const T& x) {
        auto [it, fresh] = tid_.emplace(x, terminals_.size());
        if (fresh) {
            terminals_.push_back(x);
            terminal_tokens_.insert(symbol_to_string(x));
        }
        return it->second;
    }

    std::optional<std::size_t> find_terminal(const T& x) const {
        auto it = tid_.find(x);
        if (it == tid_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// Returns false when the production already existed.
    bool add_production(std::size_t head, std::vector<Symbol> body) {
        if (head >= names_.size()) {
            throw PreconditionError("production head out of range");
        }
        for (const auto& s : body) {
            if (s.terminal ? s.id >= terminals_.size() : s.id >= names_.size()) {
                throw PreconditionError("production body symbol out of range");
            }
        }
        if (!seen_.emplace(head, body).second) {
            return false;
        }
        productions_.push_back({head, std::move(body)});
        return true;
    }

    void set_start(std::size_t s) {
        if (s >= names_.size()) {
            throw PreconditionError("start symbol out of range");
        }
        start_ = s;
    }

    std::size_t num_nonterminals() const { return names_.size(); }
    const std::string& name(std::size_t a) const { return names_[a]; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<T>& terminals() const { return terminals_; }
    const T& terminal(std::size_t i) const { return terminals_[i]; }
    const std::vector<Production>& productions() const { return productions_; }
    std::size_t start() const { return start_; }

    /// Production indices per head.
    std::vector<std::vector<std::size_t>> by_head() const {
        std::vector<std::vector<std::size_t>> out(names_.size());
        for (std::size_t i = 0; i < productions_.size(); ++i) {
            out[productions_[i].head].push_back(i);
        }
        return out;
    }

    std::string symbol_string(const Symbol& s) const {
        return s.terminal ? symbol_to_string(terminals_[s.id]) : names_[s.id];
    }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> ntid_;
    std::vector<T> terminals_;
    std::map<T, std::size_t> tid_;
    std::set<std::string> terminal_tokens_;
    std::vector<Production> productions_;
    std::set<std::pair<std::size_t, std::vector<Symbol>>> seen_;
    std::size_t start_ = 0;
};

using LetterCfg = Cfg<Letter>;
using AtomCfg = Cfg<Atom>;

enum class SelfProduction { none, once, twice };

/// Classification of nonterminals by how they produce themselves.
struct SelfProductionClasses {
    std::vector<SelfProduction> kind;
    /// Representative of the class (smallest id) for `once`, the nonterminal itself otherwise.
    std::vector<std::size_t> rep;
    /// Letters occurring in L(A).
    std::vector<Alphabet> alph;
    /// Context letters left and right of the class, indexed by representative.
    std::vector<Alphabet> left;
    std::vector<Alphabet> right;
};

// ---- generic grammar utilities (instantiated for Letter and Atom) -------------

/// Nonterminals deriving some terminal word.
template <class T>
std::vector<bool> productive(const Cfg<T>& g);

/// Nonterminals reachable from the start symbol.
template <class T>
std::vector<bool> reachable(const Cfg<T>& g);

/// Keeps productive and reachable nonterminals (the start symbol always stays).
template <class T>
Cfg<T> prune(const Cfg<T>& g);

template <class T>
bool is_empty_language(const Cfg<T>& g);

/// No nonterminal derives itself in one or more steps.
template <class T>
bool is_acyclic(const Cfg<T>& g);

/// Nonterminals in an order where each comes after every nonterminal in its bodies.
/// Throws PreconditionError on cyclic grammars.
template <class T>
std::vector<std::size_t> bottom_up_order(const Cfg<T>& g);

/// Bodies longer than two are split with fresh nonterminals; nothing else changes.
template <class T>
Cfg<T> binarize(const Cfg<T>& g);

/// Chomsky normal form: A -> BC, A -> a, S -> eps with B, C != S. Useless symbols removed.
template <class T>
Cfg<T> to_cnf(const Cfg<T>& g);

template <class T>
bool is_cnf(const Cfg<T>& g);

template <class T>
std::string to_string(const Cfg<T>& g);

// ---- ideal grammars -----------------------------------------------------------

/// Requires a CNF grammar with only useful nonterminals.
SelfProductionClasses self_production_classes(const LetterCfg& g);

/// Acyclic grammar over atoms whose generated representations decompose
/// the downward closure of L(g). Requires CNF.
AtomCfg ideal_grammar(const LetterCfg& g);

/// Reduced, acyclic CNF grammar over atoms; every generated representation is reduced.
AtomCfg reduced_ideal_grammar(const LetterCfg& g);

/// 3 * 2^(2 |N|): bound on the length of representations generated by an acyclic grammar with |N| nonterminals.
BigInt derivation_bound(std::size_t nonterminals);

/// Per nonterminal, the maximal m-weight of a derivable representation (-inf if none).
struct WeightTable {
    BigInt m;
    std::vector<Weight> entries;

    const Weight& operator[](std::size_t a) const { return entries.at(a); }
};

/// Requires an acyclic grammar over atoms.
WeightTable weight_table(const AtomCfg& g, const BigInt& m);

// ---- text format ------------------------------------------------------------------

LetterCfg parse_cfg(std::string_view text);
AtomCfg parse_atom_cfg(std::string_view text);

} // namespace downclose
