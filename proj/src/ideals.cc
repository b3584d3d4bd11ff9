#include "downclose/ideals.hh"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "downclose/errors.hh"

namespace downclose {

bool is_valid_letter_token(std::string_view token) {
    if (token.empty() || token == "eps") {
        return false;
    }
    for (char c : token) {
        auto u = static_cast<unsigned char>(c);
        if (u <= 0x20 || u == 0x7f) {
            return false;
        }
        switch (c) {
        case '{': case '}': case '*': case '?': case ',': case '|':
            return false;
        default:
            break;
        }
    }
    return true;
}

// ---- Alphabet --------------------------------------------------------------

Alphabet::Alphabet(std::vector<Letter> letters) : letters_(std::move(letters)) {
    std::sort(letters_.begin(), letters_.end());
    letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
}

Alphabet Alphabet::from_tokens(std::initializer_list<std::string_view> tokens) {
    std::vector<Letter> letters;
    for (auto t : tokens) {
        letters.push_back(Letter{std::string(t)});
    }
    return Alphabet(std::move(letters));
}

bool Alphabet::contains(const Letter& x) const {
    return std::binary_search(letters_.begin(), letters_.end(), x);
}

bool Alphabet::is_subset_of(const Alphabet& other) const {
    return std::includes(other.letters_.begin(), other.letters_.end(), letters_.begin(), letters_.end());
}

Alphabet Alphabet::united(const Alphabet& other) const {
    std::vector<Letter> out;
    std::set_union(letters_.begin(), letters_.end(), other.letters_.begin(), other.letters_.end(),
                   std::back_inserter(out));
    Alphabet result;
    result.letters_ = std::move(out);
    return result;
}

Alphabet Alphabet::without(const Letter& x) const {
    Alphabet result;
    for (const auto& l : letters_) {
        if (l != x) {
            result.letters_.push_back(l);
        }
    }
    return result;
}

// ---- Atom / IdealRep -------------------------------------------------------

Atom Atom::single(Letter a) {
    return Atom(Kind::single, Alphabet({std::move(a)}));
}

Atom Atom::star(Alphabet letters) {
    if (letters.empty()) {
        throw PreconditionError("alphabet atom over the empty alphabet");
    }
    return Atom(Kind::star, std::move(letters));
}

IdealRep::IdealRep(std::vector<Atom> atoms_) : atoms(std::move(atoms_)) {
    for (const auto& a : atoms) {
        ambient = ambient.united(a.letters());
    }
}

// ---- Weight ----------------------------------------------------------------

Weight operator+(const Weight& a, const Weight& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) {
        return Weight::neg_inf();
    }
    return Weight(*a.value_ + *b.value_);
}

bool operator==(const Weight& a, const Weight& b) {
    return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) {
        return b.is_neg_inf() <=> a.is_neg_inf();
    }
    if (*a.value_ < *b.value_) {
        return std::strong_ordering::less;
    }
    if (*b.value_ < *a.value_) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::string Weight::to_string() const {
    return is_neg_inf() ? std::string("-inf") : value_->str();
}

Weight max(const Weight& a, const Weight& b) {
    return a < b ? b : a;
}

// ---- containment / absorption / reduction ----------------------------------

bool atom_contains(const Atom& outer, const Atom& inner) {
    if (outer.is_single()) {
        return inner == outer;
    }
    return inner.letters().is_subset_of(outer.letters());
}

Absorption absorbs(const Atom& left, const Atom& right) {
    bool l = left.is_star() && atom_contains(left, right);
    bool r = right.is_star() && atom_contains(right, left);
    if (l && r) {
        return Absorption::both;
    }
    if (l) {
        return Absorption::left_absorbs;
    }
    if (r) {
        return Absorption::right_absorbs;
    }
    return Absorption::neither;
}

bool is_reduced(std::span<const Atom> atoms) {
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        if (absorbs(atoms[i], atoms[i + 1]) != Absorption::neither) {
            return false;
        }
    }
    return true;
}

bool is_left_reduced(std::span<const Atom> atoms) {
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        auto a = absorbs(atoms[i], atoms[i + 1]);
        if (a == Absorption::left_absorbs || a == Absorption::both) {
            return false;
        }
    }
    return true;
}

bool is_right_reduced(std::span<const Atom> atoms) {
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        auto a = absorbs(atoms[i], atoms[i + 1]);
        if (a == Absorption::right_absorbs || a == Absorption::both) {
            return false;
        }
    }
    return true;
}

IdealRep reduce(const IdealRep& rep) {
    std::vector<Atom> out;
    out.reserve(rep.atoms.size());
    for (const auto& atom : rep.atoms) {
        bool keep = true;
        while (!out.empty()) {
            auto a = absorbs(out.back(), atom);
            if (a == Absorption::left_absorbs || a == Absorption::both) {
                keep = false;
                break;
            }
            if (a == Absorption::right_absorbs) {
                out.pop_back();
                continue;
            }
            break;
        }
        if (keep) {
            out.push_back(atom);
        }
    }
    return IdealRep(std::move(out), rep.ambient);
}

// ---- membership / inclusion ------------------------------------------------

std::size_t advance_cursor(std::span<const Atom> atoms, std::size_t cursor, const Letter& x) {
    const std::size_t n = atoms.size();
    if (cursor > n) {
        return n + 1;
    }
    std::size_t next = (cursor == 0 || atoms[cursor - 1].is_single()) ? cursor + 1 : cursor;
    for (; next <= n; ++next) {
        if (atoms[next - 1].contains_letter(x)) {
            return next;
        }
    }
    return n + 1;
}

std::size_t advance_cursor(std::span<const Atom> atoms, std::size_t cursor, const Atom& alpha) {
    const std::size_t n = atoms.size();
    if (cursor > n) {
        return n + 1;
    }
    std::size_t next = (cursor == 0 || atoms[cursor - 1].is_single()) ? cursor + 1 : cursor;
    for (; next <= n; ++next) {
        if (atom_contains(atoms[next - 1], alpha)) {
            return next;
        }
    }
    return n + 1;
}

namespace {

bool member_unchecked(const Word& w, std::span<const Atom> atoms) {
    std::size_t cursor = 0;
    for (const auto& x : w) {
        cursor = advance_cursor(atoms, cursor, x);
        if (cursor > atoms.size()) {
            return false;
        }
    }
    return true;
}

} // namespace

bool ideal_member(const Word& w, const IdealRep& rep) {
    for (const auto& x : w) {
        if (!rep.ambient.contains(x)) {
            throw PreconditionError("letter '" + x.token + "' is not in the ambient alphabet");
        }
    }
    return member_unchecked(w, rep.atoms);
}

Word characteristic_word(const IdealRep& rep, std::size_t m) {
    Word w;
    for (const auto& atom : rep.atoms) {
        if (atom.is_single()) {
            w.push_back(atom.letter());
        } else {
            for (std::size_t r = 0; r <= m; ++r) {
                w.insert(w.end(), atom.letters().begin(), atom.letters().end());
            }
        }
    }
    return w;
}

bool ideal_includes(const IdealRep& sub, const IdealRep& sup) {
    return member_unchecked(characteristic_word(sub, sup.size()), sup.atoms);
}

bool strict_includes(const IdealRep& sub, const IdealRep& sup) {
    if (!is_reduced(sub) || !is_reduced(sup)) {
        throw PreconditionError("strict_includes requires reduced representations");
    }
    return sub != sup && ideal_includes(sub, sup);
}

std::optional<Embedding> embedding(const IdealRep& sub, const IdealRep& sup) {
    const std::size_t m = sup.size();
    Embedding f;
    std::size_t cursor = 0;
    for (const auto& atom : sub.atoms) {
        Word piece = characteristic_word(IdealRep({atom}, {}), m);
        for (const auto& x : piece) {
            cursor = advance_cursor(sup.atoms, cursor, x);
            if (cursor > m) {
                return std::nullopt;
            }
        }
        f.map.push_back(cursor - 1);
    }
    return f;
}

// ---- weights ---------------------------------------------------------------

BigInt weight(const Atom& atom, const BigInt& k) {
    if (atom.is_single()) {
        return 1;
    }
    return boost::multiprecision::pow(BigInt(k + 1), static_cast<unsigned>(atom.letters().size()));
}

BigInt weight(const IdealRep& rep, const BigInt& k) {
    BigInt total = 0;
    for (const auto& atom : rep.atoms) {
        total += weight(atom, k);
    }
    return total;
}

std::vector<IdealRep> chain_family(unsigned ell, unsigned cap) {
    if (ell > cap) {
        throw PreconditionError("chain_family: ell=" + std::to_string(ell) + " exceeds cap " +
                                std::to_string(cap));
    }
    std::vector<Letter> sigma;
    for (unsigned i = 0; i <= ell; ++i) {
        sigma.push_back(Letter{"a" + std::to_string(i)});
    }
    const Alphabet ambient(sigma);

    std::vector<std::vector<Atom>> chain{{Atom::single(sigma[0])}};
    for (unsigned i = 1; i <= ell; ++i) {
        const Atom prefix_star = Atom::star(Alphabet(std::vector<Letter>(sigma.begin(), sigma.begin() + i)));
        const Atom marker = Atom::single(sigma[i]);
        const std::size_t t = chain.size();
        for (std::size_t j = 0; j < t; ++j) {
            std::vector<Atom> next{prefix_star, marker};
            next.insert(next.end(), chain[j].begin(), chain[j].end());
            chain.push_back(std::move(next));
        }
    }
    std::vector<IdealRep> out;
    out.reserve(chain.size());
    for (auto& atoms : chain) {
        out.emplace_back(std::move(atoms), ambient);
    }
    return out;
}

// ---- text format -----------------------------------------------------------

std::string to_string(const Atom& atom) {
    if (atom.is_single()) {
        return atom.letter().token + "?";
    }
    std::string s = "{";
    bool first = true;
    for (const auto& l : atom.letters()) {
        if (!first) {
            s += ',';
        }
        first = false;
        s += l.token;
    }
    return s + "}*";
}

std::string to_string(const IdealRep& rep) {
    if (rep.empty()) {
        return "eps";
    }
    std::string s;
    for (std::size_t i = 0; i < rep.size(); ++i) {
        if (i > 0) {
            s += ' ';
        }
        s += to_string(rep[i]);
    }
    return s;
}

Atom parse_atom(std::string_view token) {
    if (token.size() >= 2 && token.back() == '?') {
        auto name = token.substr(0, token.size() - 1);
        if (!is_valid_letter_token(name)) {
            throw ParseError("invalid letter in atom '" + std::string(token) + "'");
        }
        return Atom::single(Letter{std::string(name)});
    }
    if (token.size() >= 3 && token.front() == '{' && token.substr(token.size() - 2) == "}*") {
        auto inner = token.substr(1, token.size() - 3);
        std::vector<Letter> letters;
        std::size_t pos = 0;
        while (pos <= inner.size()) {
            auto comma = inner.find(',', pos);
            auto piece = inner.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            if (!is_valid_letter_token(piece)) {
                throw ParseError("invalid letter '" + std::string(piece) + "' in atom '" + std::string(token) + "'");
            }
            letters.push_back(Letter{std::string(piece)});
            if (comma == std::string_view::npos) {
                break;
            }
            pos = comma + 1;
        }
        return Atom::star(Alphabet(std::move(letters)));
    }
    throw ParseError("not an atom: '" + std::string(token) + "'");
}

namespace {

std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(text.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

} // namespace

IdealRep parse_rep(std::string_view text, std::optional<Alphabet> ambient) {
    auto tokens = split_ws(text);
    std::vector<Atom> atoms;
    if (!(tokens.size() == 1 && tokens[0] == "eps")) {
        if (tokens.empty()) {
            throw ParseError("empty ideal representation (write 'eps')");
        }
        for (auto t : tokens) {
            atoms.push_back(parse_atom(t));
        }
    }
    IdealRep rep(std::move(atoms));
    if (ambient) {
        if (!rep.ambient.is_subset_of(*ambient)) {
            throw ParseError("ideal representation uses letters outside the ambient alphabet");
        }
        rep.ambient = std::move(*ambient);
    }
    return rep;
}

std::string to_string(const Word& w) {
    if (w.empty()) {
        return "eps";
    }
    bool short_tokens = std::all_of(w.begin(), w.end(), [](const Letter& l) { return l.token.size() == 1; });
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!short_tokens && i > 0) {
            s += ' ';
        }
        s += w[i].token;
    }
    return s;
}

Word parse_word(std::string_view text, const Alphabet* alphabet) {
    auto tokens = split_ws(text);
    Word w;
    if (tokens.size() == 1 && tokens[0] == "eps") {
        return w;
    }
    if (tokens.size() == 1) {
        Letter whole{std::string(tokens[0])};
        if (alphabet != nullptr && alphabet->contains(whole)) {
            return Word{whole};
        }
        for (char c : tokens[0]) {
            w.push_back(Letter{std::string(1, c)});
        }
        return w;
    }
    for (auto t : tokens) {
        w.push_back(Letter{std::string(t)});
    }
    return w;
}

} // namespace downclose
