#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdesplit/rational.hpp"
#include "sdesplit/words.hpp"

namespace sdesplit {

// Finitely supported map Word -> ring element. The ring R must provide
// +, -, *, ==, default construction to zero, and construction from Rational.
template <class R>
class WordPoly {
  public:
    using Terms = std::map<Word, R, GradedLess>;

    WordPoly() = default;
    explicit WordPoly(const Word& w, R c = R(Rational(1))) { add(w, std::move(c)); }

    static WordPoly unit() { return WordPoly(Word{}); }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t term_count() const { return t_.size(); }

    R coeff(const Word& w) const {
        auto it = t_.find(w);
        return it == t_.end() ? R{} : it->second;
    }

    void add(const Word& w, R c) { accumulate(w, c); }

    WordPoly& operator+=(const WordPoly& o) {
        for (const auto& [w, c] : o.t_) accumulate(w, c);
        return *this;
    }
    WordPoly& operator-=(const WordPoly& o) {
        for (const auto& [w, c] : o.t_) accumulate(w, R{} - c);
        return *this;
    }
    friend WordPoly operator+(WordPoly a, const WordPoly& b) { return a += b; }
    friend WordPoly operator-(WordPoly a, const WordPoly& b) { return a -= b; }

    WordPoly operator*(const R& s) const {
        WordPoly out;
        if (s == R{}) return out;
        for (const auto& [w, c] : t_) out.accumulate(w, c * s);
        return out;
    }

    // Concatenation product.
    friend WordPoly operator*(const WordPoly& a, const WordPoly& b) {
        WordPoly out;
        for (const auto& [u, cu] : a.t_)
            for (const auto& [v, cv] : b.t_) out.accumulate(concat(u, v), cu * cv);
        return out;
    }

    friend bool operator==(const WordPoly& a, const WordPoly& b) { return a.t_ == b.t_; }

    void accumulate(const Word& w, const R& c) {
        if (c == R{}) return;
        auto it = t_.find(w);
        if (it == t_.end()) {
            t_.emplace(w, c);
        } else {
            it->second = it->second + c;
            if (it->second == R{}) t_.erase(it);
        }
    }

  private:
    Terms t_;
};

using RatWordPoly = WordPoly<Rational>;

// Shuffle product of two words: the sum over all interleavings preserving the
// internal letter order of each factor, built from the recursion
// u l (sh) v m = (u l (sh) v) m + (u (sh) v m) l.
inline RatWordPoly shuffle(const Word& u, const Word& v) {
    if (u.empty()) return RatWordPoly(v);
    if (v.empty()) return RatWordPoly(u);
    RatWordPoly out;
    RatWordPoly left = shuffle(u, v.without_last());
    for (const auto& [w, c] : left.terms()) out.accumulate(w.appended(v.back()), c);
    RatWordPoly right = shuffle(u.without_last(), v);
    for (const auto& [w, c] : right.terms()) out.accumulate(w.appended(u.back()), c);
    return out;
}

inline RatWordPoly shuffle(const RatWordPoly& p, const RatWordPoly& q) {
    RatWordPoly out;
    for (const auto& [u, cu] : p.terms())
        for (const auto& [v, cv] : q.terms()) out += shuffle(u, v) * (cu * cv);
    return out;
}

// Quasishuffle product over the extended alphabet. The bracket [l,m] is the
// barred letter of A when l = m = A stochastic, and zero otherwise.
inline RatWordPoly quasishuffle(const Word& u, const Word& v, const Alphabet& alphabet) {
    if (u.empty()) return RatWordPoly(v);
    if (v.empty()) return RatWordPoly(u);
    RatWordPoly out;
    RatWordPoly left = quasishuffle(u, v.without_last(), alphabet);
    for (const auto& [w, c] : left.terms()) out.accumulate(w.appended(v.back()), c);
    RatWordPoly right = quasishuffle(u.without_last(), v, alphabet);
    for (const auto& [w, c] : right.terms()) out.accumulate(w.appended(u.back()), c);
    const Letter &l = u.back(), &m = v.back();
    if (l.stochastic() && m.stochastic() && l.id == m.id) {
        Letter bar = alphabet.barred_of(l);
        RatWordPoly inner = quasishuffle(u.without_last(), v.without_last(), alphabet);
        for (const auto& [w, c] : inner.terms()) out.accumulate(w.appended(bar), c);
    }
    return out;
}

inline RatWordPoly quasishuffle(const RatWordPoly& p, const RatWordPoly& q,
                                const Alphabet& alphabet) {
    RatWordPoly out;
    for (const auto& [u, cu] : p.terms())
        for (const auto& [v, cv] : q.terms()) out += quasishuffle(u, v, alphabet) * (cu * cv);
    return out;
}

// ---------------------------------------------------------------------------
// Commutative polynomials in Lyndon-word indeterminates X_L.

// A monomial: sorted multiset of Lyndon words with exponents.
using LyndonMonomial = std::vector<std::pair<Word, int>>;

struct LyndonMonomialLess {
    bool operator()(const LyndonMonomial& a, const LyndonMonomial& b) const {
        GradedLess lt;
        auto ia = a.begin(), ib = b.begin();
        for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
            if (lt(ia->first, ib->first)) return true;
            if (lt(ib->first, ia->first)) return false;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ia == a.end() && ib != b.end();
    }
};

class LyndonPoly {
  public:
    using Terms = std::map<LyndonMonomial, Rational, LyndonMonomialLess>;

    LyndonPoly() = default;
    static LyndonPoly constant(Rational c) {
        LyndonPoly p;
        p.accumulate({}, std::move(c));
        return p;
    }
    static LyndonPoly variable(const Word& lyndon) {
        LyndonPoly p;
        p.accumulate({{lyndon, 1}}, 1);
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void accumulate(LyndonMonomial m, Rational c) {
        if (c == 0) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(std::move(m), std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    LyndonPoly& operator+=(const LyndonPoly& o) {
        for (const auto& [m, c] : o.t_) accumulate(m, c);
        return *this;
    }
    friend LyndonPoly operator+(LyndonPoly a, const LyndonPoly& b) { return a += b; }

    friend LyndonPoly operator*(const LyndonPoly& a, const LyndonPoly& b) {
        LyndonPoly out;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) out.accumulate(merge(ma, mb), ca * cb);
        return out;
    }
    LyndonPoly operator*(const Rational& s) const {
        LyndonPoly out;
        for (const auto& [m, c] : t_) out.accumulate(m, c * s);
        return out;
    }

    friend bool operator==(const LyndonPoly& a, const LyndonPoly& b) { return a.t_ == b.t_; }

    static LyndonMonomial merge(const LyndonMonomial& a, const LyndonMonomial& b) {
        LyndonMonomial out = a;
        for (const auto& [w, e] : b) {
            bool found = false;
            for (auto& [ow, oe] : out)
                if (ow == w) {
                    oe += e;
                    found = true;
                    break;
                }
            if (!found) out.emplace_back(w, e);
        }
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
            return GradedLess{}(x.first, y.first);
        });
        return out;
    }

  private:
    Terms t_;
};

namespace detail {
inline RatWordPoly shuffle_monomial(const LyndonMonomial& m) {
    RatWordPoly acc = RatWordPoly::unit();
    for (const auto& [w, e] : m)
        for (int i = 0; i < e; ++i) acc = shuffle(acc, RatWordPoly(w));
    return acc;
}
}  // namespace detail

// Radford canonical form: the unique commutative polynomial Q in the X_L such
// that evaluating Q under the shuffle product (X_L -> L) reproduces p.
// Triangular elimination against the lexicographically largest remaining word;
// the shuffle of the Lyndon factorization of w has w as its largest word,
// which makes the elimination terminate with exact coefficients.
inline LyndonPoly radford_canonicalize(const RatWordPoly& p) {
    LyndonPoly out;
    RatWordPoly rest = p;
    while (!rest.is_zero()) {
        // largest under (length, lex); shuffle products preserve letter count
        auto it = rest.terms().begin();
        auto largest = it;
        LengthLexLess lt;
        for (; it != rest.terms().end(); ++it)
            if (lt(largest->first, it->first)) largest = it;
        const Word w = largest->first;
        const Rational c = largest->second;
        if (w.empty()) {
            out.accumulate({}, c);
            rest.accumulate(w, -c);
            continue;
        }
        auto factors = lyndon_factorization(w);
        LyndonMonomial mono;
        for (const auto& f : factors) {
            bool found = false;
            for (auto& [fw, fe] : mono)
                if (fw == f) {
                    ++fe;
                    found = true;
                    break;
                }
            if (!found) mono.emplace_back(f, 1);
        }
        std::sort(mono.begin(), mono.end(),
                  [](const auto& x, const auto& y) { return GradedLess{}(x.first, y.first); });
        RatWordPoly sh = detail::shuffle_monomial(mono);
        Rational lead = sh.coeff(w);
        if (lead == 0) throw std::logic_error("radford: lost triangularity");
        for (const auto& [u, cu] : sh.terms())
            if (lt(w, u)) throw std::logic_error("radford: shuffle exceeds leading word");
        Rational q = c / lead;
        out.accumulate(std::move(mono), q);
        rest -= sh * q;
    }
    return out;
}

}  // namespace sdesplit
