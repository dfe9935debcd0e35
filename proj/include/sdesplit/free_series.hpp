#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "sdesplit/hpoly.hpp"
#include "sdesplit/word_poly.hpp"
#include "sdesplit/words.hpp"

namespace sdesplit {

// Graded formal series over words, materialized up to a truncation weight.
// Zero coefficients are omitted; equality compares up to the common
// truncation. Iteration order is (weight, lex), deterministically.
template <class R>
class FreeSeries {
  public:
    using Terms = std::map<Word, R, GradedLess>;

    FreeSeries() = default;
    FreeSeries(AlphabetPtr alphabet, int truncation2)
        : alphabet_(std::move(alphabet)), trunc2_(truncation2) {}

    const AlphabetPtr& alphabet() const { return alphabet_; }
    int truncation2() const { return trunc2_; }
    const Terms& terms() const { return t_; }

    R coeff(const Word& w) const {
        if (w.weight2() > trunc2_)
            throw std::out_of_range("FreeSeries: word beyond truncation");
        auto it = t_.find(w);
        return it == t_.end() ? R{} : it->second;
    }

    void set(const Word& w, R c) {
        if (w.weight2() > trunc2_) return;  // discard beyond truncation
        if (c == R{})
            t_.erase(w);
        else
            t_[w] = std::move(c);
    }

    void accumulate(const Word& w, const R& c) {
        if (w.weight2() > trunc2_ || c == R{}) return;
        auto it = t_.find(w);
        if (it == t_.end()) {
            t_.emplace(w, c);
        } else {
            it->second = it->second + c;
            if (it->second == R{}) t_.erase(it);
        }
    }

    static FreeSeries unit(AlphabetPtr alphabet, int truncation2) {
        FreeSeries s(std::move(alphabet), truncation2);
        s.set(Word{}, R(Rational(1)));
        return s;
    }

    friend bool operator==(const FreeSeries& a, const FreeSeries& b) { return a.t_ == b.t_; }

  private:
    AlphabetPtr alphabet_;
    int trunc2_ = 0;
    Terms t_;
};

// Coefficient of each word in the product series is the sum over
// deconcatenations of products of the factors' coefficients.
template <class R>
FreeSeries<R> convolution_product(const FreeSeries<R>& a, const FreeSeries<R>& b) {
    if (a.alphabet() != b.alphabet())
        throw std::invalid_argument("convolution_product: alphabet mismatch");
    FreeSeries<R> out(a.alphabet(), std::min(a.truncation2(), b.truncation2()));
    for (const auto& [u, cu] : a.terms()) {
        if (u.weight2() > out.truncation2()) continue;
        for (const auto& [v, cv] : b.terms()) {
            if (u.weight2() + v.weight2() > out.truncation2()) continue;
            out.accumulate(concat(u, v), cu * cv);
        }
    }
    return out;
}

// (S, p) = sum_w S_w p_w.
template <class R>
R pairing(const FreeSeries<R>& s, const RatWordPoly& p) {
    R out{};
    for (const auto& [w, c] : p.terms()) out = out + s.coeff(w) * R(c);
    return out;
}

template <class R>
struct RelationViolation {
    Word u, v;
    R lhs, rhs;  // (S, u*v) vs (S,u)(S,v)
};

namespace detail {
template <class R, class Product>
std::vector<RelationViolation<R>> check_relations(const FreeSeries<R>& s,
                                                  const LetterFilter& filter,
                                                  Product&& product) {
    if (!(s.coeff(Word{}) == R(Rational(1))))
        throw std::invalid_argument("relation check requires S_empty = 1");
    std::vector<RelationViolation<R>> out;
    auto words = enumerate_words(*s.alphabet(), s.truncation2(), filter);
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = i; j < words.size(); ++j) {
            const Word &u = words[i], &v = words[j];
            if (u.weight2() + v.weight2() > s.truncation2()) continue;
            R lhs = pairing(s, product(u, v));
            R rhs = s.coeff(u) * s.coeff(v);
            if (!(lhs == rhs)) out.push_back({u, v, lhs, rhs});
        }
    }
    return out;
}
}  // namespace detail

// Empty result iff (S, u sh v) = (S,u)(S,v) for all u,v within truncation.
template <class R>
std::vector<RelationViolation<R>> check_shuffle_relations(
    const FreeSeries<R>& s, const LetterFilter& filter = base_letters()) {
    return detail::check_relations(s, filter,
                                   [](const Word& u, const Word& v) { return shuffle(u, v); });
}

template <class R>
std::vector<RelationViolation<R>> check_quasishuffle_relations(
    const FreeSeries<R>& s, const LetterFilter& filter = extended_letters()) {
    const Alphabet& a = *s.alphabet();
    return detail::check_relations(
        s, filter, [&a](const Word& u, const Word& v) { return quasishuffle(u, v, a); });
}

// exp(h G) as a series with coefficients polynomial in h; powers of the
// word polynomial g are taken with the concatenation product.
inline FreeSeries<HPoly> exp_concat(const RatWordPoly& g, AlphabetPtr alphabet,
                                    int truncation2, Rational scale = Rational(1)) {
    for (const auto& [w, c] : g.terms()) {
        if (w.empty()) throw std::invalid_argument("exp_concat: generator has an empty-word term");
        if (w.weight2() % 2 != 0 || w.weight2() == 0)
            throw std::invalid_argument("exp_concat: generator words must have integer weight >= 1");
    }
    FreeSeries<HPoly> out(alphabet, truncation2);
    RatWordPoly power = RatWordPoly::unit();
    Rational fact(1);
    int max_power = truncation2 / 2;
    for (int r = 0; r <= max_power; ++r) {
        if (r > 0) {
            power = power * g;
            fact *= r;
        }
        Rational scale_pow(1);
        for (int i = 0; i < r; ++i) scale_pow *= scale;
        for (const auto& [w, c] : power.terms()) {
            if (w.weight2() > truncation2) continue;
            out.accumulate(w, HPoly::monomial(c * scale_pow / fact, r));
        }
    }
    return out;
}

}  // namespace sdesplit
