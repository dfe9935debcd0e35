#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "sdesplit/free_series.hpp"
#include "sdesplit/word_poly.hpp"

using namespace sdesplit;

namespace {

Word parse(const Alphabet& al, const std::string& text) {
    auto w = al.parse_word(text);
    REQUIRE(w.has_value());
    return *w;
}

std::map<std::string, Rational> as_map(const RatWordPoly& p, const Alphabet& al) {
    std::map<std::string, Rational> out;
    for (const auto& [w, c] : p.terms()) out[al.render(w)] = c;
    return out;
}

}  // namespace

TEST_CASE("word polynomial arithmetic") {
    auto al = Alphabet::make({"a"}, {"A"});
    RatWordPoly p(parse(*al, "aA"), Rational(2));
    RatWordPoly q(parse(*al, "aA"), Rational(-2));
    CHECK((p + q).is_zero());
    CHECK(p.coeff(parse(*al, "aA")) == 2);
    CHECK(p.coeff(parse(*al, "Aa")) == 0);
    // concatenation product
    RatWordPoly prod = RatWordPoly(parse(*al, "a")) * RatWordPoly(parse(*al, "A"));
    CHECK(as_map(prod, *al) == std::map<std::string, Rational>{{"aA", 1}});
}

TEST_CASE("shuffle golden examples") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(as_map(shuffle(parse(*al, "a"), parse(*al, "A")), *al) ==
          std::map<std::string, Rational>{{"aA", 1}, {"Aa", 1}});
    CHECK(as_map(shuffle(parse(*al, "A"), parse(*al, "A")), *al) ==
          std::map<std::string, Rational>{{"AA", 2}});

    // three distinct deterministic letters: kl sh m has exactly three terms
    auto det = Alphabet::make({"k", "l", "m"}, {});
    CHECK(as_map(shuffle(parse(*det, "kl"), parse(*det, "m")), *det) ==
          std::map<std::string, Rational>{{"klm", 1}, {"kml", 1}, {"mkl", 1}});
}

TEST_CASE("shuffle coefficients sum to the interleaving count") {
    auto al = Alphabet::make({"a"}, {"A"});
    auto words = enumerate_words(*al, 4);
    for (const auto& u : words)
        for (const auto& v : words) {
            Rational total = 0;
            const RatWordPoly sh = shuffle(u, v);
            for (const auto& [w, c] : sh.terms()) {
                CHECK(w.size() == u.size() + v.size());
                total += c;
            }
            CHECK(total == Rational(binomial(static_cast<unsigned>(u.size() + v.size()),
                                             static_cast<unsigned>(u.size()))));
        }
}

TEST_CASE("shuffle is commutative and associative") {
    auto al = Alphabet::make({"a"}, {"A"});
    auto words = enumerate_words(*al, 3);
    for (const auto& u : words)
        for (const auto& v : words) {
            CHECK(shuffle(u, v) == shuffle(v, u));
            for (const auto& w : words) {
                if (u.weight2() + v.weight2() + w.weight2() > 5) continue;
                CHECK(shuffle(shuffle(u, v), RatWordPoly(w)) ==
                      shuffle(RatWordPoly(u), shuffle(v, w)));
            }
        }
}

TEST_CASE("quasishuffle golden examples") {
    auto al = Alphabet::make({"a"}, {"A", "B"});
    // the bracket fires only on equal stochastic letters
    CHECK(as_map(quasishuffle(parse(*al, "A"), parse(*al, "A"), *al), *al) ==
          std::map<std::string, Rational>{{"AA", 2}, {"A~", 1}});
    CHECK(as_map(quasishuffle(parse(*al, "A"), parse(*al, "B"), *al), *al) ==
          std::map<std::string, Rational>{{"AB", 1}, {"BA", 1}});
    CHECK(as_map(quasishuffle(parse(*al, "a"), parse(*al, "A"), *al), *al) ==
          std::map<std::string, Rational>{{"aA", 1}, {"Aa", 1}});
    CHECK(as_map(quasishuffle(parse(*al, "AA"), parse(*al, "A"), *al), *al) ==
          std::map<std::string, Rational>{{"AAA", 3}, {"A~A", 1}, {"AA~", 1}});
}

TEST_CASE("quasishuffle is commutative and associative") {
    auto al = Alphabet::make({"a"}, {"A"});
    auto words = enumerate_words(*al, 3, extended_letters());
    for (const auto& u : words)
        for (const auto& v : words) {
            CHECK(quasishuffle(u, v, *al) == quasishuffle(v, u, *al));
            for (const auto& w : words) {
                if (u.weight2() + v.weight2() + w.weight2() > 5) continue;
                CHECK(quasishuffle(quasishuffle(u, v, *al), RatWordPoly(w), *al) ==
                      quasishuffle(RatWordPoly(u), quasishuffle(v, w, *al), *al));
            }
        }
}

namespace {

// Pairs-of-words accumulator for the coproduct compatibility check.
using PairPoly = std::map<std::pair<Word, Word>, Rational>;

void accumulate_pair(PairPoly& m, const Word& a, const Word& b, const Rational& c) {
    auto key = std::make_pair(a, b);
    m[key] += c;
    if (m[key] == 0) m.erase(key);
}

// Deconcatenation coproduct of a product vs product of coproducts.
template <class Product>
void check_hopf_compatibility(const Alphabet& al, int cap2, Product&& product) {
    auto words = enumerate_words(al, cap2, extended_letters());
    for (const auto& u : words)
        for (const auto& v : words) {
            if (u.weight2() + v.weight2() > cap2) continue;
            PairPoly lhs, rhs;
            const RatWordPoly uv = product(u, v);
            for (const auto& [w, c] : uv.terms())
                for (const auto& [w1, w2] : deconcatenations(w)) accumulate_pair(lhs, w1, w2, c);
            for (const auto& [u1, u2] : deconcatenations(u))
                for (const auto& [v1, v2] : deconcatenations(v)) {
                    const RatWordPoly p1 = product(u1, v1), p2 = product(u2, v2);
                    for (const auto& [x, cx] : p1.terms())
                        for (const auto& [y, cy] : p2.terms())
                            accumulate_pair(rhs, x, y, cx * cy);
                }
            CHECK(lhs == rhs);
        }
}

}  // namespace

TEST_CASE("shuffle and quasishuffle are compatible with deconcatenation") {
    auto al = Alphabet::make({"a"}, {"A"});
    check_hopf_compatibility(*al, 4, [](const Word& u, const Word& v) { return shuffle(u, v); });
    check_hopf_compatibility(*al, 4, [&](const Word& u, const Word& v) {
        return quasishuffle(u, v, *al);
    });
}

TEST_CASE("radford canonical form golden example") {
    auto al = Alphabet::make({"a"}, {"A"});
    // Aa = X_A X_a - X_aA: the shuffle A sh a overshoots by aA
    auto lp = radford_canonicalize(RatWordPoly(parse(*al, "Aa")));
    LyndonMonomial product{{parse(*al, "a"), 1}, {parse(*al, "A"), 1}};
    std::sort(product.begin(), product.end(),
              [](const auto& x, const auto& y) { return GradedLess{}(x.first, y.first); });
    REQUIRE(lp.terms().size() == 2);
    CHECK(lp.terms().at(product) == 1);
    CHECK(lp.terms().at(LyndonMonomial{{parse(*al, "aA"), 1}}) == -1);

    // Lyndon words are already canonical
    auto single = radford_canonicalize(RatWordPoly(parse(*al, "aA")));
    REQUIRE(single.terms().size() == 1);
    CHECK(single.terms().begin()->second == 1);
}

TEST_CASE("radford reconstruction is exact up to weight 5/2") {
    auto al = Alphabet::make({"a"}, {"A"});
    for (const auto& w : enumerate_words(*al, 5, extended_letters())) {
        auto lp = radford_canonicalize(RatWordPoly(w));
        RatWordPoly back;
        for (const auto& [m, c] : lp.terms()) back += detail::shuffle_monomial(m) * c;
        CHECK(back == RatWordPoly(w));
        // triangularity: every monomial consists of Lyndon words only
        for (const auto& [m, c] : lp.terms())
            for (const auto& [lw, e] : m) CHECK(is_lyndon(lw));
    }
}

TEST_CASE("exp_concat expands the exponential of a deterministic generator") {
    auto al = Alphabet::make({"a"}, {"A"});
    RatWordPoly g(parse(*al, "a"));
    auto series = exp_concat(g, al, 8);
    CHECK(series.coeff(Word{}) == HPoly(1));
    CHECK(series.coeff(parse(*al, "a")) == HPoly::monomial(1, 1));
    CHECK(series.coeff(parse(*al, "aa")) == HPoly::monomial(Rational(1, 2), 2));
    CHECK(series.coeff(parse(*al, "aaa")) == HPoly::monomial(Rational(1, 6), 3));
    CHECK(series.coeff(parse(*al, "A")) == HPoly());

    // scaling: exp(l h G) picks up l^n
    auto scaled = exp_concat(g, al, 8, Rational(1, 2));
    CHECK(scaled.coeff(parse(*al, "aa")) == HPoly::monomial(Rational(1, 8), 2));

    // generators must have integer weight: a bare stochastic letter is invalid
    CHECK_THROWS_AS(exp_concat(RatWordPoly(parse(*al, "A")), al, 4), std::invalid_argument);
}

TEST_CASE("free series basics: truncation, convolution, pairing") {
    auto al = Alphabet::make({"a"}, {"A"});
    FreeSeries<HPoly> s(al, 2);
    s.set(Word{}, HPoly(1));
    s.set(parse(*al, "a"), HPoly::monomial(1, 1));
    CHECK_THROWS_AS(s.coeff(parse(*al, "aa")), std::out_of_range);
    s.set(parse(*al, "aa"), HPoly(1));  // silently discarded beyond truncation
    CHECK(s.terms().size() == 2);

    auto prod = convolution_product(s, s);
    CHECK(prod.coeff(parse(*al, "a")) == HPoly::monomial(2, 1));

    RatWordPoly p(parse(*al, "a"), Rational(3));
    CHECK(pairing(s, p) == HPoly::monomial(3, 1));
}
