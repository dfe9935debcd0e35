#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdesplit/expectation.hpp"

using namespace sdesplit;

namespace {

Word parse(const Alphabet& al, const std::string& text) {
    auto w = al.parse_word(text);
    REQUIRE(w.has_value());
    return *w;
}

}  // namespace

TEST_CASE("expected Stratonovich integrals: the pairing formula") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(expected_J(parse(*al, "AA")) == HPoly::monomial(Rational(1, 2), 1));
    CHECK(expected_J(parse(*al, "AAAA")) == HPoly::monomial(Rational(1, 8), 2));
    CHECK(expected_J(parse(*al, "AAA")) == HPoly());
    CHECK(expected_J(parse(*al, "A")) == HPoly());
    CHECK(expected_J(parse(*al, "a")) == HPoly::monomial(1, 1));
    CHECK(expected_J(parse(*al, "aa")) == HPoly::monomial(Rational(1, 2), 2));
    CHECK(expected_J(parse(*al, "aAA")) == HPoly::monomial(Rational(1, 4), 2));
    CHECK(expected_J(parse(*al, "AaA")) == HPoly());  // the pair must be adjacent
    CHECK(expected_J(Word{}) == HPoly(1));
    // interval scaling
    CHECK(expected_J(parse(*al, "AA"), Rational(1, 2)) == HPoly::monomial(Rational(1, 4), 1));
    CHECK(expected_J(parse(*al, "a"), Rational(1, 2)) == HPoly::monomial(Rational(1, 2), 1));
}

TEST_CASE("expected Ito integrals vanish unless every letter is deterministic") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(expected_I(parse(*al, "a")) == HPoly::monomial(1, 1));
    CHECK(expected_I(parse(*al, "A~")) == HPoly::monomial(1, 1));
    CHECK(expected_I(parse(*al, "aA~")) == HPoly::monomial(Rational(1, 2), 2));
    CHECK(expected_I(parse(*al, "A")) == HPoly());
    CHECK(expected_I(parse(*al, "AA")) == HPoly());
    CHECK(expected_I(parse(*al, "aA")) == HPoly());
    CHECK(expected_I(parse(*al, "AA"), Rational(1, 3)) == HPoly());
}

TEST_CASE("moments via shuffle and quasishuffle") {
    auto al = Alphabet::make({"a"}, {"A"});
    Word A = parse(*al, "A");
    // E[I_A^2] = E[I of (2AA + A~)] = h
    CHECK(moment({A, A}, Interpretation::Ito, 1, *al) == HPoly::monomial(1, 1));
    // E[J_A^2] = 2 E J_AA = h
    CHECK(moment({A, A}, Interpretation::Stratonovich, 1, *al) == HPoly::monomial(1, 1));
    CHECK(moment({A, A, A}, Interpretation::Ito, 1, *al) == HPoly());
    CHECK(moment({A, A, A}, Interpretation::Stratonovich, 1, *al) == HPoly());
    // fourth moment of a Gaussian increment: 3 h^2
    CHECK(moment({A, A, A, A}, Interpretation::Stratonovich, 1, *al) ==
          HPoly::monomial(3, 2));
    CHECK(moment({A, A, A, A}, Interpretation::Ito, 1, *al) == HPoly::monomial(3, 2));
    // scaling with the interval length
    CHECK(moment({A, A}, Interpretation::Ito, Rational(1, 2), *al) ==
          HPoly::monomial(Rational(1, 2), 1));
}

TEST_CASE("expected IIPolynomials factor over cells and respect reuse") {
    auto al = Alphabet::make({"a"}, {"A"});
    auto grid = ElementaryGrid::uniform(2);
    Word A = parse(*al, "A");
    IIPoly same_cell = IIPoly::atom(1, A) * IIPoly::atom(1, A);
    CHECK(expected_iipoly(same_cell, grid, *al) == HPoly::monomial(Rational(1, 2), 1));
    IIPoly cross_cell = IIPoly::atom(1, A) * IIPoly::atom(2, A);
    CHECK(expected_iipoly(cross_cell, grid, *al) == HPoly());
    IIPoly with_h = IIPoly::h_power(Rational(3), 1) * IIPoly::atom(1, A) * IIPoly::atom(1, A);
    CHECK(expected_iipoly(with_h, grid, *al) == HPoly::monomial(Rational(3, 2), 2));
    CHECK(expected_iipoly(IIPoly::atom(1, A), grid, *al) == HPoly());
}

TEST_CASE("generators: expectation of the exact series is exp(h G)") {
    auto al = Alphabet::make({"a"}, {"A"});
    // Stratonovich generator: a + (1/2) AA
    auto gs = strat_generator(*al);
    CHECK(gs.coeff(parse(*al, "a")) == 1);
    CHECK(gs.coeff(parse(*al, "AA")) == Rational(1, 2));
    CHECK(gs.term_count() == 2);
    // Ito generator: a + A~
    auto gi = ito_generator(*al);
    CHECK(gi.coeff(parse(*al, "a")) == 1);
    CHECK(gi.coeff(parse(*al, "A~")) == 1);
    CHECK(gi.term_count() == 2);

    auto grid = ElementaryGrid::uniform(1);
    SDESystem strat{al, Interpretation::Stratonovich};
    CHECK(expected_series(exact_chen_series(strat, grid, 6), grid) == exp_concat(gs, al, 6));
    SDESystem ito{al, Interpretation::Ito};
    CHECK(expected_series(exact_chen_series(ito, grid, 6), grid) == exp_concat(gi, al, 6));
}

TEST_CASE("counterexample: expected scheme coefficients and weak failure") {
    auto ce = builtin("counterexample-7.2");
    const Alphabet& al = *ce.system.alphabet;
    auto es = expected_scheme_series(ce, 4);
    CHECK(es.coeff(Word{}) == HPoly(1));
    CHECK(es.coeff(parse(al, "A")) == HPoly());
    CHECK(es.coeff(parse(al, "a")) == HPoly::monomial(1, 1));
    CHECK(es.coeff(parse(al, "AA")) == HPoly::monomial(Rational(1, 2), 1));
    CHECK(es.coeff(parse(al, "A~")) == HPoly::monomial(1, 1));

    auto r = weak_order(ce, 3);
    CHECK(r.interpretation == Interpretation::Ito);
    CHECK(!r.hypothesis);
    CHECK(r.decided);
    CHECK(!r.inconsistent);
    CHECK(r.order == 0);
    REQUIRE(r.failing.size() == 1);
    CHECK(al.render(r.failing[0].first) == "AA");
    CHECK(r.failing[0].second == HPoly::monomial(Rational(1, 2), 1));
}

TEST_CASE("hypothesis check: per-letter interval overlap") {
    CHECK(check_hypothesis(builtin("lie-trotter")).holds);
    CHECK(check_hypothesis(builtin("strang-outer-a")).holds);
    auto ce = check_hypothesis(builtin("counterexample-7.2"));
    CHECK(!ce.holds);
    REQUIRE(!ce.overlaps.empty());
    CHECK(ce.overlaps[0].find("letter A") != std::string::npos);

    // two noises may interleave as long as each letter's own intervals are disjoint
    SchemeSpec s;
    s.system.alphabet = Alphabet::make({}, {"A", "B"});
    s.system.interpretation = Interpretation::Stratonovich;
    Letter A = *s.system.alphabet->find("A"), B = *s.system.alphabet->find("B");
    s.stages.push_back({{A}, 0, Rational(1, 2)});
    s.stages.push_back({{B}, 0, 1});
    s.stages.push_back({{A}, Rational(1, 2), 1});
    CHECK(check_hypothesis(s).holds);
    // sharing an endpoint is not an overlap, touching intervals are fine
    s.stages[2].c = Rational(1, 2);
    CHECK(check_hypothesis(s).holds);
    // genuine overlap of the same letter
    s.stages[2].c = Rational(1, 4);
    CHECK(!check_hypothesis(s).holds);
}

TEST_CASE("weak orders of the catalog") {
    auto strang = weak_order(builtin("strang-outer-a"), 3);
    CHECK(strang.decided);
    CHECK(strang.order == 2);
    CHECK(!strang.failing.empty());  // the weak-3 conditions do fail

    auto strang_ito = weak_order(builtin("strang-outer-a-ito"), 3);
    CHECK(strang_ito.decided);
    CHECK(strang_ito.order == 2);

    auto lt = weak_order(builtin("lie-trotter"), 3);
    CHECK(lt.decided);
    CHECK(lt.order == 1);

    auto exact = weak_order(builtin("exact-aA"), 3);
    CHECK(!exact.decided);
    CHECK(exact.order == 3);
    CHECK(exact.failing.empty());
}

TEST_CASE("deterministic orders of the catalog") {
    auto strang = deterministic_order(builtin("strang-outer-a"), 4);
    CHECK(strang.decided);
    CHECK(strang.order == 2);

    auto lt = deterministic_order(builtin("lie-trotter"), 4);
    CHECK(lt.decided);
    CHECK(lt.order == 1);

    auto exact = deterministic_order(builtin("exact-aA"), 4);
    CHECK(!exact.decided);
}

TEST_CASE("weak order equals deterministic order under the hypothesis") {
    for (const auto& name : builtin_names()) {
        auto s = builtin(name);
        if (!check_hypothesis(s).holds) continue;
        auto w = weak_order(s, 3);
        auto d = deterministic_order(s, 3);
        CHECK(w.decided == d.decided);
        if (w.decided && d.decided) CHECK(w.order == d.order);
    }
}

TEST_CASE("barrier: hypothesis-satisfying splittings cap at weak order 2") {
    auto strang = barrier_check(builtin("strang-outer-a"));
    CHECK(strang.applicable);
    CHECK(strang.consistent);
    CHECK(strang.sigma == 2);
    CHECK(strang.message == "sigma=2, barrier respected");

    auto ce = barrier_check(builtin("counterexample-7.2"));
    CHECK(!ce.applicable);
    CHECK(ce.message == "hypothesis violated; barrier theorem not applicable");

    for (const auto& name : builtin_names()) {
        auto b = barrier_check(builtin(name));
        CHECK(b.consistent);
    }
}

TEST_CASE("factorized expectation agrees with the general route") {
    for (const auto& name : builtin_names()) {
        auto s = builtin(name);
        if (!check_hypothesis(s).holds) continue;
        CHECK(expected_scheme_series(s, 5) == factorized_expectation(s, 5));
    }
    // ... and detects the counterexample's reuse: the routes must differ
    auto ce = builtin("counterexample-7.2");
    CHECK(!(expected_scheme_series(ce, 4) == factorized_expectation(ce, 4)));
}
