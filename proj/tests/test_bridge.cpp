#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "sdesplit/bridge.hpp"

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

TEST_CASE("rho golden values") {
    auto al = Alphabet::make({"a"}, {"A"});
    const Rational h(1, 2);
    CHECK(as_map(rho(parse(*al, "AA"), *al), *al) ==
          std::map<std::string, Rational>{{"AA", 1}, {"A*", -h}});
    CHECK(as_map(rho(parse(*al, "A~"), *al), *al) ==
          std::map<std::string, Rational>{{"A*", 1}});
    CHECK(as_map(rho(parse(*al, "aA"), *al), *al) ==
          std::map<std::string, Rational>{{"aA", 1}});
    // one pairable run of three letters: two single pairings
    CHECK(as_map(rho(parse(*al, "aAAA"), *al), *al) ==
          std::map<std::string, Rational>{
              {"aAAA", 1}, {"aA*A", -h}, {"aAA*", -h}});
    // four letters: three single pairings plus the disjoint double pairing
    CHECK(as_map(rho(parse(*al, "AAAA"), *al), *al) ==
          std::map<std::string, Rational>{{"AAAA", 1},
                                          {"A*AA", -h},
                                          {"AA*A", -h},
                                          {"AAA*", -h},
                                          {"A*A*", Rational(1, 4)}});
    // distinct noises never pair
    auto two = Alphabet::make({}, {"A", "B"});
    CHECK(as_map(rho(parse(*two, "AB"), *two), *two) ==
          std::map<std::string, Rational>{{"AB", 1}});
    CHECK_THROWS_AS(rho(parse(*al, "A*"), *al), std::invalid_argument);
}

TEST_CASE("theta golden values and multiplicativity") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(as_map(theta(parse(*al, "A*"), *al), *al) ==
          std::map<std::string, Rational>{{"A~", 1}, {"AA", Rational(-1, 2)}});
    CHECK(as_map(theta(parse(*al, "aA"), *al), *al) ==
          std::map<std::string, Rational>{{"aA", 1}});
    // theta is a concatenation morphism
    auto star_words = enumerate_words(*al, 4, star_letters());
    for (const auto& u : star_words)
        for (const auto& v : star_words) {
            if (u.weight2() + v.weight2() > 4) continue;
            CHECK(theta(concat(u, v), *al) ==
                  theta(RatWordPoly(u), *al) * theta(RatWordPoly(v), *al));
        }
    CHECK_THROWS_AS(theta(parse(*al, "A~"), *al), std::invalid_argument);
}

TEST_CASE("rho and theta are mutually transposed") {
    auto al = Alphabet::make({"a"}, {"A"});
    auto ext = enumerate_words(*al, 5, extended_letters());
    auto star = enumerate_words(*al, 5, star_letters());
    for (const auto& w : ext)
        for (const auto& q : star)
            CHECK(rho(w, *al).coeff(q) == theta(q, *al).coeff(w));
}

TEST_CASE("rho intertwines quasishuffle with shuffle") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(verify_hoffman_iso(*al, 4).empty());
    auto two = Alphabet::make({}, {"A", "B"});
    CHECK(verify_hoffman_iso(*two, 3).empty());
}

TEST_CASE("iterated integral identities render canonically") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(iterated_integral_identity(parse(*al, "AA"), *al) == "I_AA = J_AA - (1/2) J_A*");
    CHECK(iterated_integral_identity(parse(*al, "A~"), *al) == "I_A~ = J_A*");
    CHECK(iterated_integral_identity(parse(*al, "aA"), *al) == "I_aA = J_aA");
}

TEST_CASE("ito to stratonovich system conversion") {
    auto al = Alphabet::make({"a"}, {"A"});
    SDESystem ito{al, Interpretation::Ito};
    auto recipe = convert_system(ito);
    CHECK(recipe.system.interpretation == Interpretation::Stratonovich);
    CHECK(recipe.system.alphabet == al);
    REQUIRE(recipe.corrections.size() == 1);
    CHECK(recipe.corrections[0].starred == *al->find("A*"));
    CHECK(recipe.corrections[0].base == *al->find("A"));
    CHECK(recipe.corrections[0].recipe == "f_A* = -(1/2) f_A' f_A");

    SDESystem strat{al, Interpretation::Stratonovich};
    CHECK_THROWS_AS(convert_system(strat), std::invalid_argument);
}
