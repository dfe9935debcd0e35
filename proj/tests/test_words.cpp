#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sdesplit/words.hpp"

using namespace sdesplit;

namespace {

Word parse(const Alphabet& al, const std::string& text) {
    auto w = al.parse_word(text);
    REQUIRE(w.has_value());
    return *w;
}

}  // namespace

TEST_CASE("alphabet construction inserts companions in declared order") {
    auto al = Alphabet::make({"a", "b"}, {"A", "B"});
    // a b A A~ A* B B~ B*
    CHECK(al->size() == 8);
    CHECK(al->find("a")->kind == LetterKind::Deterministic);
    CHECK(al->find("A")->kind == LetterKind::Stochastic);
    CHECK(al->find("A~")->kind == LetterKind::Barred);
    CHECK(al->find("B*")->kind == LetterKind::Starred);
    CHECK(al->find("A~")->base == al->find("A")->id);
    CHECK(al->barred_of(*al->find("B")) == *al->find("B~"));
    CHECK(al->starred_of(*al->find("A")) == *al->find("A*"));
    CHECK(al->base_of(*al->find("B*")) == *al->find("B"));
    CHECK(!al->find("c"));
    CHECK_THROWS(Alphabet::make({}, {}));
    CHECK_THROWS(Alphabet::make({"a", "a"}, {}));
}

TEST_CASE("weights: deterministic and companion letters weigh 1, stochastic 1/2") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(al->find("a")->weight2() == 2);
    CHECK(al->find("A")->weight2() == 1);
    CHECK(al->find("A~")->weight2() == 2);
    CHECK(al->find("A*")->weight2() == 2);
    CHECK(parse(*al, "aAA~").weight2() == 5);
    CHECK(parse(*al, "aAA~").weight() == Rational(5, 2));
}

TEST_CASE("word parsing and rendering round-trip, longest match wins") {
    auto al = Alphabet::make({"a"}, {"A"});
    CHECK(al->render(Word{}) == "1");
    CHECK(parse(*al, "1").empty());
    // "A~" must parse as one barred letter, not A followed by junk
    auto w = parse(*al, "AA~A*");
    CHECK(w.size() == 3);
    CHECK(w[1].kind == LetterKind::Barred);
    CHECK(w[2].kind == LetterKind::Starred);
    CHECK(al->render(w) == "AA~A*");
    CHECK(!al->parse_word("Ax"));

    auto multi = Alphabet::make({"ab"}, {"b"});
    auto v = parse(*multi, "abb");  // longest match: "ab" then "b"
    CHECK(v.size() == 2);
    CHECK(v[0] == *multi->find("ab"));
}

TEST_CASE("deterministic clone keeps base symbols and drops companions") {
    auto al = Alphabet::make({"a"}, {"A"});
    auto clone = al->deterministic_clone();
    CHECK(clone->size() == 2);
    CHECK(clone->find("A")->kind == LetterKind::Deterministic);
    CHECK(clone->find("A")->weight2() == 2);
    CHECK(!clone->find("A~"));
}

TEST_CASE("enumerate_words counts by weight") {
    auto al = Alphabet::make({"a"}, {"A"});
    // weight2 <= 2 over {a, A}: 1, A, a, AA
    auto words = enumerate_words(*al, 2);
    REQUIRE(words.size() == 4);
    CHECK(al->render(words[0]) == "1");
    CHECK(al->render(words[1]) == "A");
    CHECK(al->render(words[2]) == "a");
    CHECK(al->render(words[3]) == "AA");

    // letters of weight {1,2}: count(n) = count(n-1) + count(n-2)
    std::vector<std::size_t> totals;
    for (int cap = 0; cap <= 8; ++cap) totals.push_back(enumerate_words(*al, cap).size());
    for (int cap = 2; cap <= 8; ++cap) {
        std::size_t at_cap = totals[cap] - totals[cap - 1];
        std::size_t prev1 = totals[cap - 1] - totals[cap - 2];
        std::size_t prev2 = cap >= 3 ? totals[cap - 2] - totals[cap - 3] : 1;
        CHECK(at_cap == prev1 + prev2);
    }

    // the extended filter adds the barred letter only
    auto ext = enumerate_words(*al, 2, extended_letters());
    CHECK(ext.size() == 5);
    auto star = enumerate_words(*al, 2, star_letters());
    CHECK(star.size() == 5);
    auto all = enumerate_words(*al, 2, all_letters());
    CHECK(all.size() == 6);
}

TEST_CASE("lyndon words: counts match the necklace-counting formula") {
    auto al = Alphabet::make({"x", "y"}, {});
    // number of binary Lyndon words by length: 2, 1, 2, 3, 6
    auto lyndon = enumerate_lyndon(*al, 10);
    std::map<std::size_t, int> by_len;
    for (const auto& w : lyndon) by_len[w.size()]++;
    CHECK(by_len[1] == 2);
    CHECK(by_len[2] == 1);
    CHECK(by_len[3] == 2);
    CHECK(by_len[4] == 3);
    CHECK(by_len[5] == 6);
}

TEST_CASE("is_lyndon agrees with the rotation definition") {
    auto al = Alphabet::make({"x", "y"}, {});
    for (const auto& w : enumerate_words(*al, 12)) {
        if (w.empty()) continue;
        bool smallest = true;
        for (std::size_t r = 1; r < w.size(); ++r) {
            std::vector<Letter> rot;
            for (std::size_t i = 0; i < w.size(); ++i) rot.push_back(w[(i + r) % w.size()]);
            if (!(w < Word(rot))) smallest = false;
        }
        CHECK(is_lyndon(w) == smallest);
    }
}

TEST_CASE("lyndon factorization is nonincreasing, Lyndon, and concatenates back") {
    auto al = Alphabet::make({"x", "y"}, {});
    for (const auto& w : enumerate_words(*al, 12)) {
        if (w.empty()) continue;
        auto factors = lyndon_factorization(w);
        REQUIRE(!factors.empty());
        Word back;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            CHECK(is_lyndon(factors[i]));
            if (i > 0) CHECK(!(factors[i - 1] < factors[i]));
            back = concat(back, factors[i]);
        }
        CHECK(back == w);
    }
}

TEST_CASE("lyndon factorization golden examples") {
    auto al = Alphabet::make({"a"}, {"A"});  // order: a < A (declared order)
    auto render_factors = [&](const std::string& text) {
        std::string out;
        for (const auto& f : lyndon_factorization(parse(*al, text))) {
            if (!out.empty()) out += "|";
            out += al->render(f);
        }
        return out;
    };
    CHECK(render_factors("aA") == "aA");
    CHECK(render_factors("Aa") == "A|a");
    CHECK(render_factors("AA") == "A|A");
    CHECK(render_factors("aAaA") == "aA|aA");
    CHECK(render_factors("aaAA") == "aaAA");
}

TEST_CASE("deconcatenations and word helpers") {
    auto al = Alphabet::make({"a"}, {"A"});
    auto w = parse(*al, "aAA");
    auto cuts = deconcatenations(w);
    REQUIRE(cuts.size() == 4);
    CHECK(cuts[0].first.empty());
    CHECK(cuts[2].first == parse(*al, "aA"));
    CHECK(cuts[2].second == parse(*al, "A"));
    CHECK(concat(cuts[1].first, cuts[1].second) == w);

    CHECK(w.without_last() == parse(*al, "aA"));
    CHECK(w.appended(*al->find("a")) == parse(*al, "aAAa"));
    CHECK(!w.all_deterministic());
    CHECK(parse(*al, "aA~").all_deterministic());
    CHECK(w.contains_kind(LetterKind::Stochastic));
    CHECK(!w.contains_kind(LetterKind::Barred));
}

TEST_CASE("graded order sorts by weight first, then lexicographically") {
    auto al = Alphabet::make({"a"}, {"A"});
    GradedLess lt;
    CHECK(lt(parse(*al, "AA"), parse(*al, "a")) == false);  // equal weight: a < AA lexicographically
    CHECK(lt(parse(*al, "a"), parse(*al, "AA")));
    CHECK(lt(parse(*al, "A"), parse(*al, "a")));    // weight 1/2 < 1
    CHECK(lt(parse(*al, "a"), parse(*al, "AAA")));  // weight 1 < 3/2
    CHECK(lt(parse(*al, "aA"), parse(*al, "Aa")));  // a < A in declared order
}
