#include "sdesplit/selfcheck.hpp"

#include <functional>
#include <sstream>

#include "sdesplit/bridge.hpp"
#include "sdesplit/chen.hpp"
#include "sdesplit/expectation.hpp"

namespace sdesplit {
namespace {

using Check = std::function<std::string()>;  // returns "" on success

std::string plural(std::size_t n, const char* what) {
    return std::to_string(n) + " " + what + (n == 1 ? "" : "s");
}

// Catalog schemes, each at the requested truncation.
std::vector<SchemeSpec> catalog() {
    std::vector<SchemeSpec> out;
    for (const auto& n : builtin_names()) out.push_back(builtin(n));
    return out;
}

std::string check_series_relations(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    auto grid = ElementaryGrid::uniform(2);
    {
        SDESystem strat{al, Interpretation::Stratonovich};
        auto v = check_shuffle_relations(exact_chen_series(strat, grid, cap2));
        if (!v.empty()) return "exact Stratonovich series: " + plural(v.size(), "shuffle violation");
    }
    {
        SDESystem ito{al, Interpretation::Ito};
        auto v = check_quasishuffle_relations(exact_chen_series(ito, grid, cap2));
        if (!v.empty()) return "exact Ito series: " + plural(v.size(), "quasishuffle violation");
    }
    return "";
}

std::string check_scheme_relations(int cap2) {
    for (const auto& s : catalog()) {
        auto series = scheme_chen_series(s, cap2);
        std::size_t bad = 0;
        if (s.system.interpretation == Interpretation::Stratonovich)
            bad = check_shuffle_relations(series).size();
        else
            bad = check_quasishuffle_relations(series).size();
        if (bad) return s.name + ": " + plural(bad, "multiplicativity violation");
    }
    return "";
}

std::string check_hoffman(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    auto v = verify_hoffman_iso(*al, cap2);
    if (!v.empty()) return plural(v.size(), "violation of rho(u*v) = rho(u) sh rho(v)");
    return "";
}

std::string check_transposition(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    auto ext = enumerate_words(*al, cap2, extended_letters());
    auto star = enumerate_words(*al, cap2, star_letters());
    for (const auto& w : ext)
        for (const auto& q : star) {
            Rational lhs = rho(w, *al).coeff(q);
            Rational rhs = theta(q, *al).coeff(w);
            if (lhs != rhs)
                return "pair (" + al->render(w) + ", " + al->render(q) + "): " + to_string(lhs) +
                       " vs " + to_string(rhs);
        }
    return "";
}

std::string check_radford(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    for (const auto& w : enumerate_words(*al, cap2, extended_letters())) {
        auto lp = radford_canonicalize(RatWordPoly(w));
        RatWordPoly back;
        for (const auto& [m, c] : lp.terms()) back += detail::shuffle_monomial(m) * c;
        if (!(back == RatWordPoly(w))) return "reconstruction failed for " + al->render(w);
    }
    return "";
}

std::string check_expectation_generators(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    auto grid = ElementaryGrid::uniform(1);
    {
        SDESystem strat{al, Interpretation::Stratonovich};
        auto lhs = expected_series(exact_chen_series(strat, grid, cap2), grid);
        auto rhs = exp_concat(strat_generator(*al), al, cap2);
        if (!(lhs == rhs)) return "Stratonovich expectation differs from exp(h G)";
    }
    {
        SDESystem ito{al, Interpretation::Ito};
        auto lhs = expected_series(exact_chen_series(ito, grid, cap2), grid);
        auto rhs = exp_concat(ito_generator(*al), al, cap2);
        if (!(lhs == rhs)) return "Ito expectation differs from exp(h G)";
    }
    return "";
}

std::string check_expectation_characters(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    // Ito expectations form a shuffle character (only all-deterministic words
    // have nonzero expectation, and those shuffle like ordinary integrals) ...
    auto ito = exp_concat(ito_generator(*al), al, cap2);
    auto vq = check_shuffle_relations(ito);
    if (!vq.empty()) return "Ito expectation: " + plural(vq.size(), "shuffle violation");
    // ... while Stratonovich ones are not a shuffle character: the pair (A,A)
    // must violate, since E[J_A^2] = h but E[J_A]^2 = 0.
    auto strat = exp_concat(strat_generator(*al), al, cap2);
    auto vs = check_shuffle_relations(strat);
    Word A(*al->find("A"));
    bool found = false;
    for (const auto& v : vs)
        if (v.u == A && v.v == A) found = true;
    if (!found) return "expected a shuffle violation at (A, A) for Stratonovich expectations";
    return "";
}

std::string check_factorized_expectation(int cap2) {
    for (const auto& s : catalog()) {
        if (!check_hypothesis(s).holds) continue;
        if (!(expected_scheme_series(s, cap2) == factorized_expectation(s, cap2)))
            return s.name + ": general and factorized expectation routes disagree";
    }
    return "";
}

std::string check_semigroup(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    auto g = strat_generator(*al);
    Rational l1(1, 3), l2(1, 5);
    auto lhs = convolution_product(exp_concat(g, al, cap2, l1), exp_concat(g, al, cap2, l2));
    auto rhs = exp_concat(g, al, cap2, l1 + l2);
    if (!(lhs == rhs)) return "exp(l1 h G) * exp(l2 h G) != exp((l1+l2) h G)";
    return "";
}

std::string check_grid_refinement(int cap2) {
    auto al = Alphabet::make({"a"}, {"A"});
    SDESystem strat{al, Interpretation::Stratonovich};
    // Chen composition is associative: grouping four quarter-cells as two
    // halves gives the same series as the flat convolution.
    auto grid = ElementaryGrid::uniform(4);
    CanonicalCache cache;
    std::vector<IISeries> e;
    for (int c = 1; c <= 4; ++c)
        e.push_back(elementary_chen_series(al, grid, c, cap2, base_letters(), &cache));
    auto grouped = convolution_product(convolution_product(e[0], e[1]),
                                       convolution_product(e[2], e[3]));
    auto flat = convolution_product(convolution_product(convolution_product(e[0], e[1]), e[2]),
                                    e[3]);
    if (!(grouped == flat)) return "cell grouping changed the composed series";
    // The expectation of the exact series must not depend on the grid.
    auto g1 = ElementaryGrid::uniform(1);
    auto g3 = ElementaryGrid::uniform(3);
    auto e1 = expected_series(exact_chen_series(strat, g1, cap2), g1);
    auto e3 = expected_series(exact_chen_series(strat, g3, cap2), g3);
    if (!(e1 == e3)) return "expectation of the exact series depends on the grid";
    return "";
}

std::string check_residual_homogeneity(int cap2) {
    for (const auto& s : catalog()) {
        for (const auto& [w, res] : local_error_expansion(s, cap2))
            if (!is_homogeneous(res, w.weight2()))
                return s.name + ": residual of " + s.system.alphabet->render(w) +
                       " is not homogeneous";
    }
    return "";
}

std::string check_lyndon_sufficiency(int cap2) {
    // If the Lyndon-word residuals vanish up to a weight, all residuals do.
    for (const auto& s : catalog()) {
        auto residuals = local_error_expansion(s, cap2);
        for (int v2 = 1; v2 <= cap2; ++v2) {
            bool lyndon_ok = true, all_ok = true;
            for (const auto& [w, res] : residuals) {
                if (w.weight2() > v2 || res.is_zero()) continue;
                all_ok = false;
                if (is_lyndon(w)) lyndon_ok = false;
            }
            if (lyndon_ok && !all_ok)
                return s.name + ": non-Lyndon residual survives at weight " +
                       std::to_string(v2) + "/2";
        }
    }
    return "";
}

}  // namespace

SelfCheckReport run_selfcheck(int max_weight2) {
    const int cap2 = max_weight2;
    std::vector<std::pair<std::string, Check>> checks = {
        {"series-multiplicativity-exact", [&] { return check_series_relations(cap2); }},
        {"series-multiplicativity-schemes", [&] { return check_scheme_relations(cap2); }},
        {"quasishuffle-to-shuffle-isomorphism", [&] { return check_hoffman(cap2); }},
        {"theta-rho-transposition", [&] { return check_transposition(cap2); }},
        {"canonical-form-reconstruction", [&] { return check_radford(cap2); }},
        {"expectation-exponential-generators", [&] { return check_expectation_generators(cap2); }},
        {"expectation-character-properties", [&] { return check_expectation_characters(cap2); }},
        {"factorized-expectation-consistency", [&] { return check_factorized_expectation(cap2); }},
        {"exponential-semigroup", [&] { return check_semigroup(cap2); }},
        {"grid-refinement-invariance", [&] { return check_grid_refinement(cap2); }},
        {"residual-homogeneity", [&] { return check_residual_homogeneity(cap2); }},
        {"lyndon-condition-sufficiency", [&] { return check_lyndon_sufficiency(cap2); }},
    };
    SelfCheckReport report;
    for (auto& [name, fn] : checks) {
        CheckItem item{name, false, ""};
        try {
            item.detail = fn();
            item.pass = item.detail.empty();
        } catch (const std::exception& e) {
            item.detail = std::string("exception: ") + e.what();
        }
        report.items.push_back(std::move(item));
    }
    return report;
}

}  // namespace sdesplit
