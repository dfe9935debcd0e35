#include "sdesplit/expectation.hpp"

#include <map>
#include <sstream>

namespace sdesplit {

namespace {

Rational rational_pow(const Rational& x, int n) {
    Rational out(1);
    for (int i = 0; i < n; ++i) out *= x;
    return out;
}

}  // namespace

RatWordPoly strat_generator(const Alphabet& alphabet, const LetterFilter& filter) {
    RatWordPoly g;
    const Rational half(1, 2);
    for (const auto& l : alphabet.letters(filter)) {
        if (l.kind == LetterKind::Deterministic || l.kind == LetterKind::Starred ||
            l.kind == LetterKind::Barred)
            g.add(Word(l), 1);
        else if (l.stochastic())
            g.add(concat(Word(l), Word(l)), half);
    }
    return g;
}

RatWordPoly ito_generator(const Alphabet& alphabet, const LetterFilter& filter) {
    RatWordPoly g;
    for (const auto& l : alphabet.letters(filter)) {
        if (l.kind == LetterKind::Deterministic)
            g.add(Word(l), 1);
        else if (l.stochastic())
            g.add(Word(alphabet.barred_of(l)), 1);
    }
    return g;
}

HPoly expected_J(const Word& w, const Rational& lambda) {
    int pairs = 0;
    std::size_t i = 0;
    while (i < w.size()) {
        const Letter& l = w[i];
        if (!l.stochastic()) {
            ++i;
            continue;
        }
        // a stochastic letter must open an immediate equal pair
        if (i + 1 < w.size() && w[i + 1].stochastic() && w[i + 1].id == l.id) {
            ++pairs;
            i += 2;
        } else {
            return HPoly{};
        }
    }
    int n = w.weight2() / 2;
    return HPoly::monomial(
        rational_pow(lambda, n) / (rational_pow(Rational(2), pairs) * factorial(n)), n);
}

HPoly expected_I(const Word& w, const Rational& lambda) {
    if (!w.all_deterministic()) return HPoly{};
    int n = static_cast<int>(w.size());
    return HPoly::monomial(rational_pow(lambda, n) / factorial(n), n);
}

HPoly moment(const std::vector<Word>& words, Interpretation interp, const Rational& lambda,
             const Alphabet& alphabet) {
    RatWordPoly p = RatWordPoly::unit();
    for (const auto& w : words)
        p = interp == Interpretation::Stratonovich ? shuffle(p, RatWordPoly(w))
                                                   : quasishuffle(p, RatWordPoly(w), alphabet);
    HPoly out;
    for (const auto& [w, c] : p.terms())
        out += (interp == Interpretation::Stratonovich ? expected_J(w, lambda)
                                                       : expected_I(w, lambda)) *
               HPoly(c);
    return out;
}

HPoly expected_iipoly(const IIPoly& p, const ElementaryGrid& grid, const Alphabet& alphabet) {
    HPoly out;
    for (const auto& [m, c] : p.terms()) {
        HPoly term = HPoly::monomial(c, m.hpow);
        std::map<int, std::vector<Word>> by_cell;
        for (const auto& a : m.atoms)
            for (int i = 0; i < a.exp; ++i) by_cell[a.cell].push_back(a.word);
        // atoms over distinct cells are independent; within a cell, the joint
        // moment comes from the shuffle formula (atoms are Stratonovich)
        for (const auto& [cell, ws] : by_cell)
            term = term * moment(ws, Interpretation::Stratonovich, grid.length(cell), alphabet);
        out += term;
    }
    return out;
}

FreeSeries<HPoly> expected_series(const IISeries& s, const ElementaryGrid& grid) {
    FreeSeries<HPoly> out(s.alphabet(), s.truncation2());
    for (const auto& [w, p] : s.terms()) out.set(w, expected_iipoly(p, grid, *s.alphabet()));
    return out;
}

FreeSeries<HPoly> expected_scheme_series(const SchemeSpec& s, int truncation2) {
    ElementaryGrid grid = ElementaryGrid::for_scheme(s);
    return expected_series(scheme_chen_series(s, grid, truncation2), grid);
}

FreeSeries<HPoly> factorized_expectation(const SchemeSpec& s, int truncation2) {
    const Alphabet& a = *s.system.alphabet;
    FreeSeries<HPoly> out = FreeSeries<HPoly>::unit(s.system.alphabet, truncation2);
    for (const auto& st : s.stages) {
        LetterFilter in_stage = [&st](const Letter& l) { return st.contains(l); };
        RatWordPoly g = s.system.interpretation == Interpretation::Stratonovich
                            ? strat_generator(a, in_stage)
                            : ito_generator(a, in_stage);
        out = convolution_product(out,
                                  exp_concat(g, s.system.alphabet, truncation2, st.d - st.c));
    }
    return out;
}

HypothesisReport check_hypothesis(const SchemeSpec& s) {
    HypothesisReport r;
    for (const auto& A : s.system.alphabet->stochastic_letters()) {
        std::vector<std::pair<std::size_t, const Stage*>> carriers;
        for (std::size_t i = 0; i < s.stages.size(); ++i)
            if (s.stages[i].contains(A)) carriers.emplace_back(i, &s.stages[i]);
        for (std::size_t i = 0; i < carriers.size(); ++i) {
            for (std::size_t j = i + 1; j < carriers.size(); ++j) {
                const Stage &x = *carriers[i].second, &y = *carriers[j].second;
                Rational lo = std::max(x.c, y.c), hi = std::min(x.d, y.d);
                if (lo < hi) {
                    std::ostringstream os;
                    os << "letter " << s.system.alphabet->symbol(A) << ": stages "
                       << carriers[i].first + 1 << " and " << carriers[j].first + 1
                       << " overlap on (" << to_string(lo) << ", " << to_string(hi) << ")";
                    r.overlaps.push_back(os.str());
                }
            }
        }
    }
    r.holds = r.overlaps.empty();
    return r;
}

WeakOrderReport weak_order(const SchemeSpec& s, int max_sigma) {
    WeakOrderReport r;
    r.interpretation = s.system.interpretation;
    r.hypothesis = check_hypothesis(s).holds;
    const bool strat = r.interpretation == Interpretation::Stratonovich;
    const int trunc2 = 2 * max_sigma;
    FreeSeries<HPoly> scheme = expected_scheme_series(s, trunc2);
    const Alphabet& a = *s.system.alphabet;
    auto words = enumerate_words(a, trunc2, strat ? base_letters() : extended_letters());

    auto residual = [&](const Word& w) {
        return scheme.coeff(w) - (strat ? expected_J(w) : expected_I(w));
    };

    // the weak conditions live at integer weights; half-integer residuals must
    // vanish identically, which is asserted rather than assumed
    for (const auto& w : words) {
        if (w.empty() || w.weight2() % 2 == 0) continue;
        if (!residual(w).is_zero()) {
            r.inconsistent = true;
            r.notes.push_back("nonzero expectation at half-integer weight for word " +
                              a.render(w));
        }
    }

    for (int sigma = 1; sigma <= max_sigma; ++sigma) {
        for (const auto& w : words) {
            if (w.weight2() != 2 * sigma) continue;
            HPoly res = residual(w);
            if (!res.is_zero()) r.failing.emplace_back(w, std::move(res));
        }
        if (!r.failing.empty()) {
            r.decided = true;
            r.order = sigma - 1;
            return r;
        }
    }
    r.order = max_sigma;
    r.notes.push_back("all weak conditions hold up to the cap; order is a lower bound");
    return r;
}

DeterministicOrderReport deterministic_order(const SchemeSpec& s, int max_order) {
    DeterministicOrderReport r;
    AlphabetPtr clone = s.system.alphabet->deterministic_clone();
    const int trunc2 = 2 * max_order;
    auto clone_generator = [&](const LetterFilter& f) {
        RatWordPoly g;
        for (const auto& e : clone->letters())
            if (f(*s.system.alphabet->find(clone->symbol(e)))) g.add(Word(e), 1);
        return g;
    };
    FreeSeries<HPoly> scheme = FreeSeries<HPoly>::unit(clone, trunc2);
    for (const auto& st : s.stages) {
        LetterFilter in_stage = [&st](const Letter& l) { return st.contains(l); };
        scheme = convolution_product(
            scheme, exp_concat(clone_generator(in_stage), clone, trunc2, st.d - st.c));
    }
    FreeSeries<HPoly> exact = exp_concat(clone_generator(base_letters()), clone, trunc2);

    auto words = enumerate_words(*clone, trunc2, all_letters());
    for (int n = 1; n <= max_order; ++n) {
        for (const auto& w : words) {
            if (static_cast<int>(w.size()) != n) continue;
            if (!(scheme.coeff(w) == exact.coeff(w))) r.failing.push_back(w);
        }
        if (!r.failing.empty()) {
            r.decided = true;
            r.order = n - 1;
            return r;
        }
    }
    r.order = max_order;
    return r;
}

BarrierReport barrier_check(const SchemeSpec& s) {
    BarrierReport r;
    HypothesisReport h = check_hypothesis(s);
    if (!h.holds) {
        r.applicable = false;
        r.message = "hypothesis violated; barrier theorem not applicable";
        return r;
    }
    r.applicable = true;
    WeakOrderReport w = weak_order(s, 3);
    r.sigma = w.order;
    if (!w.decided || w.order >= 3) {
        // A genuine splitting satisfying the hypothesis cannot reach weak
        // order 3; a scheme with no strong residuals at all is simply exact
        // and is not constrained by the barrier.
        if (local_error_expansion(s, 8).empty()) {
            r.message = "scheme is exact up to the checked weight; barrier not applicable";
        } else {
            r.consistent = false;
            r.message = "weak order >= 3 under the hypothesis: internal inconsistency";
        }
    } else {
        r.message = "sigma=" + std::to_string(w.order) + ", barrier respected";
    }
    return r;
}

}  // namespace sdesplit
