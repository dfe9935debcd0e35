#include "sdesplit/chen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "sdesplit/bridge.hpp"

namespace sdesplit {

ElementaryGrid ElementaryGrid::for_scheme(const SchemeSpec& s) {
    std::set<Rational> pts{Rational(0), Rational(1)};
    for (const auto& st : s.stages)
        if (st.has_stochastic()) {
            pts.insert(st.c);
            pts.insert(st.d);
        }
    ElementaryGrid g;
    g.breakpoints.assign(pts.begin(), pts.end());
    return g;
}

ElementaryGrid ElementaryGrid::uniform(int cells) {
    if (cells < 1) throw std::invalid_argument("grid needs at least one cell");
    ElementaryGrid g;
    for (int i = 0; i <= cells; ++i) g.breakpoints.emplace_back(i, cells);
    return g;
}

std::vector<int> ElementaryGrid::covering(const Rational& c, const Rational& d) const {
    if (!(c < d)) throw std::invalid_argument("covering: requires c < d");
    std::vector<int> out;
    for (int k = 1; k <= cells(); ++k)
        if (c <= breakpoints[k - 1] && breakpoints[k] <= d) out.push_back(k);
    if (out.empty() || breakpoints[out.front() - 1] != c || breakpoints[out.back()] != d)
        throw std::invalid_argument("covering: [c,d] is not tiled by grid cells");
    return out;
}

const LyndonPoly& CanonicalCache::canonical(const Word& w) {
    auto it = cache_.find(w);
    if (it == cache_.end())
        it = cache_.emplace(w, radford_canonicalize(RatWordPoly(w))).first;
    return it->second;
}

namespace {

Rational rational_pow(const Rational& x, int n) {
    Rational out(1);
    for (int i = 0; i < n; ++i) out *= x;
    return out;
}

}  // namespace

IIPoly instantiate_canonical(const LyndonPoly& lp, int cell, const Rational& lambda) {
    IIPoly out;
    for (const auto& [mono, c] : lp.terms()) {
        IIMonomial m;
        Rational coeff = c;
        for (const auto& [L, e] : mono) {
            if (L.all_deterministic()) {
                int n = static_cast<int>(L.size());
                coeff *= rational_pow(rational_pow(lambda, n) / factorial(n), e);
                m.hpow += n * e;
            } else {
                m.atoms.push_back({cell, L, e});
            }
        }
        std::sort(m.atoms.begin(), m.atoms.end(), atom_var_less);
        out.accumulate(std::move(m), coeff);
    }
    return out;
}

IISeries elementary_chen_series(AlphabetPtr alphabet, const ElementaryGrid& grid, int cell,
                                int truncation2, const LetterFilter& filter,
                                CanonicalCache* cache) {
    CanonicalCache local;
    CanonicalCache& cc = cache ? *cache : local;
    const Rational lambda = grid.length(cell);
    IISeries out(alphabet, truncation2);
    for (const auto& w : enumerate_words(*alphabet, truncation2, filter))
        out.set(w, instantiate_canonical(cc.canonical(w), cell, lambda));
    return out;
}

IIPoly chen_decompose(const Word& w, const IISeries& left, const IISeries& right) {
    IIPoly out;
    for (const auto& [u, v] : deconcatenations(w)) out += left.coeff(u) * right.coeff(v);
    return out;
}

namespace {

LetterFilter in_stage_base(const Stage& st) {
    return [&st](const Letter& l) {
        return (l.kind == LetterKind::Deterministic || l.kind == LetterKind::Stochastic) &&
               st.contains(l);
    };
}

// A stage evolving only deterministic fields over [c,d]: every word over its
// letters has the time-simplex coefficient ((d-c)h)^n/n!, signed when c > d.
IISeries deterministic_stage_series(AlphabetPtr alphabet, const Stage& st, int truncation2) {
    IISeries out(alphabet, truncation2);
    const Rational mu = st.d - st.c;
    for (const auto& w : enumerate_words(*alphabet, truncation2, in_stage_base(st))) {
        int n = static_cast<int>(w.size());
        out.set(w, IIPoly::h_power(rational_pow(mu, n) / factorial(n), n));
    }
    return out;
}

// Stratonovich signature of [c,d] over the filtered letters, as the Chen
// product of the covered cells.
IISeries interval_series(AlphabetPtr alphabet, const ElementaryGrid& grid, const Rational& c,
                         const Rational& d, int truncation2, const LetterFilter& filter,
                         CanonicalCache& cache) {
    IISeries out = IISeries::unit(alphabet, truncation2);
    for (int k : grid.covering(c, d))
        out = convolution_product(
            out, elementary_chen_series(alphabet, grid, k, truncation2, filter, &cache));
    return out;
}

// Pairing against rho turns a starred Stratonovich signature into the Ito
// series over the extended words selected by the filter.
IISeries ito_series_from_star(const IISeries& star, const LetterFilter& ext_filter) {
    IISeries out(star.alphabet(), star.truncation2());
    const Alphabet& a = *star.alphabet();
    for (const auto& w : enumerate_words(a, star.truncation2(), ext_filter))
        out.set(w, pairing(star, rho(w, a)));
    return out;
}

}  // namespace

IISeries exact_chen_series(const SDESystem& system, const ElementaryGrid& grid,
                           int truncation2) {
    CanonicalCache cache;
    if (system.interpretation == Interpretation::Stratonovich)
        return interval_series(system.alphabet, grid, 0, 1, truncation2, base_letters(), cache);
    IISeries star =
        interval_series(system.alphabet, grid, 0, 1, truncation2, star_letters(), cache);
    return ito_series_from_star(star, extended_letters());
}

IISeries stage_chen_series(const SchemeSpec& s, std::size_t stage_index,
                           const ElementaryGrid& grid, int truncation2, CanonicalCache* cache) {
    CanonicalCache local;
    CanonicalCache& cc = cache ? *cache : local;
    const Stage& st = s.stages.at(stage_index);
    AlphabetPtr alphabet = s.system.alphabet;
    if (!st.has_stochastic()) return deterministic_stage_series(alphabet, st, truncation2);
    if (s.system.interpretation == Interpretation::Stratonovich)
        return interval_series(alphabet, grid, st.c, st.d, truncation2, in_stage_base(st), cc);
    LetterFilter star_filter = [&st](const Letter& l) {
        if (l.kind == LetterKind::Barred) return false;
        if (l.kind == LetterKind::Starred) return st.contains(Letter{l.base});
        return st.contains(l);
    };
    LetterFilter ext_filter = [&st](const Letter& l) {
        if (l.kind == LetterKind::Starred) return false;
        if (l.kind == LetterKind::Barred) return st.contains(Letter{l.base});
        return st.contains(l);
    };
    IISeries star = interval_series(alphabet, grid, st.c, st.d, truncation2, star_filter, cc);
    return ito_series_from_star(star, ext_filter);
}

IISeries scheme_chen_series(const SchemeSpec& s, const ElementaryGrid& grid, int truncation2) {
    CanonicalCache cache;
    IISeries out = IISeries::unit(s.system.alphabet, truncation2);
    for (std::size_t i = 0; i < s.stages.size(); ++i)
        out = convolution_product(out, stage_chen_series(s, i, grid, truncation2, &cache));
    return out;
}

IISeries scheme_chen_series(const SchemeSpec& s, int truncation2) {
    return scheme_chen_series(s, ElementaryGrid::for_scheme(s), truncation2);
}

int ii_weight2(const IIMonomial& m) {
    int w = 2 * m.hpow;
    for (const auto& a : m.atoms) w += a.exp * a.word.weight2();
    return w;
}

bool is_homogeneous(const IIPoly& p, int weight2) {
    for (const auto& [m, c] : p.terms())
        if (ii_weight2(m) != weight2) return false;
    return true;
}

namespace {

// Words carrying strong order conditions: all words (Stratonovich), or the
// extended words without a trailing barred letter (Ito).
bool condition_word(const Word& w, Interpretation interp) {
    if (w.empty()) return false;
    return interp == Interpretation::Stratonovich || w.back().kind != LetterKind::Barred;
}

LetterFilter condition_filter(Interpretation interp) {
    return interp == Interpretation::Stratonovich ? base_letters() : extended_letters();
}

}  // namespace

StrongOrderReport strong_order(const SchemeSpec& s, int max_check_weight2) {
    StrongOrderReport r;
    r.interpretation = s.system.interpretation;
    r.grid = ElementaryGrid::for_scheme(s);
    IISeries exact = exact_chen_series(s.system, r.grid, max_check_weight2);
    IISeries scheme = scheme_chen_series(s, r.grid, max_check_weight2);
    auto words =
        enumerate_words(*s.system.alphabet, max_check_weight2, condition_filter(r.interpretation));
    for (int v2 = 1; v2 <= max_check_weight2; ++v2) {
        for (const auto& w : words) {
            if (w.weight2() != v2 || !condition_word(w, r.interpretation)) continue;
            IIPoly res = scheme.coeff(w) - exact.coeff(w);
            if (!res.is_zero()) r.failing.emplace_back(w, std::move(res));
        }
        if (!r.failing.empty()) {
            r.decided = true;
            r.order2 = v2 - 1;
            return r;
        }
    }
    r.order2 = max_check_weight2 - 1;
    r.notes.push_back("all conditions hold up to the weight cap; order is a lower bound");
    return r;
}

std::vector<std::pair<Word, IIPoly>> local_error_expansion(const SchemeSpec& s,
                                                           int truncation2) {
    ElementaryGrid grid = ElementaryGrid::for_scheme(s);
    IISeries exact = exact_chen_series(s.system, grid, truncation2);
    IISeries scheme = scheme_chen_series(s, grid, truncation2);
    std::vector<std::pair<Word, IIPoly>> out;
    for (const auto& w : enumerate_words(*s.system.alphabet, truncation2,
                                         condition_filter(s.system.interpretation))) {
        if (!condition_word(w, s.system.interpretation)) continue;
        IIPoly res = scheme.coeff(w) - exact.coeff(w);
        if (!res.is_zero()) out.emplace_back(w, std::move(res));
    }
    return out;
}

std::vector<Word> lyndon_reduced_conditions(const SDESystem& system, int target_weight2) {
    std::vector<Word> out;
    for (const auto& w : enumerate_lyndon(*system.alphabet, target_weight2,
                                          condition_filter(system.interpretation)))
        if (condition_word(w, system.interpretation)) out.push_back(w);
    return out;
}

}  // namespace sdesplit
