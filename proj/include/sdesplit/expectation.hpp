#pragma once

#include <string>
#include <vector>

#include "sdesplit/chen.hpp"
#include "sdesplit/free_series.hpp"
#include "sdesplit/hpoly.hpp"
#include "sdesplit/scheme.hpp"

namespace sdesplit {

// Generators: E of the exact Chen series is exp(h G).
// Stratonovich: G = sum a + (1/2) sum AA; Ito: G = sum a + sum A-bar.
RatWordPoly strat_generator(const Alphabet& alphabet,
                            const LetterFilter& filter = base_letters());
RatWordPoly ito_generator(const Alphabet& alphabet, const LetterFilter& filter = base_letters());

// E J_w over an interval of length lambda*h: zero unless w is a concatenation
// of deterministic letters and pairs AA of equal stochastic letters; then
// (1/2^pairs) (lambda h)^n / n! with n = ||w||.
HPoly expected_J(const Word& w, const Rational& lambda = Rational(1));

// E I_w: (lambda h)^n/n! when all letters are deterministic (barred included),
// zero otherwise.
HPoly expected_I(const Word& w, const Rational& lambda = Rational(1));

// E of a product of iterated integrals over one interval: shuffle (Strat) or
// quasishuffle (Ito) the words together, then apply the linear expectation.
HPoly moment(const std::vector<Word>& words, Interpretation interp, const Rational& lambda,
             const Alphabet& alphabet);

// E of an IIPolynomial: h-powers pass through, atoms factor across cells
// (independent increments); within a cell the joint moment is computed by the
// shuffle formula, so reused increments are handled exactly.
HPoly expected_iipoly(const IIPoly& p, const ElementaryGrid& grid, const Alphabet& alphabet);

FreeSeries<HPoly> expected_series(const IISeries& s, const ElementaryGrid& grid);

// E of the scheme's Chen series, word by word.
FreeSeries<HPoly> expected_scheme_series(const SchemeSpec& s, int truncation2);

// Cross-check route, valid only under the non-overlap hypothesis: the
// factorized product of the per-stage exponentials exp(h (d_i-c_i) G_i).
FreeSeries<HPoly> factorized_expectation(const SchemeSpec& s, int truncation2);

struct HypothesisReport {
    bool holds = true;
    std::vector<std::string> overlaps;  // one line per violating stage pair
};

// True iff, for each stochastic letter, the intervals of the stages carrying
// it have pairwise disjoint interiors.
HypothesisReport check_hypothesis(const SchemeSpec& s);

struct WeakOrderReport {
    Interpretation interpretation = Interpretation::Stratonovich;
    bool hypothesis = true;
    bool decided = false;
    int order = 0;  // sigma (a lower bound if undecided)
    std::vector<std::pair<Word, HPoly>> failing;  // residuals at weight sigma+1
    std::vector<std::string> notes;
    bool inconsistent = false;  // a half-integer-weight expectation residual survived
};

// Weak order: largest sigma <= max_sigma such that expectations of scheme and
// exact coefficients agree on all words of integer weight <= sigma.
WeakOrderReport weak_order(const SchemeSpec& s, int max_sigma);

struct DeterministicOrderReport {
    bool decided = false;
    int order = 0;
    std::vector<Word> failing;  // clone-alphabet words at order+1 letters
};

// Order of the scheme applied to the all-deterministic reinterpretation of
// the system (every letter weight 1, exp-product comparison).
DeterministicOrderReport deterministic_order(const SchemeSpec& s, int max_order);

struct BarrierReport {
    bool applicable = false;  // hypothesis holds
    int sigma = 0;
    bool consistent = true;  // sigma <= 2 whenever applicable
    std::string message;
};

// Weak order of a hypothesis-satisfying splitting never exceeds 2; reaching 3
// would signal an implementation bug, and is reported as an inconsistency.
BarrierReport barrier_check(const SchemeSpec& s);

}  // namespace sdesplit
