#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sdesplit/free_series.hpp"
#include "sdesplit/iipoly.hpp"
#include "sdesplit/scheme.hpp"

namespace sdesplit {

// A Chen series with IIPolynomial coefficients.
using IISeries = FreeSeries<IIPoly>;

// Elementary cells of one step: the partition of [0,1] induced by the
// endpoints of the stochastic stages. Cells are numbered from 1; atoms over
// different cells are independent, atoms over the same cell are shared
// between stages (which is what makes increment reuse analyzable).
struct ElementaryGrid {
    std::vector<Rational> breakpoints;  // increasing, first 0, last 1

    static ElementaryGrid for_scheme(const SchemeSpec& s);
    static ElementaryGrid uniform(int cells);

    int cells() const { return static_cast<int>(breakpoints.size()) - 1; }
    Rational length(int cell) const { return breakpoints.at(cell) - breakpoints.at(cell - 1); }

    // 1-based indices of the cells tiling [c,d]; c and d must be breakpoints.
    std::vector<int> covering(const Rational& c, const Rational& d) const;

    friend bool operator==(const ElementaryGrid& a, const ElementaryGrid& b) {
        return a.breakpoints == b.breakpoints;
    }
};

// Shared Radford canonical forms; instantiating per cell is cheap, the
// elimination is not.
class CanonicalCache {
  public:
    const LyndonPoly& canonical(const Word& w);

  private:
    std::map<Word, LyndonPoly, GradedLess> cache_;
};

// Lyndon polynomial -> IIPolynomial over one cell of length lambda*h:
// all-deterministic Lyndon factors become the scalar (lambda h)^n/n!,
// factors with a stochastic letter become atoms X[cell, L].
IIPoly instantiate_canonical(const LyndonPoly& lp, int cell, const Rational& lambda);

// Stratonovich Chen series of one elementary cell: coefficient of w is the
// canonical IIPolynomial of J_w over that cell.
IISeries elementary_chen_series(AlphabetPtr alphabet, const ElementaryGrid& grid, int cell,
                                int truncation2, const LetterFilter& filter = base_letters(),
                                CanonicalCache* cache = nullptr);

// Coefficient of w in the convolution of two adjacent-interval series.
IIPoly chen_decompose(const Word& w, const IISeries& left, const IISeries& right);

// Full-step series of the exact solution over the grid. Stratonovich: words
// over the base alphabet; Ito: words over the extended alphabet, each
// coefficient the pairing of the starred Stratonovich series with rho(w).
IISeries exact_chen_series(const SDESystem& system, const ElementaryGrid& grid, int truncation2);

// Series of one stage, restricted to words over its letters (Ito: plus their
// barred letters). Deterministic stages have scalar coefficients
// ((d-c)h)^n/n! and may run backward.
IISeries stage_chen_series(const SchemeSpec& s, std::size_t stage_index,
                           const ElementaryGrid& grid, int truncation2,
                           CanonicalCache* cache = nullptr);

// Convolution of the stage series in temporal order.
IISeries scheme_chen_series(const SchemeSpec& s, const ElementaryGrid& grid, int truncation2);
IISeries scheme_chen_series(const SchemeSpec& s, int truncation2);

// Twice the grading weight of a monomial (h weighs 1, X[k,L] weighs ||L||).
int ii_weight2(const IIMonomial& m);
bool is_homogeneous(const IIPoly& p, int weight2);

struct StrongOrderReport {
    Interpretation interpretation = Interpretation::Stratonovich;
    bool decided = false;
    int order2 = 0;  // twice the strong order mu (a lower bound if undecided)
    std::vector<std::pair<Word, IIPoly>> failing;  // residuals at weight mu + 1/2
    ElementaryGrid grid;
    std::vector<std::string> notes;
};

// Compares scheme vs exact canonical coefficients in increasing weight.
// Stratonovich: all words; Ito: only words not ending in a barred letter.
StrongOrderReport strong_order(const SchemeSpec& s, int max_check_weight2);

// All nonzero residuals (scheme - exact) up to the truncation, by weight.
std::vector<std::pair<Word, IIPoly>> local_error_expansion(const SchemeSpec& s, int truncation2);

// Lyndon words of weight <= target; an independent generating set of the
// strong order conditions. Ito: extended alphabet, no trailing barred letter.
std::vector<Word> lyndon_reduced_conditions(const SDESystem& system, int target_weight2);

}  // namespace sdesplit
