#pragma once

#include <string>
#include <vector>

#include "sdesplit/scheme.hpp"
#include "sdesplit/word_poly.hpp"

namespace sdesplit {

// theta: algebra morphism from words over the starred alphabet to word
// polynomials over the extended alphabet. Letterwise: a -> a, A -> A,
// A* -> A~ - (1/2)AA, extended multiplicatively over concatenation.
RatWordPoly theta(const Word& w, const Alphabet& alphabet);
RatWordPoly theta(const RatWordPoly& p, const Alphabet& alphabet);

// rho: the transpose of theta, mapping extended-alphabet words to starred
// ones. Closed form: replace every barred letter by the starred one, and
// r >= 0 disjoint consecutive pairs AA of equal stochastic letters by A*
// with coefficient (-1/2)^r.
RatWordPoly rho(const Word& w, const Alphabet& alphabet);
RatWordPoly rho(const RatWordPoly& p, const Alphabet& alphabet);

struct HoffmanViolation {
    Word u, v;
    RatWordPoly lhs, rhs;  // rho(u qs v) vs rho(u) sh rho(v)
};

// Exhaustive check of rho(u qsh v) = rho(u) sh rho(v) over extended-alphabet
// word pairs with combined weight <= max_weight2/2.
std::vector<HoffmanViolation> verify_hoffman_iso(const Alphabet& alphabet, int max_weight2);

// Conversion of an Ito system to the Stratonovich system with the same
// solutions: the drift gains, per stochastic letter A, the correction field
// -(1/2) f_A' f_A carried by the starred letter.
struct ConversionRecipe {
    SDESystem system;  // Stratonovich, over the same master alphabet
    struct Correction {
        Letter starred;
        Letter base;
        std::string recipe;  // human-readable field description
    };
    std::vector<Correction> corrections;
    std::string note;
};
ConversionRecipe convert_system(const SDESystem& s);

// Renders I_w as the linear combination of Stratonovich atoms given by rho(w),
// e.g. "I_AA = J_AA - (1/2) J_A*".
std::string iterated_integral_identity(const Word& w, const Alphabet& alphabet);

}  // namespace sdesplit
