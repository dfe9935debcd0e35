#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sdesplit/chen.hpp"
#include "sdesplit/scheme.hpp"

namespace sdesplit::mc {

// Counter-based normal variate: bit-reproducible for a fixed logical index,
// independent of evaluation order. The index identifies one bridge draw.
double normal01(std::uint64_t seed, std::uint32_t path, std::uint32_t step,
                std::uint16_t letter, std::uint16_t cell, std::uint16_t level,
                std::uint32_t pos);

// f(x) = N x + e. A zero-size N means the zero field.
struct AffineField {
    Eigen::MatrixXd N;
    Eigen::VectorXd e;
    bool zero() const { return N.size() == 0; }
};

struct FieldSystem {
    int dim = 0;
    std::map<std::uint16_t, AffineField> fields;  // by letter id

    const AffineField& field(const Letter& l) const;
    bool has(const Letter& l) const { return fields.count(l.id) && !fields.at(l.id).zero(); }
};

// The independence-lemma construction: combined field with component i equal
// to coordinate i+1 (component d is the constant 1), split so the letter at
// position j of w owns component d-j+1. All fields are affine and jointly
// nilpotent.
FieldSystem witness_system(const Alphabet& alphabet, const Word& w);

// Catalog systems for the convergence experiments.
FieldSystem ou_system(const Alphabet& alphabet, double theta, double sigma);  // {a},{A}
FieldSystem drift_split_system(const Alphabet& alphabet, double sigma);       // {a,b},{A}
FieldSystem linear_system(const Alphabet& alphabet, double a, double sigma);  // {a},{A}, both ~x

// f_w via the Jacobian recursion f_w = f'_{suffix} f_{front}; words with a
// barred letter vanish because affine fields have zero second derivative.
Eigen::VectorXd word_basis_function(const FieldSystem& sys, const Word& w,
                                    const Eigen::VectorXd& x);

// exp(M) by scaling-and-squaring with a truncated series (tolerance 1e-14;
// exact for nilpotent M).
Eigen::MatrixXd expm(const Eigen::MatrixXd& M);

// Brownian increments of one macro step over the elementary cells, refinable
// dyadically; refining never changes the coarser increments.
class BrownianStep {
  public:
    BrownianStep(std::uint64_t seed, std::uint32_t path, std::uint32_t step,
                 const ElementaryGrid& grid, double h);

    // 2^level increments of the letter's Brownian motion over the cell
    const std::vector<double>& increments(std::uint16_t letter, int cell, int level);
    double cell_increment(std::uint16_t letter, int cell);
    double cell_length(int cell) const;  // in absolute time
    double h() const { return h_; }

  private:
    std::uint64_t seed_;
    std::uint32_t path_, step_;
    const ElementaryGrid* grid_;
    double h_;
    std::map<std::tuple<std::uint16_t, int, int>, std::vector<double>> cache_;
};

struct SimOptions {
    int ref_level = 5;    // reference substeps per cell = 2^ref_level
    int subdivision = 256;  // quadrature points per cell for iterated integrals
    double final_time = 1.0;
};

// One path of the splitting scheme (or of the fine reference integrator)
// over `steps` macro steps of size h, consuming the increments of `seed`.
Eigen::VectorXd simulate_path(const SchemeSpec& s, const FieldSystem& sys,
                              const Eigen::VectorXd& x0, double h, int steps,
                              std::uint64_t seed, std::uint32_t path, const SimOptions& opts,
                              bool reference);

// Pathwise iterated integrals over grid cells by the quadrature recursion
// (midpoint for Stratonovich, left point for Ito).
class IntegralSampler {
  public:
    IntegralSampler(AlphabetPtr alphabet, const ElementaryGrid& grid, Interpretation interp,
                    int subdivision, BrownianStep& bs);
    double value(int cell, const Word& w) const;
    double eval(const IIPoly& p) const;

  private:
    AlphabetPtr alphabet_;
    const ElementaryGrid* grid_;
    Interpretation interp_;
    int subdivision_;
    BrownianStep* bs_;
    mutable std::map<std::pair<int, Word>, double> cache_;
    friend struct SamplerAccess;
};

struct SlopeReport {
    std::vector<double> h_values;
    std::vector<double> errors;
    double slope = 0, stderr_ = 0;
    int paths = 0;
    std::uint64_t seed = 0;
    std::string verdict;  // ok | exact-scheme | inconclusive
    std::vector<std::string> notes;
};

using Observable = std::function<double(const Eigen::VectorXd&)>;

SlopeReport estimate_strong_order(const SchemeSpec& s, const FieldSystem& sys,
                                  const Eigen::VectorXd& x0, const std::vector<double>& h_list,
                                  int paths, std::uint64_t seed, const SimOptions& opts = {});

SlopeReport estimate_weak_order(const SchemeSpec& s, const FieldSystem& sys,
                                const Observable& chi, const Eigen::VectorXd& x0,
                                const std::vector<double>& h_list, int paths,
                                std::uint64_t seed, const SimOptions& opts = {});

struct CoeffCheck {
    double symbolic_mean = 0, direct_mean = 0, z = 0;
    double stderr_ = 0, quadrature_budget = 0;
    bool pass = false;
};

// Statistical oracle for one canonical coefficient: evaluates the symbolic
// IIPolynomial pathwise and compares against the scheme applied to the
// witness system of w (whose first endpoint component isolates the
// w-coefficient at the origin).
CoeffCheck verify_symbolic_coefficient(const SchemeSpec& s, const Word& w, int paths,
                                       std::uint64_t seed, const SimOptions& opts = {});

}  // namespace sdesplit::mc
