#include "sdesplit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sdesplit::mc {

// ---------------------------------------------------------------------------
// Philox 4x32-10

namespace {

struct PhiloxBlock {
    std::uint32_t x[4];
};

PhiloxBlock philox(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                   std::uint32_t k0, std::uint32_t k1) {
    std::uint32_t ctr[4] = {c0, c1, c2, c3};
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = std::uint64_t(0xD2511F53u) * ctr[0];
        std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * ctr[2];
        std::uint32_t n0 = std::uint32_t(p1 >> 32) ^ ctr[1] ^ k0;
        std::uint32_t n1 = std::uint32_t(p1);
        std::uint32_t n2 = std::uint32_t(p0 >> 32) ^ ctr[3] ^ k1;
        std::uint32_t n3 = std::uint32_t(p0);
        ctr[0] = n0;
        ctr[1] = n1;
        ctr[2] = n2;
        ctr[3] = n3;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return {{ctr[0], ctr[1], ctr[2], ctr[3]}};
}

}  // namespace

double normal01(std::uint64_t seed, std::uint32_t path, std::uint32_t step,
                std::uint16_t letter, std::uint16_t cell, std::uint16_t level,
                std::uint32_t pos) {
    PhiloxBlock b = philox(path, step, (std::uint32_t(letter) << 16) | cell,
                           (std::uint32_t(level) << 24) | (pos & 0xFFFFFFu),
                           std::uint32_t(seed), std::uint32_t(seed >> 32));
    double u1 = ((std::uint64_t(b.x[0]) << 32 | b.x[1]) + 1.0) * 0x1p-64;  // (0,1]
    double u2 = (std::uint64_t(b.x[2]) << 32 | b.x[3]) * 0x1p-64;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// ---------------------------------------------------------------------------
// Fields

namespace {
const AffineField kZeroField{};
}

const AffineField& FieldSystem::field(const Letter& l) const {
    auto it = fields.find(l.id);
    return it == fields.end() ? kZeroField : it->second;
}

FieldSystem witness_system(const Alphabet& alphabet, const Word& w) {
    if (w.empty()) throw std::invalid_argument("witness_system: empty word");
    for (const auto& l : w.letters())
        if (l.kind != LetterKind::Deterministic && l.kind != LetterKind::Stochastic)
            throw std::invalid_argument("witness_system: word must use system letters");
    const int d = static_cast<int>(w.size());
    FieldSystem sys;
    sys.dim = d;
    for (const auto& l : alphabet.letters(base_letters()))
        sys.fields[l.id] = {Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d)};
    for (int j = 1; j <= d; ++j) {
        AffineField& f = sys.fields[w[j - 1].id];
        int i = d - j + 1;  // owned component, 1-based
        if (i < d)
            f.N(i - 1, i) = 1.0;
        else
            f.e(i - 1) = 1.0;
    }
    return sys;
}

FieldSystem ou_system(const Alphabet& alphabet, double theta, double sigma) {
    FieldSystem sys;
    sys.dim = 1;
    Letter a = *alphabet.find("a"), A = *alphabet.find("A");
    sys.fields[a.id] = {Eigen::MatrixXd::Constant(1, 1, -theta), Eigen::VectorXd::Zero(1)};
    sys.fields[A.id] = {Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, sigma)};
    return sys;
}

// f_a constant so the {a,A} stage of Lie-Trotter stays a commuting pair;
// the linear f_b supplies the f_ba vs f_ab asymmetry that makes the order-1
// error visible.
FieldSystem drift_split_system(const Alphabet& alphabet, double sigma) {
    FieldSystem sys;
    sys.dim = 1;
    Letter a = *alphabet.find("a"), b = *alphabet.find("b"), A = *alphabet.find("A");
    sys.fields[a.id] = {Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 1.0)};
    sys.fields[b.id] = {Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::VectorXd::Zero(1)};
    sys.fields[A.id] = {Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, sigma)};
    return sys;
}

FieldSystem linear_system(const Alphabet& alphabet, double a_coef, double sigma) {
    FieldSystem sys;
    sys.dim = 1;
    Letter a = *alphabet.find("a"), A = *alphabet.find("A");
    sys.fields[a.id] = {Eigen::MatrixXd::Constant(1, 1, a_coef), Eigen::VectorXd::Zero(1)};
    sys.fields[A.id] = {Eigen::MatrixXd::Constant(1, 1, sigma), Eigen::VectorXd::Zero(1)};
    return sys;
}

namespace {

void dense(const AffineField& f, int d, Eigen::MatrixXd& N, Eigen::VectorXd& e) {
    if (f.zero()) {
        N = Eigen::MatrixXd::Zero(d, d);
        e = Eigen::VectorXd::Zero(d);
    } else {
        N = f.N;
        e = f.e;
    }
}

// Affine map of f_w, by the peel-front recursion: f_w = f'_suffix f_front,
// so M_w = M_suffix N_front and v_w = M_suffix e_front.
void word_map(const FieldSystem& sys, const Word& w, Eigen::MatrixXd& M, Eigen::VectorXd& v) {
    const int d = sys.dim;
    if (w.contains_kind(LetterKind::Barred) || w.contains_kind(LetterKind::Starred)) {
        // second derivatives of affine fields vanish
        M = Eigen::MatrixXd::Zero(d, d);
        v = Eigen::VectorXd::Zero(d);
        return;
    }
    int n = static_cast<int>(w.size());
    Eigen::MatrixXd N;
    Eigen::VectorXd e;
    dense(sys.field(w[n - 1]), d, M, v);
    for (int j = n - 2; j >= 0; --j) {
        dense(sys.field(w[j]), d, N, e);
        v = M * e;
        M = M * N;
    }
}

}  // namespace

Eigen::VectorXd word_basis_function(const FieldSystem& sys, const Word& w,
                                    const Eigen::VectorXd& x) {
    if (w.empty()) throw std::invalid_argument("word_basis_function: empty word");
    Eigen::MatrixXd M;
    Eigen::VectorXd v;
    word_map(sys, w, M, v);
    return M * x + v;
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    double norm = M.cwiseAbs().sum();
    int squarings = 0;
    while (norm > 0.5) {
        norm /= 2;
        ++squarings;
    }
    Eigen::MatrixXd A = M / std::pow(2.0, squarings);
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = (term * A) / k;
        out += term;
        if (term.cwiseAbs().maxCoeff() < 1e-14) break;
    }
    for (int i = 0; i < squarings; ++i) out = out * out;
    return out;
}

// ---------------------------------------------------------------------------
// Brownian machinery

BrownianStep::BrownianStep(std::uint64_t seed, std::uint32_t path, std::uint32_t step,
                           const ElementaryGrid& grid, double h)
    : seed_(seed), path_(path), step_(step), grid_(&grid), h_(h) {}

double BrownianStep::cell_length(int cell) const {
    return static_cast<double>(grid_->length(cell)) * h_;
}

const std::vector<double>& BrownianStep::increments(std::uint16_t letter, int cell,
                                                    int level) {
    auto key = std::make_tuple(letter, cell, level);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double len = cell_length(cell);
    std::vector<double> out;
    if (level == 0) {
        out = {std::sqrt(len) *
               normal01(seed_, path_, step_, letter, std::uint16_t(cell), 0, 0)};
    } else {
        const auto& parent = increments(letter, cell, level - 1);
        out.resize(parent.size() * 2);
        // split each interval: halves get W/2 +- xi, Var(xi) = len(child)/4
        const double sd = std::sqrt(len / std::pow(2.0, level + 1));
        for (std::size_t i = 0; i < parent.size(); ++i) {
            double xi = sd * normal01(seed_, path_, step_, letter, std::uint16_t(cell),
                                      std::uint16_t(level), std::uint32_t(i));
            out[2 * i] = parent[i] / 2 + xi;
            out[2 * i + 1] = parent[i] / 2 - xi;
        }
    }
    return cache_.emplace(key, std::move(out)).first->second;
}

double BrownianStep::cell_increment(std::uint16_t letter, int cell) {
    return increments(letter, cell, 0)[0];
}

// ---------------------------------------------------------------------------
// Stage planning

namespace {

int int_log2(int n) {
    int l = 0;
    while ((1 << l) < n) ++l;
    if ((1 << l) != n) throw std::invalid_argument("subdivision must be a power of two");
    return l;
}

struct StagePlan {
    enum class Kind { Fixed, Exponent, WordSeries } kind = Kind::Fixed;
    std::string label;
    // Fixed
    Eigen::MatrixXd fixed;
    // Exponent: expm(det_part + sum_A embed_A * dB_A), det_part already scaled by h
    Eigen::MatrixXd det_part;
    std::vector<std::pair<std::uint16_t, Eigen::MatrixXd>> sto_embeds;
    bool exp_nil2 = false;
    std::vector<int> cells;
    // WordSeries
    struct Term {
        Word w;
        Eigen::MatrixXd M;
        Eigen::VectorXd v;
    };
    std::vector<Term> terms;
    std::vector<Word> quad_words;  // prefix-closed, sorted by length
    std::vector<Letter> letters;
};

Eigen::MatrixXd embed(const AffineField& f, int d) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d + 1, d + 1);
    if (!f.zero()) {
        out.topLeftCorner(d, d) = f.N;
        out.topRightCorner(d, 1) = f.e;
    }
    return out;
}

Eigen::VectorXd apply_homogeneous(const Eigen::MatrixXd& F, const Eigen::VectorXd& x) {
    const int d = static_cast<int>(x.size());
    return F.topLeftCorner(d, d) * x + F.topRightCorner(d, 1);
}

// True when M^2 = 0 structurally, i.e. |M|^2 = 0 — then exp(cM) = I + cM for
// every coefficient pattern with the same support.
bool nil2(const Eigen::MatrixXd& M) {
    Eigen::MatrixXd a = M.cwiseAbs();
    return (a * a).maxCoeff() == 0;
}

// exp(M) applied to x, skipping the matrix exponential when M^2 = 0.
Eigen::VectorXd apply_exp(const Eigen::MatrixXd& M, bool is_nil2, const Eigen::VectorXd& x) {
    if (is_nil2) return x + apply_homogeneous(M, x);
    return apply_homogeneous(expm(M), x);
}

bool commuting(const std::vector<Eigen::MatrixXd>& ms) {
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = i + 1; j < ms.size(); ++j) {
            double scale = 1 + ms[i].cwiseAbs().maxCoeff() * ms[j].cwiseAbs().maxCoeff();
            if ((ms[i] * ms[j] - ms[j] * ms[i]).cwiseAbs().maxCoeff() > 1e-12 * scale)
                return false;
        }
    return true;
}

StagePlan plan_stage(const SchemeSpec& s, std::size_t idx, const FieldSystem& sys,
                     const ElementaryGrid& grid, double h) {
    const Stage& st = s.stages[idx];
    const int d = sys.dim;
    const bool ito = s.system.interpretation == Interpretation::Ito;
    StagePlan p;
    p.label = "stage " + std::to_string(idx + 1);
    std::vector<Letter> det, sto;
    for (const auto& l : st.letters)
        if (sys.has(l)) (l.stochastic() ? sto : det).push_back(l);
    p.letters = det;
    p.letters.insert(p.letters.end(), sto.begin(), sto.end());
    const double span = static_cast<double>(st.d - st.c) * h;

    if (sto.empty()) {
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d + 1, d + 1);
        for (const auto& l : det) G += embed(sys.field(l), d);
        p.kind = StagePlan::Kind::Fixed;
        p.fixed = expm(G * span);
        return p;
    }

    p.cells = grid.covering(st.c, st.d);
    std::vector<Eigen::MatrixXd> all;
    for (const auto& l : p.letters) all.push_back(embed(sys.field(l), d));
    if (commuting(all)) {
        p.kind = StagePlan::Kind::Exponent;
        p.det_part = Eigen::MatrixXd::Zero(d + 1, d + 1);
        for (const auto& l : det) p.det_part += embed(sys.field(l), d) * span;
        for (const auto& l : sto) {
            Eigen::MatrixXd E = embed(sys.field(l), d);
            if (ito) p.det_part -= 0.5 * E * E * span;
            p.sto_embeds.emplace_back(l.id, E);
        }
        Eigen::MatrixXd pattern = p.det_part.cwiseAbs();
        for (const auto& [id, E] : p.sto_embeds) pattern += E.cwiseAbs();
        p.exp_nil2 = nil2(pattern);
        return p;
    }

    // noncommuting: exact only when the stage fields are jointly nilpotent,
    // in which case the word series terminates and the stage flow is the
    // finite sum x + sum_w J_w(stage) f_w(x)
    p.kind = StagePlan::Kind::WordSeries;
    int cap = d;
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= cap + 1; ++len) {
        std::vector<Word> next;
        for (const auto& u : frontier)
            for (const auto& l : p.letters) next.push_back(u.appended(l));
        bool any = false;
        for (const auto& w : next) {
            Eigen::MatrixXd M;
            Eigen::VectorXd v;
            word_map(sys, w, M, v);
            bool nonzero = M.cwiseAbs().maxCoeff() > 0 || v.cwiseAbs().maxCoeff() > 0;
            any = any || nonzero;
            if (len <= cap && nonzero) p.terms.push_back({w, M, v});
            p.quad_words.push_back(w);
        }
        if (len == cap + 1 && any)
            throw std::runtime_error(p.label +
                                     ": not exactly solvable (noncommuting, non-nilpotent "
                                     "stage fields)");
        if (!any) break;
        frontier = std::move(next);
    }
    return p;
}

// Sampled iterated integrals over the stage's cells for every word in
// `words` (prefix-closed, sorted by length). Midpoint rule for Stratonovich,
// left point for Ito; deterministic and starred letters drive dt.
std::map<Word, double, GradedLess> quadrature_integrals(
    const std::vector<Word>& words, const std::vector<int>& cells, Interpretation interp,
    int subdivision, BrownianStep& bs) {
    std::map<Word, double, GradedLess> J, Jnew;
    for (const auto& w : words) J[w] = 0.0;
    J[Word{}] = 1.0;
    const int level = int_log2(subdivision);
    for (int cell : cells) {
        const double dt = bs.cell_length(cell) / subdivision;
        for (int i = 0; i < subdivision; ++i) {
            Jnew = J;
            for (const auto& w : words) {
                if (w.empty()) continue;
                const Letter& last = w.back();
                double dL = last.stochastic()
                                ? bs.increments(last.id, cell, level)[std::size_t(i)]
                                : dt;
                const Word pre = w.without_last();
                double base = interp == Interpretation::Stratonovich
                                  ? 0.5 * (J.at(pre) + Jnew.at(pre))
                                  : J.at(pre);
                Jnew[w] += base * dL;
            }
            J.swap(Jnew);
        }
    }
    return J;
}

struct SimPlan {
    ElementaryGrid grid;
    std::vector<StagePlan> stages;
};

SimPlan make_plan(const SchemeSpec& s, const FieldSystem& sys, double h) {
    SimPlan p;
    p.grid = ElementaryGrid::for_scheme(s);
    for (std::size_t i = 0; i < s.stages.size(); ++i)
        p.stages.push_back(plan_stage(s, i, sys, p.grid, h));
    return p;
}

Eigen::VectorXd apply_stage(const StagePlan& p, Interpretation interp, int subdivision,
                            BrownianStep& bs, const Eigen::VectorXd& x) {
    switch (p.kind) {
        case StagePlan::Kind::Fixed:
            return apply_homogeneous(p.fixed, x);
        case StagePlan::Kind::Exponent: {
            Eigen::MatrixXd M = p.det_part;
            for (const auto& [id, E] : p.sto_embeds) {
                double db = 0;
                for (int cell : p.cells) db += bs.cell_increment(id, cell);
                M += E * db;
            }
            return apply_exp(M, p.exp_nil2, x);
        }
        case StagePlan::Kind::WordSeries: {
            auto J = quadrature_integrals(p.quad_words, p.cells, interp, subdivision, bs);
            Eigen::VectorXd out = x;
            for (const auto& t : p.terms) out += J.at(t.w) * (t.M * x + t.v);
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

// Fine Strang substepping of the full system on 2^L dyadic subintervals of
// each cell, on the same Brownian path.
Eigen::VectorXd reference_step(const SchemeSpec& s, const FieldSystem& sys,
                               const ElementaryGrid& grid, BrownianStep& bs, int level,
                               const Eigen::VectorXd& x0) {
    const int d = sys.dim;
    const bool ito = s.system.interpretation == Interpretation::Ito;
    std::vector<Letter> det, sto;
    for (const auto& l : s.system.alphabet->letters(base_letters()))
        if (sys.has(l)) (l.stochastic() ? sto : det).push_back(l);
    const int n = 1 << level;
    Eigen::VectorXd x = x0;
    for (int cell = 1; cell <= grid.cells(); ++cell) {
        const double dt = bs.cell_length(cell) / n;
        std::vector<Eigen::MatrixXd> half;
        for (const auto& l : det) half.push_back(expm(embed(sys.field(l), d) * (dt / 2)));
        std::vector<Eigen::MatrixXd> sto_embeds, sto_corr;
        std::vector<bool> sto_nil2;
        for (const auto& l : sto) {
            Eigen::MatrixXd E = embed(sys.field(l), d);
            sto_embeds.push_back(E);
            sto_corr.push_back(ito ? Eigen::MatrixXd(-0.5 * E * E * dt)
                                   : Eigen::MatrixXd::Zero(d + 1, d + 1));
            sto_nil2.push_back(nil2(E.cwiseAbs() + sto_corr.back().cwiseAbs()));
        }
        for (int i = 0; i < n; ++i) {
            for (const auto& H : half) x = apply_homogeneous(H, x);
            for (std::size_t k = 0; k < sto.size(); ++k) {
                double db = bs.increments(sto[k].id, cell, level)[std::size_t(i)];
                x = apply_exp(sto_embeds[k] * db + sto_corr[k], sto_nil2[k], x);
            }
            for (auto it = half.rbegin(); it != half.rend(); ++it)
                x = apply_homogeneous(*it, x);
        }
    }
    return x;
}

}  // namespace

Eigen::VectorXd simulate_path(const SchemeSpec& s, const FieldSystem& sys,
                              const Eigen::VectorXd& x0, double h, int steps,
                              std::uint64_t seed, std::uint32_t path, const SimOptions& opts,
                              bool reference) {
    SimPlan plan;
    ElementaryGrid grid = ElementaryGrid::for_scheme(s);
    if (!reference) plan = make_plan(s, sys, h);
    Eigen::VectorXd x = x0;
    for (int step = 0; step < steps; ++step) {
        BrownianStep bs(seed, path, std::uint32_t(step), grid, h);
        if (reference) {
            x = reference_step(s, sys, grid, bs, opts.ref_level, x);
        } else {
            for (const auto& sp : plan.stages)
                x = apply_stage(sp, s.system.interpretation, opts.subdivision, bs, x);
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Iterated-integral sampling

IntegralSampler::IntegralSampler(AlphabetPtr alphabet, const ElementaryGrid& grid,
                                 Interpretation interp, int subdivision, BrownianStep& bs)
    : alphabet_(std::move(alphabet)),
      grid_(&grid),
      interp_(interp),
      subdivision_(subdivision),
      bs_(&bs) {}

double IntegralSampler::value(int cell, const Word& w) const {
    auto key = std::make_pair(cell, w);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Word> prefixes;
    for (std::size_t i = 0; i <= w.size(); ++i) prefixes.push_back(w.prefix(i));
    auto J = quadrature_integrals(prefixes, {cell}, interp_, subdivision_, *bs_);
    double v = J.at(w);
    cache_.emplace(key, v);
    return v;
}

double IntegralSampler::eval(const IIPoly& p) const {
    return p.eval([this](int cell, const Word& w) { return value(cell, w); }, bs_->h());
}

// ---------------------------------------------------------------------------
// Slope estimation

namespace {

void check_ladder(const std::vector<double>& h_list, double T) {
    if (h_list.size() < 3) throw std::invalid_argument("need at least 3 step sizes");
    for (double h : h_list) {
        if (h <= 0) throw std::invalid_argument("step sizes must be positive");
        double n = T / h;
        if (std::abs(n - std::round(n)) > 1e-9)
            throw std::invalid_argument("final time must be a multiple of each step size");
    }
    for (std::size_t i = 1; i < h_list.size(); ++i)
        if (h_list[i] >= h_list[i - 1])
            throw std::invalid_argument("step sizes must decrease");
}

double ols_slope(const std::vector<double>& h_list, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        if (!(err[i] > 0)) continue;
        double x = std::log(h_list[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Bootstrap the slope over path resamples; `statistic` maps a multiset of
// path indices to the per-h error vector.
double bootstrap_stderr(int paths, std::uint64_t seed, const std::vector<double>& h_list,
                        const std::function<std::vector<double>(const std::vector<int>&)>& stat) {
    std::mt19937_64 gen(seed ^ 0x5DEECE66Dull);
    std::uniform_int_distribution<int> pick(0, paths - 1);
    const int B = 200;
    std::vector<double> slopes;
    std::vector<int> sample(paths);
    for (int b = 0; b < B; ++b) {
        for (int i = 0; i < paths; ++i) sample[i] = pick(gen);
        slopes.push_back(ols_slope(h_list, stat(sample)));
    }
    double mean = 0;
    for (double s : slopes) mean += s;
    mean /= B;
    double var = 0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    return std::sqrt(var / (B - 1));
}

}  // namespace

SlopeReport estimate_strong_order(const SchemeSpec& s, const FieldSystem& sys,
                                  const Eigen::VectorXd& x0, const std::vector<double>& h_list,
                                  int paths, std::uint64_t seed, const SimOptions& opts) {
    check_ladder(h_list, opts.final_time);
    SlopeReport r;
    r.h_values = h_list;
    r.paths = paths;
    r.seed = seed;
    const int nh = static_cast<int>(h_list.size());
    std::vector<std::vector<double>> sq(paths, std::vector<double>(nh));
    for (int p = 0; p < paths; ++p) {
        for (int i = 0; i < nh; ++i) {
            int steps = int(std::round(opts.final_time / h_list[i]));
            Eigen::VectorXd xs =
                simulate_path(s, sys, x0, h_list[i], steps, seed, std::uint32_t(p), opts, false);
            Eigen::VectorXd xr =
                simulate_path(s, sys, x0, h_list[i], steps, seed, std::uint32_t(p), opts, true);
            sq[p][i] = (xs - xr).squaredNorm();
        }
    }
    auto rms = [&](const std::vector<int>& idx) {
        std::vector<double> out(nh, 0.0);
        for (int p : idx)
            for (int i = 0; i < nh; ++i) out[i] += sq[p][i];
        for (double& e : out) e = std::sqrt(e / idx.size());
        return out;
    };
    std::vector<int> all(paths);
    for (int p = 0; p < paths; ++p) all[p] = p;
    r.errors = rms(all);
    double emax = *std::max_element(r.errors.begin(), r.errors.end());
    if (emax < 1e-9) {
        r.verdict = "exact-scheme";
        r.notes.push_back("error at statistical floor; slope fit rejected");
        return r;
    }
    r.slope = ols_slope(h_list, r.errors);
    r.stderr_ = bootstrap_stderr(paths, seed, h_list, rms);
    r.verdict = "ok";
    return r;
}

SlopeReport estimate_weak_order(const SchemeSpec& s, const FieldSystem& sys,
                                const Observable& chi, const Eigen::VectorXd& x0,
                                const std::vector<double>& h_list, int paths,
                                std::uint64_t seed, const SimOptions& opts) {
    check_ladder(h_list, opts.final_time);
    SlopeReport r;
    r.h_values = h_list;
    r.paths = paths;
    r.seed = seed;
    const int nh = static_cast<int>(h_list.size());
    // common random numbers: pathwise difference of the observable
    std::vector<std::vector<double>> diff(paths, std::vector<double>(nh));
    for (int p = 0; p < paths; ++p) {
        for (int i = 0; i < nh; ++i) {
            int steps = int(std::round(opts.final_time / h_list[i]));
            Eigen::VectorXd xs =
                simulate_path(s, sys, x0, h_list[i], steps, seed, std::uint32_t(p), opts, false);
            Eigen::VectorXd xr =
                simulate_path(s, sys, x0, h_list[i], steps, seed, std::uint32_t(p), opts, true);
            diff[p][i] = chi(xs) - chi(xr);
        }
    }
    auto bias = [&](const std::vector<int>& idx) {
        std::vector<double> out(nh, 0.0);
        for (int p : idx)
            for (int i = 0; i < nh; ++i) out[i] += diff[p][i];
        for (double& e : out) e = std::abs(e / idx.size());
        return out;
    };
    std::vector<int> all(paths);
    for (int p = 0; p < paths; ++p) all[p] = p;
    r.errors = bias(all);
    // signal vs statistical floor
    int weak_signal = 0;
    for (int i = 0; i < nh; ++i) {
        double m = 0, v = 0;
        for (int p = 0; p < paths; ++p) m += diff[p][i];
        m /= paths;
        for (int p = 0; p < paths; ++p) v += (diff[p][i] - m) * (diff[p][i] - m);
        double se = std::sqrt(v / (double(paths) - 1) / paths);
        if (std::abs(m) < 2 * se) ++weak_signal;
    }
    r.slope = ols_slope(h_list, r.errors);
    r.stderr_ = bootstrap_stderr(paths, seed, h_list, bias);
    if (weak_signal > nh / 2) {
        r.verdict = "inconclusive";
        r.notes.push_back("statistical floor exceeds the weak-error signal");
    } else {
        r.verdict = "ok";
    }
    return r;
}

CoeffCheck verify_symbolic_coefficient(const SchemeSpec& s, const Word& w, int paths,
                                       std::uint64_t seed, const SimOptions& opts) {
    if (w.weight2() > 4)
        throw std::invalid_argument("verify_symbolic_coefficient: weight capped at 2");
    const Alphabet& a = *s.system.alphabet;
    FieldSystem sys = witness_system(a, w);
    ElementaryGrid grid = ElementaryGrid::for_scheme(s);
    IIPoly coeff = scheme_chen_series(s, grid, w.weight2()).coeff(w);
    const double h = 1.0;
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sys.dim);

    CoeffCheck r;
    double sum = 0, sumsq = 0, qsum = 0;
    double dsum = 0;
    for (int p = 0; p < paths; ++p) {
        BrownianStep bs(seed, std::uint32_t(p), 0, grid, h);
        IntegralSampler samp(s.system.alphabet, grid, Interpretation::Stratonovich,
                             opts.subdivision, bs);
        double symbolic = samp.eval(coeff);
        Eigen::VectorXd x =
            simulate_path(s, sys, x0, h, 1, seed, std::uint32_t(p), opts, false);
        double direct = x(0);
        double d = direct - symbolic;
        sum += d;
        sumsq += d * d;
        dsum += direct;
        qsum += symbolic;
        if (p < 64) {
            // Richardson estimate of the quadrature error at half subdivision
            BrownianStep bs2(seed, std::uint32_t(p), 0, grid, h);
            IntegralSampler coarse(s.system.alphabet, grid, Interpretation::Stratonovich,
                                   opts.subdivision / 2, bs2);
            r.quadrature_budget += std::abs(coarse.eval(coeff) - symbolic);
        }
    }
    r.quadrature_budget /= std::min(paths, 64);
    double mean = sum / paths;
    double var = (sumsq - sum * sum / paths) / (double(paths) - 1);
    r.stderr_ = std::sqrt(std::max(var, 0.0) / paths);
    r.symbolic_mean = qsum / paths;
    r.direct_mean = dsum / paths;
    r.z = mean / std::sqrt(r.stderr_ * r.stderr_ + r.quadrature_budget * r.quadrature_budget +
                           1e-30);
    r.pass = std::abs(r.z) < 4;
    return r;
}

}  // namespace sdesplit::mc
