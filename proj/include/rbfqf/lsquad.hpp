#pragma once

#include "rbfqf/exec.hpp"
#include "rbfqf/moments.hpp"
#include "rbfqf/pointsets.hpp"
#include "rbfqf/quadrature.hpp"
#include "rbfqf/space.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rbfqf {

using WeightFunction = std::function<double(const Point&)>;

/// Exactness system B w = m for a rule on data points X_N that is exact on
/// the space S_{M,d} spanned by kernels at centers Y_M and monomials.
struct LsProblem {
    RbfSpace space;
    PointSet data;
    Eigen::MatrixXd b;        // (M + K) x N, rows: phi_m(x_n) then p_k(x_n)
    Eigen::VectorXd moments;  // length M + K
    Eigen::VectorXd r;        // discrete weights |Omega| omega(x_n) / N
};

/// Builds B, m and r. `moments` are the integrals of the space's basis with
/// respect to omega; with omega empty (omega = 1) they may be computed by
/// rbf_moments. A non-constant omega needs caller-supplied moments.
/// Throws std::invalid_argument if N < M + K or omega(x_n) <= 0.
LsProblem build_ls_problem(const RbfSpace& space, const PointSet& data, const MomentVector& moments,
                           const WeightFunction& omega = {});
LsProblem build_ls_problem(const RbfSpace& space, const PointSet& data, const Domain& domain);

struct LsSolution {
    QuadratureRule rule;
    Eigen::Index rank;   // numerical rank of B R^(1/2)
    double residual;     // |B w - m|_inf / |m|_inf
};

/// Relative residual bound for an accepted least-squares rule.
inline constexpr double kLsResidualTol = 1e-9;

/// w = R^(1/2) z with z the minimum 2-norm solution of (B R^(1/2)) z = m,
/// from a complete orthogonal decomposition (Eigen's default rank
/// threshold). Numerically rank-deficient B is accepted as long as the
/// residual stays below kLsResidualTol; otherwise RankDeficientError (rank
/// short) or Error (full rank, residual too large) is thrown.
LsSolution weighted_min_norm(const LsProblem& problem);

struct Algorithm1Options {
    int n_start = -1;        // -1: M + K
    int n_max = 0;           // 0: 50 M^2
    bool geometric = false;  // step max(1, N / 10) instead of 1
};

struct Algorithm1Step {
    int n;
    double min_weight;   // NaN when the solve failed
    double residual;     // NaN when the solve failed
    Eigen::Index rank;
    std::string status;  // "positive", "negative", "rank_deficient", "residual"
};

struct Algorithm1Result {
    bool success = false;
    int n_final = 0;                     // N of the returned rule
    std::optional<QuadratureRule> rule;  // first positive rule, or the least negative one
    std::vector<Algorithm1Step> trace;
};

/// Grows X_N along the sequence until the weighted minimum-norm rule is
/// nonnegative (min w >= -tau_pos). Exhausting n_max returns success = false
/// with the least negative iterate instead of throwing.
Algorithm1Result algorithm1(const RbfSpace& space, const PointSequence& data_sequence,
                            const Domain& domain, const Algorithm1Options& options = {},
                            const WeightFunction& omega = {},
                            const MomentVector* moments = nullptr);

struct PowerLaw {
    double c;  // N = c M^s
    double s;
};

/// Ordinary least squares fit of log N = log c + s log M.
PowerLaw fit_power_law(const std::vector<double>& m, const std::vector<double>& n);

struct RatioRow {
    int m;
    int n_final;
    bool success;
    double min_weight;
    double rule_of_one;
};

struct RatioStudy {
    std::vector<RatioRow> rows;
    PowerLaw fit;
};

/// Runs algorithm1 for each M with the first M sequence points as centers
/// and fits N_final = c M^s. Runs execute concurrently unless exec is serial.
RatioStudy ratio_study(const std::vector<int>& m_values, const Kernel& kernel, double eps,
                       int degree, const PointSequence& sequence, const Domain& domain,
                       const Algorithm1Options& options = {}, Exec exec = Exec::parallel);

} // namespace rbfqf
