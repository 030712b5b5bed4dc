#pragma once

#include "rbfqf/exec.hpp"
#include "rbfqf/moments.hpp"
#include "rbfqf/rbfsystem.hpp"
#include "rbfqf/space.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace rbfqf {

enum class Provenance { interpolatory, least_squares };

std::string to_string(Provenance p);

struct QuadratureRule {
    PointSet points;
    Eigen::VectorXd weights;
    Eigen::VectorXd multipliers;   // polynomial block of the solve, empty for d = -1
    double stability_measure = 0;  // sum |w_n|
    double rule_of_one = 0;        // sum w_n
    Provenance provenance = Provenance::interpolatory;
    double condition = 0;          // condition estimate of the solve
    double residual = 0;           // moment residual, max norm
    std::string space;             // kernel, shape and degree descriptor
};

struct StabilityReport {
    double stability_measure;
    double rule_of_one;
    double min_weight;
    bool is_stable;
};

/// 1e-12 * max(1, sum |w|): weights above -tau count as nonnegative.
double positivity_tolerance(double stability_measure) noexcept;

StabilityReport stability_report(const Eigen::VectorXd& weights);
StabilityReport stability_report(const QuadratureRule& rule);

/// Short descriptor of a space, e.g. "gaussian eps=[0.8,0.8] d=0 N=20".
std::string describe(const RbfSpace& space);

/// Weights from A^T [w; v] = [m_rbf; m_poly] on the space's centers. The
/// transpose matters when eps_n varies and Phi is not symmetric. Ill
/// conditioning is recorded in the rule; only an exactly singular matrix
/// throws SingularSystemError.
QuadratureRule interpolatory_weights(const RbfSpace& space, const Domain& domain,
                                     Exec exec = Exec::parallel);
QuadratureRule interpolatory_weights(const RbfSpace& space, const MomentVector& moments,
                                     Exec exec = Exec::parallel);

double apply(const QuadratureRule& rule, const std::function<double(const Point&)>& f);
double apply(const QuadratureRule& rule, const Eigen::VectorXd& values);

/// 2000 equidistant samples in 1D, 101 x 101 in 2D.
PointSet default_lebesgue_grid(const Domain& domain);

struct LebesgueEstimate {
    double value;         // max over the grid of sum |c_n(x)|, a lower bound
    std::size_t samples;
};

/// Sampled Lebesgue constant; grid points are processed in parallel blocks
/// unless exec is serial.
LebesgueEstimate estimate_lebesgue(const RbfSpace& space, const PointSet& grid,
                                   Exec exec = Exec::parallel);

struct WeightDecomposition {
    Eigen::VectorXd w;           // weights of the space with polynomials
    Eigen::VectorXd w_hat;       // weights of the pure kernel rule (d = -1)
    Eigen::VectorXd tau_moment;  // I[tau] = P^T w_hat - m_poly
    Eigen::VectorXd correction;  // B I[tau], B = Phi^-T P (P^T Phi^-T P)^-1
    double identity_error;       // |w - (w_hat - correction)|_inf
    double phi_condition;        // 1-norm condition of Phi
};

/// Condition limit for the binary128 eliminations in decompose_weights.
inline constexpr double kExtendedConditionLimit = 1e28;

/// Splits the weights into the pure kernel rule and its polynomial
/// correction. The double-precision blocks are eliminated in binary128, once
/// through Phi and its Schur complement and once through the bordered
/// matrix, so `w` here can differ from the double solve of an ill-conditioned
/// system. Throws SingularSystemError when the 1-norm condition of Phi or of
/// P^T Phi^-T P exceeds kExtendedConditionLimit.
WeightDecomposition decompose_weights(const RbfSpace& space, const Domain& domain);

struct ExactnessReport {
    double max_error;  // max over basis functions of |Q[b] - I[b]| / max(1, |I[b]|)
    std::size_t checked;
};

/// Checks the rule against a basis of its exactness space. Least-squares
/// rules are exact on every kernel and monomial of `space`. Interpolatory
/// rules with d >= 0 are exact on S_{N,d}: the monomials plus kernel
/// combinations sum_j a_j phi_j with P^T a = 0 (an orthonormal basis of that
/// null space is used), since single phi_j are not in the space's moment
/// conditions once polynomials are appended.
ExactnessReport check_exactness(const QuadratureRule& rule, const RbfSpace& space,
                                const MomentVector& moments);

} // namespace rbfqf
