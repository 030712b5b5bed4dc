#pragma once

#include "rbfqf/exec.hpp"
#include "rbfqf/space.hpp"

#include <Eigen/Dense>

#include <optional>

namespace rbfqf {

/// Condition estimates above this make interpolate() and cardinal_values()
/// refuse the system.
inline constexpr double kConditionLimit = 1e15;

/// Kernel and polynomial blocks evaluated at data points, plus the factored
/// bordered matrix A = [Phi P; P^T 0] when the data points are the centers.
struct SaddleSystem {
    RbfSpace space;
    PointSet data;
    Eigen::MatrixXd phi;   // |data| x N, phi(m, n) = phi(eps_n |x_m - y_n|)
    Eigen::MatrixXd poly;  // |data| x K, poly(m, k) = p_k(x_m)
    bool square = false;
    std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
    double condition = 0.0;  // 1 / (1-norm reciprocal condition estimate) of A

    Eigen::MatrixXd bordered() const;

    /// Solves A z = rhs or A^T z = rhs with the stored factorization.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd solve_transposed(const Eigen::MatrixXd& rhs) const;
};

/// Builds the kernel and polynomial blocks, rows in parallel unless exec is
/// serial. For data == centers it also factors A with partial pivoting and
/// records the condition estimate. Throws RankDeficientError if P lacks full
/// column rank, std::invalid_argument on coincident points.
SaddleSystem assemble(const RbfSpace& space, const PointSet& data, Exec exec = Exec::parallel);

/// Square system over the space's own centers.
SaddleSystem assemble(const RbfSpace& space, Exec exec = Exec::parallel);

struct Coefficients {
    Eigen::VectorXd alpha;  // kernel coefficients
    Eigen::VectorXd beta;   // polynomial coefficients
};

/// Interpolant through f at the centers. Throws SingularSystemError when the
/// condition estimate exceeds kConditionLimit.
Coefficients interpolate(const SaddleSystem& sys, const Eigen::VectorXd& f_values);

double eval_interpolant(const RbfSpace& space, const Coefficients& c, const Point& x);

/// c_m(x) for all m from one solve with A^T.
Eigen::VectorXd cardinal_values(const SaddleSystem& sys, const Point& x);

/// Cardinal values at many points, one column per point.
Eigen::MatrixXd cardinal_matrix(const SaddleSystem& sys, const PointSet& at);

/// Closed-form cardinal function for compact kernels whose supports do not
/// overlap (1 / eps_n <= h_n):
///   c_m(x) = phi_m(x) - (|Omega|/N) sum_n (sum_k p_k(x_m) p_k(x_n)) phi_n(x)
///            + (|Omega|/N) sum_k p_k(x_m) p_k(x)
/// with `dops` orthonormal on the centers. Throws std::invalid_argument if
/// the supports overlap or the kernel is not compactly supported.
double explicit_cardinal_nonoverlap(const RbfSpace& space, const PolyBasis& dops, std::size_t m,
                                    const Point& x);

} // namespace rbfqf
