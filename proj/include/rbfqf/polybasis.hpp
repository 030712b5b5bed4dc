#pragma once

#include "rbfqf/pointsets.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace rbfqf {

/// dim P_d in D variables, binom(d + D, D); 0 for d = -1.
int poly_dim(int dim, int degree);

/// Graded-lexicographic exponents: 1, x, y, x^2, xy, y^2, ...
std::vector<std::array<int, 2>> graded_lex_exponents(int dim, int degree);

/// Polynomials p_k(x) = sum_j coeffs(k, j) * t^e_j with t = (x - shift) / scale
/// componentwise and e_j the graded-lex exponents.
struct PolyBasis {
    int dim = 1;
    int degree = -1;
    std::vector<std::array<int, 2>> exponents;
    Eigen::MatrixXd coeffs;
    Point shift{0.0, 0.0};
    Point scale{1.0, 1.0};

    int size() const noexcept { return static_cast<int>(exponents.size()); }

    /// Monomial values t^e_j at x (length K).
    void monomials(const Point& x, double* out) const;

    /// Basis values p_k(x) (length K).
    void eval(const Point& x, double* out) const;
    Eigen::VectorXd eval(const Point& x) const;

    /// |X| x K matrix of basis values.
    Eigen::MatrixXd eval_matrix(const PointSet& ps) const;
};

/// Plain monomials 1, x, y, ... in the unshifted frame. d = -1 gives K = 0.
PolyBasis monomial_basis(int dim, int degree);

/// (|Omega| / N) sum_n u(x_n) v(x_n).
double discrete_ip(const PointSet& ps, const std::function<double(const Point&)>& u,
                   const std::function<double(const Point&)>& v);

/// Basis orthonormal under the discrete inner product of `ps`, built by
/// modified Gram-Schmidt with one reorthogonalization pass on monomials
/// shifted and scaled to the domain. The first element is |Omega|^(-1/2) and
/// every leading coefficient is positive. Throws RankDeficientError if the
/// points are not P_d-unisolvent (singular values below 1e-10 * max).
PolyBasis build_dops(const PointSet& ps, int degree);

/// Exact integrals of each basis element over the box.
Eigen::VectorXd poly_moments(const PolyBasis& basis, const Domain& domain);

/// Exact continuous Gram matrix int_Omega p_k p_l dx.
Eigen::MatrixXd continuous_gram(const PolyBasis& basis, const Domain& domain);

/// Discrete Gram matrix [p_k, p_l]_X.
Eigen::MatrixXd discrete_gram(const PolyBasis& basis, const PointSet& ps);

} // namespace rbfqf
