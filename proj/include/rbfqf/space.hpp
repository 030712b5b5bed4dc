#pragma once

#include "rbfqf/kernels.hpp"
#include "rbfqf/pointsets.hpp"
#include "rbfqf/polybasis.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rbfqf {

/// How shape parameters are assigned to centers.
struct ShapePolicy {
    enum class Kind { constant, equal_moment_boundary };

    Kind kind = Kind::constant;
    double eps = 1.0;

    static ShapePolicy constant(double eps);

    /// eps on interior points and eps / 2 on the two endpoints of a 1D
    /// interval, so boundary kernels whose support is cut in half keep the
    /// same moment as interior ones. Only defined in 1D.
    static ShapePolicy equal_moment_boundary(double eps);

    std::vector<double> assign(const PointSet& centers) const;
    std::string describe() const;
};

/// The space S_{N,d}: translated kernels phi(eps_n |x - x_n|) plus the
/// monomials of degree <= d. PHS kernels always use eps_n = 1.
///
/// Degrees below kernel.min_degree() are accepted on purpose: the bordered
/// system may still be solvable (linear PHS with d = -1 gives the trapezoid
/// rule) and the factorization reports singularity when it is not.
struct RbfSpace {
    Kernel kernel;
    PointSet centers;
    std::vector<double> shape;
    int degree = -1;
    PolyBasis basis;

    static RbfSpace make(const Kernel& kernel, PointSet centers, std::vector<double> shape,
                         int degree);
    static RbfSpace make(const Kernel& kernel, PointSet centers, const ShapePolicy& policy,
                         int degree);

    std::size_t num_centers() const noexcept { return centers.size(); }
    int num_poly() const noexcept { return basis.size(); }
    int dim() const noexcept { return centers.domain.dim; }

    /// phi_n(x) = phi(eps_n |x - x_n|).
    double phi(std::size_t n, const Point& x) const noexcept {
        return kernel.eval_unchecked(shape[n] * distance(x, centers[n]));
    }
};

} // namespace rbfqf
