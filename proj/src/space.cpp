#include "rbfqf/space.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rbfqf {

ShapePolicy ShapePolicy::constant(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("shape parameter must be positive and finite");
    return {Kind::constant, eps};
}

ShapePolicy ShapePolicy::equal_moment_boundary(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("shape parameter must be positive and finite");
    return {Kind::equal_moment_boundary, eps};
}

std::vector<double> ShapePolicy::assign(const PointSet& centers) const {
    std::vector<double> eps(centers.size(), this->eps);
    if (kind == Kind::equal_moment_boundary) {
        if (centers.domain.dim != 1)
            throw std::invalid_argument("equal-moment boundary policy is defined for 1D only");
        for (std::size_t n = 0; n < centers.size(); ++n) {
            const double x = centers[n][0];
            if (x == centers.domain.lo[0] || x == centers.domain.hi[0])
                eps[n] = 0.5 * this->eps;
        }
    }
    return eps;
}

std::string ShapePolicy::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << (kind == Kind::constant ? "constant(" : "equal_moment_boundary(") << eps << ')';
    return os.str();
}

RbfSpace RbfSpace::make(const Kernel& kernel, PointSet centers, std::vector<double> shape,
                        int degree) {
    if (centers.size() == 0)
        throw std::invalid_argument("RBF space needs at least one center");
    if (shape.size() != centers.size())
        throw std::invalid_argument("one shape parameter per center is required");
    if (degree < -1)
        throw std::invalid_argument("polynomial degree must be >= -1");
    for (const auto& x : centers.points)
        if (!centers.domain.contains(x, 1e-14))
            throw std::invalid_argument("RBF center outside the domain");
    if (kernel.uses_shape()) {
        for (double e : shape)
            if (!(e > 0.0) || !std::isfinite(e))
                throw std::invalid_argument("shape parameters must be positive and finite");
    } else {
        shape.assign(shape.size(), 1.0);
    }
    PolyBasis basis = monomial_basis(centers.domain.dim, degree);
    return {kernel, std::move(centers), std::move(shape), degree, std::move(basis)};
}

RbfSpace RbfSpace::make(const Kernel& kernel, PointSet centers, const ShapePolicy& policy,
                        int degree) {
    auto shape = policy.assign(centers);
    return make(kernel, std::move(centers), std::move(shape), degree);
}

} // namespace rbfqf
