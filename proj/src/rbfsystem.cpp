#include "rbfqf/rbfsystem.hpp"

#include "rbfqf/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace rbfqf {

namespace {

void check_rank(const Eigen::MatrixXd& p) {
    if (p.cols() == 0)
        return;
    if (p.rows() < p.cols())
        throw RankDeficientError("polynomial block P lacks full column rank",
                                 static_cast<std::size_t>(p.rows()),
                                 static_cast<std::size_t>(p.cols()));
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
    const auto& s = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        rank += s(i) > 1e-10 * s(0) ? 1 : 0;
    if (rank < static_cast<std::size_t>(p.cols()))
        throw RankDeficientError("polynomial block P lacks full column rank", rank,
                                 static_cast<std::size_t>(p.cols()));
}

const SaddleSystem& require_factored(const SaddleSystem& sys) {
    if (!sys.square || !sys.lu)
        throw std::invalid_argument("operation needs the square interpolation system");
    if (!(sys.condition <= kConditionLimit))
        throw SingularSystemError("bordered interpolation matrix is numerically singular",
                                  sys.condition);
    return sys;
}

} // namespace

Eigen::MatrixXd SaddleSystem::bordered() const {
    const auto n = phi.cols();
    const auto k = poly.cols();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + k, n + k);
    a.topLeftCorner(n, n) = phi;
    a.topRightCorner(n, k) = poly;
    a.bottomLeftCorner(k, n) = poly.transpose();
    return a;
}

Eigen::VectorXd SaddleSystem::solve(const Eigen::VectorXd& rhs) const {
    if (!lu)
        throw std::invalid_argument("system was not factored");
    return lu->solve(rhs);
}

Eigen::MatrixXd SaddleSystem::solve_transposed(const Eigen::MatrixXd& rhs) const {
    if (!lu)
        throw std::invalid_argument("system was not factored");
    return lu->transpose().solve(rhs);
}

SaddleSystem assemble(const RbfSpace& space, const PointSet& data, Exec exec) {
    if (data.domain.dim != space.dim())
        throw std::invalid_argument("data points and centers differ in dimension");
    const auto rows = static_cast<Eigen::Index>(data.size());
    const auto n = static_cast<Eigen::Index>(space.num_centers());
    const auto k = static_cast<Eigen::Index>(space.num_poly());

    SaddleSystem sys{space, data, Eigen::MatrixXd(rows, n), Eigen::MatrixXd(rows, k), false, {}, 0.0};
    const bool square = data.points == space.centers.points;
    if (square && data.size() > 1) {
        const auto h = nearest_neighbor_distances(data, exec);
        for (double v : h)
            if (v == 0.0)
                throw std::invalid_argument("coincident points in the interpolation system");
    }

#pragma omp parallel for schedule(static) if (is_parallel(exec))
    for (Eigen::Index m = 0; m < rows; ++m) {
        const Point& x = data[static_cast<std::size_t>(m)];
        for (Eigen::Index j = 0; j < n; ++j)
            sys.phi(m, j) = space.phi(static_cast<std::size_t>(j), x);
        double buf[512];
        space.basis.eval(x, buf);
        for (Eigen::Index j = 0; j < k; ++j)
            sys.poly(m, j) = buf[j];
    }
    check_rank(sys.poly);

    if (square) {
        sys.square = true;
        sys.lu.emplace(sys.bordered());
        const double rc = sys.lu->rcond();
        const double min_pivot = sys.lu->matrixLU().diagonal().cwiseAbs().minCoeff();
        sys.condition = rc > 0.0 && min_pivot > 0.0 ? 1.0 / rc : INFINITY;
    }
    return sys;
}

SaddleSystem assemble(const RbfSpace& space, Exec exec) { return assemble(space, space.centers, exec); }

Coefficients interpolate(const SaddleSystem& sys, const Eigen::VectorXd& f_values) {
    require_factored(sys);
    const auto n = sys.phi.cols();
    const auto k = sys.poly.cols();
    if (f_values.size() != n)
        throw std::invalid_argument("one data value per center is required");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k);
    rhs.head(n) = f_values;
    const Eigen::VectorXd z = sys.solve(rhs);
    return {z.head(n), z.tail(k)};
}

double eval_interpolant(const RbfSpace& space, const Coefficients& c, const Point& x) {
    double s = 0.0;
    for (std::size_t n = 0; n < space.num_centers(); ++n)
        s += c.alpha(static_cast<Eigen::Index>(n)) * space.phi(n, x);
    if (space.num_poly() > 0)
        s += c.beta.dot(space.basis.eval(x));
    return s;
}

Eigen::VectorXd cardinal_values(const SaddleSystem& sys, const Point& x) {
    PointSet one{sys.data.domain, {x}};
    return cardinal_matrix(sys, one).col(0);
}

Eigen::MatrixXd cardinal_matrix(const SaddleSystem& sys, const PointSet& at) {
    require_factored(sys);
    const RbfSpace& space = sys.space;
    const auto n = static_cast<Eigen::Index>(space.num_centers());
    const auto k = static_cast<Eigen::Index>(space.num_poly());
    Eigen::MatrixXd rhs(n + k, static_cast<Eigen::Index>(at.size()));
    for (std::size_t j = 0; j < at.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        for (Eigen::Index i = 0; i < n; ++i)
            rhs(i, col) = space.phi(static_cast<std::size_t>(i), at[j]);
        if (k > 0)
            rhs.col(col).tail(k) = space.basis.eval(at[j]);
    }
    return sys.solve_transposed(rhs).topRows(n);
}

double explicit_cardinal_nonoverlap(const RbfSpace& space, const PolyBasis& dops, std::size_t m,
                                    const Point& x) {
    if (!space.kernel.compactly_supported())
        throw std::invalid_argument("explicit cardinal form needs a compactly supported kernel");
    const std::size_t n = space.num_centers();
    if (m >= n)
        throw std::out_of_range("cardinal index out of range");
    if (n > 1) {
        const auto h = nearest_neighbor_distances(space.centers, Exec::serial);
        for (std::size_t i = 0; i < n; ++i)
            if (1.0 / space.shape[i] > h[i] * (1.0 + 1e-12))
                throw std::invalid_argument("kernel supports overlap (1/eps_n > h_n)");
    }
    const double scale = space.centers.domain.volume() / static_cast<double>(n);
    const int k = dops.size();
    if (k == 0)
        return space.phi(m, x);
    const Eigen::VectorXd pm = dops.eval(space.centers[m]);
    double s = space.phi(m, x);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = space.phi(i, x);
        if (f != 0.0)
            s -= scale * pm.dot(dops.eval(space.centers[i])) * f;
    }
    return s + scale * pm.dot(dops.eval(x));
}

} // namespace rbfqf
