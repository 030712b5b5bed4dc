#include "rbfqf/quadrature.hpp"

#include "rbfqf/errors.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rbfqf {

namespace {

using Quad = boost::multiprecision::float128;
using QMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using QVector = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

// Exact 1-norm condition number from the explicit inverse. Eigen's rcond()
// estimator does not compile for this scalar type.
double condition_1(const QMatrix& a, const Eigen::PartialPivLU<QMatrix>& lu) {
    const Quad norm = a.cwiseAbs().colwise().sum().maxCoeff();
    const Quad inv_norm = lu.inverse().cwiseAbs().colwise().sum().maxCoeff();
    const double c = static_cast<double>(norm * inv_norm);
    return std::isfinite(c) ? c : INFINITY;
}

QuadratureRule finish_rule(PointSet points, Eigen::VectorXd w, Eigen::VectorXd v,
                           Provenance provenance, double condition, double residual,
                           std::string space) {
    QuadratureRule rule{std::move(points), std::move(w), std::move(v), 0.0, 0.0, provenance,
                        condition, residual, std::move(space)};
    rule.stability_measure = rule.weights.cwiseAbs().sum();
    rule.rule_of_one = rule.weights.sum();
    return rule;
}

} // namespace

std::string to_string(Provenance p) {
    return p == Provenance::interpolatory ? "interpolatory" : "least_squares";
}

double positivity_tolerance(double stability_measure) noexcept {
    return 1e-12 * std::max(1.0, stability_measure);
}

StabilityReport stability_report(const Eigen::VectorXd& weights) {
    StabilityReport r{weights.cwiseAbs().sum(), weights.sum(),
                      weights.size() > 0 ? weights.minCoeff() : 0.0, true};
    r.is_stable = r.min_weight >= -positivity_tolerance(r.stability_measure);
    return r;
}

StabilityReport stability_report(const QuadratureRule& rule) { return stability_report(rule.weights); }

std::string describe(const RbfSpace& space) {
    std::ostringstream os;
    os.precision(17);
    const auto [lo, hi] = std::minmax_element(space.shape.begin(), space.shape.end());
    os << space.kernel.name() << " eps=[" << *lo << ',' << *hi << "] d=" << space.degree
       << " N=" << space.num_centers();
    return os.str();
}

QuadratureRule interpolatory_weights(const RbfSpace& space, const Domain& domain, Exec exec) {
    return interpolatory_weights(space, rbf_moments(space, domain, exec), exec);
}

QuadratureRule interpolatory_weights(const RbfSpace& space, const MomentVector& moments, Exec exec) {
    const SaddleSystem sys = assemble(space, exec);
    if (!std::isfinite(sys.condition))
        throw SingularSystemError("bordered interpolation matrix is singular", sys.condition);
    const auto n = static_cast<Eigen::Index>(space.num_centers());
    const auto k = static_cast<Eigen::Index>(space.num_poly());
    Eigen::VectorXd rhs(n + k);
    rhs << moments.rbf, moments.poly;
    const Eigen::VectorXd z = sys.solve_transposed(rhs);
    const Eigen::MatrixXd a = sys.bordered();
    const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    const double residual = (a.transpose() * z - rhs).cwiseAbs().maxCoeff() / scale;
    return finish_rule(space.centers, z.head(n), z.tail(k), Provenance::interpolatory,
                       sys.condition, residual, describe(space));
}

double apply(const QuadratureRule& rule, const std::function<double(const Point&)>& f) {
    double s = 0.0;
    for (std::size_t n = 0; n < rule.points.size(); ++n)
        s += rule.weights(static_cast<Eigen::Index>(n)) * f(rule.points[n]);
    return s;
}

double apply(const QuadratureRule& rule, const Eigen::VectorXd& values) {
    if (values.size() != rule.weights.size())
        throw std::invalid_argument("one value per quadrature point is required");
    return rule.weights.dot(values);
}

PointSet default_lebesgue_grid(const Domain& domain) {
    return equidistant(domain, domain.dim == 1 ? 2000 : 101);
}

LebesgueEstimate estimate_lebesgue(const RbfSpace& space, const PointSet& grid, Exec exec) {
    const SaddleSystem sys = assemble(space, exec);
    constexpr std::size_t kBlock = 128;
    const std::size_t blocks = (grid.size() + kBlock - 1) / kBlock;
    std::vector<double> block_max(blocks, 0.0);
    // refuse singular systems before entering the parallel region
    (void)cardinal_matrix(sys, PointSet{grid.domain, {grid[0]}});
#pragma omp parallel for schedule(dynamic) if (is_parallel(exec))
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        const auto first = static_cast<std::size_t>(b) * kBlock;
        const auto last = std::min(grid.size(), first + kBlock);
        PointSet chunk{grid.domain, {grid.points.begin() + static_cast<std::ptrdiff_t>(first),
                                     grid.points.begin() + static_cast<std::ptrdiff_t>(last)}};
        const Eigen::MatrixXd c = cardinal_matrix(sys, chunk);
        block_max[static_cast<std::size_t>(b)] = c.cwiseAbs().colwise().sum().maxCoeff();
    }
    return {*std::max_element(block_max.begin(), block_max.end()), grid.size()};
}

WeightDecomposition decompose_weights(const RbfSpace& space, const Domain& domain) {
    if (space.num_poly() == 0)
        throw std::invalid_argument("decomposition needs a polynomial term (d >= 0)");
    const MomentVector m = rbf_moments(space, domain);
    const SaddleSystem sys = assemble(space);

    // Smooth kernels on modest point counts routinely push cond(Phi) past
    // 1e18, where a double elimination cannot resolve the identity at all.
    // The blocks are promoted exactly to binary128 and both sides are
    // eliminated there.
    const QMatrix phi = sys.phi.cast<Quad>();
    const QMatrix p = sys.poly.cast<Quad>();
    const QVector m_rbf = m.rbf.cast<Quad>();
    const QVector m_poly = m.poly.cast<Quad>();

    const Eigen::PartialPivLU<QMatrix> phi_lu(phi);
    const double cond = condition_1(phi, phi_lu);
    if (!(cond <= kExtendedConditionLimit))
        throw SingularSystemError("kernel matrix Phi is not safely invertible", cond);
    const QVector w_hat = phi_lu.transpose().solve(m_rbf);
    const QMatrix phi_inv_p = phi_lu.transpose().solve(p);
    const QMatrix schur = p.transpose() * phi_inv_p;
    const Eigen::PartialPivLU<QMatrix> schur_lu(schur);
    const double schur_cond = condition_1(schur, schur_lu);
    if (!(schur_cond <= kExtendedConditionLimit))
        throw SingularSystemError("P^T Phi^-T P is not safely invertible", schur_cond);
    const QVector tau = p.transpose() * w_hat - m_poly;
    const QVector correction = phi_inv_p * schur_lu.solve(tau);

    // left-hand side from the bordered system, eliminated independently
    const Eigen::Index n = phi.rows(), k = p.cols();
    QMatrix a = QMatrix::Zero(n + k, n + k);
    a.topLeftCorner(n, n) = phi;
    a.topRightCorner(n, k) = p;
    a.bottomLeftCorner(k, n) = p.transpose();
    QVector rhs(n + k);
    rhs << m_rbf, m_poly;
    const QVector w = a.transpose().partialPivLu().solve(rhs).head(n);

    WeightDecomposition d;
    d.w = w.cast<double>();
    d.w_hat = w_hat.cast<double>();
    d.tau_moment = tau.cast<double>();
    d.correction = correction.cast<double>();
    d.identity_error = static_cast<double>((w - (w_hat - correction)).cwiseAbs().maxCoeff());
    d.phi_condition = cond;
    return d;
}

ExactnessReport check_exactness(const QuadratureRule& rule, const RbfSpace& space,
                                const MomentVector& moments) {
    if (rule.provenance == Provenance::interpolatory && rule.points.points != space.centers.points)
        throw std::invalid_argument("interpolatory rule must sit on the space's centers");
    const SaddleSystem sys = assemble(space, rule.points);
    // Q[phi_j] - I[phi_j] and Q[p_k] - I[p_k]
    const Eigen::VectorXd kernel_gap = sys.phi.transpose() * rule.weights - moments.rbf;
    const Eigen::VectorXd poly_gap = sys.poly.transpose() * rule.weights - moments.poly;

    ExactnessReport r{0.0, 0};
    auto record = [&r](double gap, double exact) {
        r.max_error = std::max(r.max_error, std::abs(gap) / std::max(1.0, std::abs(exact)));
        ++r.checked;
    };
    for (Eigen::Index k = 0; k < poly_gap.size(); ++k)
        record(poly_gap(k), moments.poly(k));

    if (rule.provenance == Provenance::least_squares || space.num_poly() == 0) {
        for (Eigen::Index j = 0; j < kernel_gap.size(); ++j)
            record(kernel_gap(j), moments.rbf(j));
        return r;
    }
    // orthonormal basis of null(P^T) over the centers: trailing columns of Q in P = QR
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(sys.poly);
    const Eigen::MatrixXd q = qr.householderQ();
    const auto k = sys.poly.cols();
    const auto n = sys.poly.rows();
    for (Eigen::Index j = k; j < n; ++j) {
        const auto a = q.col(j);
        record(a.dot(kernel_gap), a.dot(moments.rbf));
    }
    return r;
}

} // namespace rbfqf
