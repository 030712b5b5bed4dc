#include "rbfqf/lsquad.hpp"

#include "rbfqf/errors.hpp"
#include "rbfqf/rbfsystem.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace rbfqf {

LsProblem build_ls_problem(const RbfSpace& space, const PointSet& data, const MomentVector& moments,
                           const WeightFunction& omega) {
    const auto m = static_cast<Eigen::Index>(space.num_centers());
    const auto k = static_cast<Eigen::Index>(space.num_poly());
    const auto n = static_cast<Eigen::Index>(data.size());
    if (n < m + k)
        throw std::invalid_argument("least-squares rule needs N >= M + K data points");
    if (moments.rbf.size() != m || moments.poly.size() != k)
        throw std::invalid_argument("moment vector does not match the space");

    const SaddleSystem blocks = assemble(space, data, Exec::serial);
    LsProblem p{space, data, Eigen::MatrixXd(m + k, n), Eigen::VectorXd(m + k), Eigen::VectorXd(n)};
    p.b.topRows(m) = blocks.phi.transpose();
    p.b.bottomRows(k) = blocks.poly.transpose();
    p.moments << moments.rbf, moments.poly;

    const double base = data.domain.volume() / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = omega ? omega(data[static_cast<std::size_t>(i)]) : 1.0;
        if (!(w > 0.0))
            throw std::invalid_argument("weight function must be positive at the data points");
        p.r(i) = base * w;
    }
    return p;
}

LsProblem build_ls_problem(const RbfSpace& space, const PointSet& data, const Domain& domain) {
    return build_ls_problem(space, data, rbf_moments(space, domain));
}

LsSolution weighted_min_norm(const LsProblem& problem) {
    const Eigen::VectorXd sqrt_r = problem.r.cwiseSqrt();
    const Eigen::MatrixXd scaled = problem.b * sqrt_r.asDiagonal();
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(scaled);
    const Eigen::VectorXd z = cod.solve(problem.moments);
    const Eigen::VectorXd w = sqrt_r.cwiseProduct(z);

    const double m_norm = std::max(problem.moments.cwiseAbs().maxCoeff(),
                                   std::numeric_limits<double>::min());
    const double residual = (problem.b * w - problem.moments).cwiseAbs().maxCoeff() / m_norm;
    const Eigen::Index rank = cod.rank();
    const Eigen::Index rows = problem.b.rows();
    if (!(residual <= kLsResidualTol)) {
        if (rank < rows)
            throw RankDeficientError("exactness matrix B is rank deficient",
                                     static_cast<std::size_t>(rank), static_cast<std::size_t>(rows));
        throw Error("least-squares exactness residual " + std::to_string(residual) +
                    " exceeds tolerance");
    }
    QuadratureRule rule{problem.data, w, Eigen::VectorXd(), w.cwiseAbs().sum(), w.sum(),
                        Provenance::least_squares, 0.0, residual, describe(problem.space)};
    // ratio of the triangular factor's extreme diagonal entries: a cheap
    // condition indicator, not a bound
    const Eigen::VectorXd sv = cod.matrixT().diagonal().cwiseAbs();
    if (rank > 0)
        rule.condition = sv.head(rank).maxCoeff() / sv.head(rank).minCoeff();
    return {std::move(rule), rank, residual};
}

Algorithm1Result algorithm1(const RbfSpace& space, const PointSequence& data_sequence,
                            const Domain& domain, const Algorithm1Options& options,
                            const WeightFunction& omega, const MomentVector* moments) {
    const int m = static_cast<int>(space.num_centers());
    const int k = space.num_poly();
    const int n_start = options.n_start < 0 ? m + k : options.n_start;
    const int n_max = options.n_max > 0 ? options.n_max : 50 * m * m;
    if (n_start < m + k)
        throw std::invalid_argument("algorithm1 needs N_start >= M + K");
    if (n_max < n_start)
        throw std::invalid_argument("algorithm1 needs N_max >= N_start");
    if (omega && !moments)
        throw std::invalid_argument("a non-constant weight function needs explicit moments");

    const MomentVector own = moments ? MomentVector{} : rbf_moments(space, domain, Exec::serial);
    const MomentVector& mv = moments ? *moments : own;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    Algorithm1Result result;
    double best = -std::numeric_limits<double>::infinity();
    int n = n_start;
    while (true) {
        const PointSet data = data_sequence.first(n);
        Algorithm1Step step{n, nan, nan, 0, ""};
        try {
            LsSolution sol = weighted_min_norm(build_ls_problem(space, data, mv, omega));
            const auto report = stability_report(sol.rule);
            step.min_weight = report.min_weight;
            step.residual = sol.residual;
            step.rank = sol.rank;
            step.status = report.is_stable ? "positive" : "negative";
            if (report.is_stable || report.min_weight > best) {
                best = report.min_weight;
                result.rule = std::move(sol.rule);
                result.n_final = n;
            }
            if (report.is_stable) {
                result.success = true;
                result.trace.push_back(step);
                return result;
            }
        } catch (const RankDeficientError& e) {
            step.rank = static_cast<Eigen::Index>(e.rank());
            step.status = "rank_deficient";
        } catch (const Error&) {
            step.status = "residual";
        }
        result.trace.push_back(step);
        if (n >= n_max)
            return result;
        n = std::min(n_max, n + (options.geometric ? std::max(1, n / 10) : 1));
    }
}

PowerLaw fit_power_law(const std::vector<double>& m, const std::vector<double>& n) {
    if (m.size() != n.size() || m.size() < 2)
        throw std::invalid_argument("power-law fit needs at least two (M, N) pairs");
    const std::size_t count = m.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (!(m[i] > 0.0) || !(n[i] > 0.0))
            throw std::invalid_argument("power-law fit needs positive M and N");
        sx += std::log(m[i]);
        sy += std::log(n[i]);
    }
    const double mx = sx / count, my = sy / count;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double dx = std::log(m[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(n[i]) - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("power-law fit needs at least two distinct M");
    const double s = sxy / sxx;
    return {std::exp(my - s * mx), s};
}

RatioStudy ratio_study(const std::vector<int>& m_values, const Kernel& kernel, double eps,
                       int degree, const PointSequence& sequence, const Domain& domain,
                       const Algorithm1Options& options, Exec exec) {
    RatioStudy study;
    study.rows.resize(m_values.size());
    std::vector<std::exception_ptr> failures(m_values.size());
#pragma omp parallel for schedule(dynamic, 1) if (is_parallel(exec))
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m_values.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            const int m = m_values[idx];
            const RbfSpace space = RbfSpace::make(kernel, sequence.first(m),
                                                  ShapePolicy::constant(eps), degree);
            const auto res = algorithm1(space, sequence, domain, options);
            const double nan = std::numeric_limits<double>::quiet_NaN();
            RatioRow row{m, res.n_final, res.success, nan, nan};
            if (res.rule) {
                const auto report = stability_report(*res.rule);
                row.min_weight = report.min_weight;
                row.rule_of_one = report.rule_of_one;
            }
            study.rows[idx] = row;
        } catch (...) {
            failures[idx] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    std::vector<double> ms, ns;
    for (const auto& row : study.rows) {
        ms.push_back(row.m);
        ns.push_back(row.n_final);
    }
    study.fit = fit_power_law(ms, ns);
    return study;
}

} // namespace rbfqf
