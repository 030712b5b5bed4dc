#pragma once
// Test-only reference computations. Nothing here calls the library's own
// quadrature, moment or solver code, so agreement is an independent check.

#include "rbfqf/kernels.hpp"
#include "rbfqf/pointsets.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using rbfqf::Point;

struct Nodes {
    std::vector<double> x, w;
};

// Gauss-Legendre on [-1, 1] by Newton iteration on the three-term recurrence.
inline Nodes legendre(int n) {
    Nodes r{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1.0;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        r.x[i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

// Composite Gauss-Legendre over [a, b]: the interval is cut at every break,
// each piece into `panels` equal panels of `order` nodes.
inline double integrate_1d(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breaks = {}, int panels = 8, int order = 20) {
    static const Nodes g = legendre(20);
    const Nodes gn = order == 20 ? g : legendre(order);
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double sum = 0.0;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double lo = std::max(a, breaks[s]), hi = std::min(b, breaks[s + 1]);
        if (!(hi > lo))
            continue;
        const double h = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = lo + (p + 0.5) * h;
            for (std::size_t i = 0; i < gn.x.size(); ++i)
                sum += 0.5 * h * gn.w[i] * f(c + 0.5 * h * gn.x[i]);
        }
    }
    return sum;
}

// Integral of the radial function g(r) over a box containing `c`, in polar
// coordinates around c. `kinks` are radii where g is not smooth.
inline double radial_box(const std::function<double(double)>& g, const Point& c, const Point& lo,
                         const Point& hi, const std::vector<double>& kinks = {}) {
    const double pi = std::numbers::pi;
    // distances to the right, top, left and bottom sides, with outward normals
    const double d[4] = {hi[0] - c[0], hi[1] - c[1], c[0] - lo[0], c[1] - lo[1]};
    std::vector<double> breaks{std::atan2(hi[1] - c[1], hi[0] - c[0]),
                               std::atan2(hi[1] - c[1], lo[0] - c[0]),
                               std::atan2(lo[1] - c[1], lo[0] - c[0]),
                               std::atan2(lo[1] - c[1], hi[0] - c[0])};
    for (int s = 0; s < 4; ++s)
        for (double k : kinks)
            if (k > d[s] && d[s] > 0.0) {
                const double t = std::acos(d[s] / k);
                breaks.push_back(s * pi / 2 + t);
                breaks.push_back(s * pi / 2 - t);
            }
    for (double& b : breaks)
        b = std::remainder(b, 2 * pi);
    auto rho = [&](double th) {
        const double ct = std::cos(th), st = std::sin(th);
        double r = INFINITY;
        if (ct > 1e-300) r = std::min(r, d[0] / ct);
        if (st > 1e-300) r = std::min(r, d[1] / st);
        if (ct < -1e-300) r = std::min(r, -d[2] / ct);
        if (st < -1e-300) r = std::min(r, -d[3] / st);
        return r;
    };
    auto inner = [&](double th) {
        const double R = rho(th);
        std::vector<double> kb;
        for (double k : kinks)
            if (k < R)
                kb.push_back(k);
        return integrate_1d([&](double r) { return g(r) * r; }, 0.0, R, kb, 4);
    };
    return integrate_1d(inner, -pi, pi, breaks, 8);
}

inline double kernel_moment_2d(const rbfqf::Kernel& k, double eps, const Point& c,
                               const rbfqf::Domain& dom) {
    std::vector<double> kinks;
    if (k.compactly_supported())
        kinks.push_back(1.0 / eps);
    return radial_box([&](double r) { return k(eps * r); }, c, dom.lo, dom.hi, kinks);
}

inline double kernel_moment_1d(const rbfqf::Kernel& k, double eps, double c, double a, double b) {
    std::vector<double> br{c};
    // geometric grading toward the center resolves the log factor
    for (int j = 1; j <= 40; ++j) {
        br.push_back(c - (c - a) * std::ldexp(1.0, -j));
        br.push_back(c + (b - c) * std::ldexp(1.0, -j));
    }
    if (k.compactly_supported()) {
        br.push_back(c - 1.0 / eps);
        br.push_back(c + 1.0 / eps);
    }
    return integrate_1d([&](double x) { return k(eps * std::abs(x - c)); }, a, b, br, 2);
}

// Composite trapezoid weights on n equispaced nodes of [0, 1].
inline Eigen::VectorXd trapezoid(int n) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / (n - 1));
    w(0) *= 0.5;
    w(n - 1) *= 0.5;
    return w;
}

// Interpolatory weights by a full-pivoting dense solve of the transposed
// saddle system, assembled from scratch with plain monomials.
inline Eigen::VectorXd dense_weights(const rbfqf::Kernel& k, const std::vector<Point>& x,
                                     const std::vector<double>& eps, int dim, int degree,
                                     const Eigen::VectorXd& m_rbf, const Eigen::VectorXd& m_poly) {
    std::vector<std::array<int, 2>> ex;
    for (int t = 0; t <= degree; ++t)
        for (int i = t; i >= 0; --i)
            if (dim == 2 || t - i == 0)
                ex.push_back({i, t - i});
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto kk = static_cast<Eigen::Index>(ex.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + kk, n + kk);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = k(eps[j] * rbfqf::distance(x[i], x[j]));
        for (Eigen::Index q = 0; q < kk; ++q) {
            a(i, n + q) = std::pow(x[i][0], ex[q][0]) * std::pow(x[i][1], ex[q][1]);
            a(n + q, i) = a(i, n + q);
        }
    }
    Eigen::VectorXd rhs(n + kk);
    rhs << m_rbf, m_poly;
    return a.transpose().fullPivLu().solve(rhs).head(n);
}

// Exact monomial moment over a box.
inline double monomial_moment(const std::array<int, 2>& e, const rbfqf::Domain& dom) {
    auto one = [](int p, double a, double b) {
        return (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
    };
    double v = one(e[0], dom.lo[0], dom.hi[0]);
    if (dom.dim == 2)
        v *= one(e[1], dom.lo[1], dom.hi[1]);
    return v;
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oracle
