#include "rbfqf/moments.hpp"

#include "rbfqf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

namespace rbfqf {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// erf(v) - erf(u) for u <= v; the erfc form avoids cancellation when both
// arguments lie far out on the same side.
double erf_diff(double u, double v) {
    if (u >= 0.0)
        return std::erfc(u) - std::erfc(v);
    if (v <= 0.0)
        return std::erfc(-v) - std::erfc(-u);
    return std::erf(v) - std::erf(u);
}

// L^(p+1) [log L / (p+1) - 1 / (p+1)^2], the integral of r^p log r on [0, L].
double phs_log_half(int p, double len) {
    if (len == 0.0)
        return 0.0;
    const double q = p + 1.0;
    return std::pow(len, q) * (std::log(len) / q - 1.0 / (q * q));
}

// sum_j c_j u^(j+1) / (j+1): antiderivative of the Wendland polynomial.
double wendland_antiderivative(std::span<const double> c, double u) {
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;)
        acc = acc * u + c[j] / static_cast<double>(j + 1);
    return acc * u;
}

// R^2 sum_j c_j s^(j+2) / (j+2) with s = min(rho / R, 1): the radial part of
// the polar integral, int_0^min(rho,R) phi(r / R) r dr.
double wendland_radial(std::span<const double> c, double rho, double radius) {
    const double s = std::min(rho / radius, 1.0);
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;)
        acc = acc * s + c[j] / static_cast<double>(j + 2);
    return radius * radius * acc * s * s;
}

// Integral of the radial Wendland function over [0, x] x [0, y], x, y >= 0.
QuadResult wendland_quadrant(std::span<const double> c, double radius, double x, double y,
                             double tol) {
    if (x == 0.0 || y == 0.0)
        return {};
    if (x >= radius && y >= radius)
        return {0.5 * std::numbers::pi * wendland_radial(c, radius, radius), 0.0, 0};
    auto integrand = [&](double theta) {
        const double ct = std::cos(theta), st = std::sin(theta);
        const double rho = std::min(ct > 0.0 ? x / ct : INFINITY, st > 0.0 ? y / st : INFINITY);
        return wendland_radial(c, rho, radius);
    };
    std::vector<double> breaks{std::atan2(y, x)};
    if (x < radius)
        breaks.push_back(std::acos(x / radius));
    if (y < radius)
        breaks.push_back(std::asin(y / radius));
    return adaptive_1d(integrand, 0.0, 0.5 * std::numbers::pi, tol, breaks);
}

// Oriented integral over the rectangle spanned by the origin and (x, y).
QuadResult wendland_corner(std::span<const double> c, double radius, double x, double y,
                           double tol) {
    auto q = wendland_quadrant(c, radius, std::abs(x), std::abs(y), tol);
    if ((x < 0.0) != (y < 0.0))
        q.value = -q.value;
    return q;
}

void require_center_inside(const Point& center, const Domain& domain) {
    if (!domain.contains(center))
        throw std::invalid_argument("moment center must lie in the closed domain");
}

} // namespace

std::string to_string(MomentMethod m) {
    switch (m) {
    case MomentMethod::closed_form:
        return "closed_form";
    case MomentMethod::triangle_decomposition:
        return "triangle_decomposition";
    case MomentMethod::adaptive_numeric:
        return "adaptive_numeric";
    }
    return "unknown";
}

double gaussian_moment_1d(double eps, double center, double a, double b) {
    if (!(eps > 0.0) || !(a < b))
        throw std::invalid_argument("gaussian moment needs eps > 0 and a < b");
    return kSqrtPi / (2.0 * eps) * erf_diff(eps * (a - center), eps * (b - center));
}

double gaussian_moment_2d(double eps, const Point& center, const Domain& domain) {
    if (domain.dim != 2)
        throw std::invalid_argument("gaussian_moment_2d needs a 2D domain");
    return gaussian_moment_1d(eps, center[0], domain.lo[0], domain.hi[0]) *
           gaussian_moment_1d(eps, center[1], domain.lo[1], domain.hi[1]);
}

double phs_moment_1d(const Kernel& kernel, double center, double a, double b) {
    if (!kernel.is_phs())
        throw std::invalid_argument("phs_moment_1d needs a polyharmonic kernel");
    if (!(a <= center && center <= b))
        throw std::invalid_argument("phs_moment_1d needs a <= center <= b");
    const int p = kernel.exponent();
    const double left = center - a;
    const double right = b - center;
    if (kernel.family() == KernelFamily::phs_odd)
        return (std::pow(left, p + 1) + std::pow(right, p + 1)) / (p + 1);
    return phs_log_half(p, left) + phs_log_half(p, right);
}

bool has_triangle_formula(const Kernel& kernel) noexcept {
    if (kernel.family() == KernelFamily::phs_odd)
        return kernel.exponent() == 3 || kernel.exponent() == 5 || kernel.exponent() == 7;
    return kernel.family() == KernelFamily::phs_even_log && kernel.exponent() == 2;
}

double iref_triangle(const Kernel& kernel, double alpha, double beta) {
    if (!has_triangle_formula(kernel))
        throw std::invalid_argument("no reference triangle formula for kernel " + kernel.name());
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw std::invalid_argument("reference triangle needs alpha, beta >= 0");
    if (alpha == 0.0 || beta == 0.0)
        return 0.0;
    const double a2 = alpha * alpha, b2 = beta * beta;
    if (kernel.family() == KernelFamily::phs_even_log)
        return alpha / 144.0 *
               (24.0 * a2 * alpha * std::atan(beta / alpha) +
                6.0 * beta * (3.0 * a2 + b2) * std::log(a2 + b2) - 33.0 * a2 * beta -
                7.0 * b2 * beta);
    const double as = std::asinh(beta / alpha);
    const double hyp = std::sqrt(a2 + b2);
    switch (kernel.exponent()) {
    case 3:
        return alpha / 40.0 * (3.0 * a2 * a2 * as + beta * (5.0 * a2 + 2.0 * b2) * hyp);
    case 5:
        return alpha / 336.0 *
               (15.0 * a2 * a2 * a2 * as +
                beta * (33.0 * a2 * a2 + 26.0 * a2 * b2 + 8.0 * b2 * b2) * hyp);
    default:
        // The published table prints 3346 here; 3456 = 2^7 3^3 is the value
        // that matches direct quadrature of r^7 over the triangle.
        return alpha / 3456.0 *
               (105.0 * a2 * a2 * a2 * a2 * as +
                beta *
                    (279.0 * a2 * a2 * a2 + 326.0 * a2 * a2 * b2 + 200.0 * a2 * b2 * b2 +
                     48.0 * b2 * b2 * b2) *
                    hyp);
    }
}

double phs_moment_2d(const Kernel& kernel, const Point& center, const Domain& domain) {
    if (domain.dim != 2)
        throw std::invalid_argument("phs_moment_2d needs a 2D domain");
    require_center_inside(center, domain);
    const double at = domain.lo[0] - center[0];
    const double bt = domain.hi[0] - center[0];
    const double ct = domain.lo[1] - center[1];
    const double dt = domain.hi[1] - center[1];
    auto iref = [&](double a, double b) { return iref_triangle(kernel, a, b); };
    auto keep = [](double prod) { return prod == 0.0 ? 0.0 : 1.0; };
    return keep(bt * dt) * (iref(bt, dt) + iref(dt, bt)) +
           keep(at * dt) * (iref(dt, -at) + iref(-at, dt)) +
           keep(at * ct) * (iref(-at, -ct) + iref(-ct, -at)) +
           keep(bt * ct) * (iref(-ct, bt) + iref(bt, -ct));
}

double wendland_moment_1d(const Kernel& kernel, double eps, double center, double a, double b) {
    if (kernel.family() != KernelFamily::wendland)
        throw std::invalid_argument("wendland_moment_1d needs a Wendland kernel");
    if (!(eps > 0.0) || !(a < b))
        throw std::invalid_argument("wendland moment needs eps > 0 and a < b");
    const auto c = wendland_coefficients(kernel.wendland_dimension(), kernel.wendland_smoothness());
    const double radius = 1.0 / eps;
    // int over [lo, hi] of phi(eps t) dt, 0 <= lo <= hi, clipped to the support
    auto half = [&](double lo, double hi) {
        hi = std::min(hi, radius);
        if (!(hi > lo))
            return 0.0;
        return (wendland_antiderivative(c, eps * hi) - wendland_antiderivative(c, eps * lo)) / eps;
    };
    double total = 0.0;
    if (b > center)
        total += half(std::max(a - center, 0.0), b - center);
    if (a < center)
        total += half(std::max(center - b, 0.0), center - a);
    return total;
}

QuadResult wendland_moment_2d(const Kernel& kernel, double eps, const Point& center,
                              const Domain& domain, double tol) {
    if (kernel.family() != KernelFamily::wendland)
        throw std::invalid_argument("wendland_moment_2d needs a Wendland kernel");
    if (domain.dim != 2 || !(eps > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("wendland_moment_2d needs a 2D domain, eps > 0 and tol > 0");
    const auto c = wendland_coefficients(kernel.wendland_dimension(), kernel.wendland_smoothness());
    const double radius = 1.0 / eps;
    const double x0 = std::max(domain.lo[0] - center[0], -radius);
    const double x1 = std::min(domain.hi[0] - center[0], radius);
    const double y0 = std::max(domain.lo[1] - center[1], -radius);
    const double y1 = std::min(domain.hi[1] - center[1], radius);
    if (!(x0 < x1) || !(y0 < y1))
        return {};
    const double part = 0.25 * tol;
    const std::array<QuadResult, 4> q{
        wendland_corner(c, radius, x1, y1, part),
        wendland_corner(c, radius, x0, y1, part),
        wendland_corner(c, radius, x1, y0, part),
        wendland_corner(c, radius, x0, y0, part),
    };
    QuadResult out;
    out.value = q[0].value - q[1].value - q[2].value + q[3].value;
    for (const auto& r : q) {
        out.error += r.error;
        out.evaluations += r.evaluations;
    }
    return out;
}

QuadResult numeric_moment(const Kernel& kernel, double eps, const Point& center,
                          const Domain& domain, double tol) {
    if (!(tol >= 1e-12))
        throw std::invalid_argument("numeric_moment needs tol >= 1e-12");
    if (!(eps > 0.0))
        throw std::invalid_argument("numeric_moment needs eps > 0");
    const double e = kernel.uses_shape() ? eps : 1.0;
    const double reach = kernel.compactly_supported() ? 1.0 / e : INFINITY;
    Point lo{std::max(domain.lo[0], center[0] - reach), 0.0};
    Point hi{std::min(domain.hi[0], center[0] + reach), 0.0};
    if (domain.dim == 1) {
        if (!(lo[0] < hi[0]))
            return {};
        const std::array<double, 1> breaks{center[0]};
        return adaptive_1d([&](double x) { return kernel.eval_unchecked(e * std::abs(x - center[0])); },
                           lo[0], hi[0], tol, breaks);
    }
    lo[1] = std::max(domain.lo[1], center[1] - reach);
    hi[1] = std::min(domain.hi[1], center[1] + reach);
    if (!(lo[0] < hi[0]) || !(lo[1] < hi[1]))
        return {};
    const std::array<double, 1> xb{center[0]};
    const std::array<double, 1> yb{center[1]};
    return adaptive_2d([&](const Point& x) { return kernel.eval_unchecked(e * distance(x, center)); },
                       lo, hi, tol, xb, yb);
}

SingleMoment kernel_moment(const Kernel& kernel, double eps, const Point& center,
                           const Domain& domain) {
    constexpr double kNumericTol = 1e-11;
    const bool one_d = domain.dim == 1;
    switch (kernel.family()) {
    case KernelFamily::gaussian:
        return {one_d ? gaussian_moment_1d(eps, center[0], domain.lo[0], domain.hi[0])
                      : gaussian_moment_2d(eps, center, domain),
                MomentMethod::closed_form, 0.0};
    case KernelFamily::wendland:
        if (one_d)
            return {wendland_moment_1d(kernel, eps, center[0], domain.lo[0], domain.hi[0]),
                    MomentMethod::closed_form, 0.0};
        else {
            const auto q = wendland_moment_2d(kernel, eps, center, domain, kNumericTol);
            return {q.value, MomentMethod::adaptive_numeric, q.error};
        }
    case KernelFamily::phs_odd:
    case KernelFamily::phs_even_log:
        if (domain.contains(center)) {
            if (one_d)
                return {phs_moment_1d(kernel, center[0], domain.lo[0], domain.hi[0]),
                        MomentMethod::closed_form, 0.0};
            if (has_triangle_formula(kernel))
                return {phs_moment_2d(kernel, center, domain), MomentMethod::triangle_decomposition,
                        0.0};
        }
        break;
    }
    const auto q = numeric_moment(kernel, eps, center, domain, kNumericTol);
    return {q.value, MomentMethod::adaptive_numeric, q.error};
}

MomentVector rbf_moments(const RbfSpace& space, const Domain& domain, Exec exec) {
    if (space.dim() != domain.dim)
        throw std::invalid_argument("space and domain dimensions differ");
    const auto n = static_cast<std::ptrdiff_t>(space.num_centers());
    MomentVector m;
    m.rbf.resize(n);
    m.method.resize(static_cast<std::size_t>(n));
    m.error.resize(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 8) if (is_parallel(exec))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            const auto s = kernel_moment(space.kernel, space.shape[k], space.centers[k], domain);
            m.rbf(i) = s.value;
            m.method[k] = s.method;
            m.error[k] = s.error;
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);
    m.poly = poly_moments(space.basis, domain);
    return m;
}

} // namespace rbfqf
