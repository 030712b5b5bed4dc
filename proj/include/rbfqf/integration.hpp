#pragma once

#include "rbfqf/pointsets.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rbfqf {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;          // absolute error estimate
    std::size_t evaluations = 0;
};

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, n >= 1 (Boost.Math Legendre zeros, weights
/// 2 / ((1 - x^2) P_n'(x)^2)).
GaussRule gauss_legendre(int n);

/// Tensor Gauss-Legendre approximation of f over the domain.
double tensor_gauss(const std::function<double(const Point&)>& f, const Domain& domain, int n);

/// Globally adaptive 7/15 Gauss-Kronrod on [a, b]. The panel with the largest
/// error estimate is bisected until the summed estimate is <= tol. `breaks`
/// (clipped to (a, b)) seed the initial partition so known kinks fall on
/// panel edges. Throws ConvergenceError after max_panels panels.
QuadResult adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol,
                       std::span<const double> breaks = {}, std::size_t max_panels = 20000);

/// Tensor 7/15 Gauss-Kronrod over boxes with the same refinement strategy,
/// splitting cells into quarters. `xbreaks`/`ybreaks` seed the initial grid.
QuadResult adaptive_2d(const std::function<double(const Point&)>& f, const Point& lo,
                       const Point& hi, double tol, std::span<const double> xbreaks = {},
                       std::span<const double> ybreaks = {}, std::size_t max_cells = 400000);

} // namespace rbfqf
