#pragma once

#include "rbfqf/pointsets.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rbfqf {

/// The four smooth Genz families on [0, 1]^q, q in {1, 2}:
///   oscillatory    g1 = cos(2 pi b_1 + sum a_i x_i)
///   product_peak   g2 = prod (a_i^-2 + (x_i - b_i)^2)^-1
///   corner_peak    g3 = (1 + sum a_i x_i)^-(q + 1)
///   gaussian_peak  g4 = exp(-sum a_i^2 (x_i - b_i)^2)
enum class GenzFamily { oscillatory = 1, product_peak = 2, corner_peak = 3, gaussian_peak = 4 };

struct GenzFunction {
    GenzFamily family = GenzFamily::oscillatory;
    int q = 1;
    Point a{0.0, 0.0};
    Point b{0.0, 0.0};

    double operator()(const Point& x) const;
    std::string describe() const;
};

double evaluate(const GenzFunction& g, const Point& x);

/// Closed-form integral over [0, 1]^q. The product peak needs a_i > 0.
double reference_integral(const GenzFunction& g);

struct OracleResult {
    double value;
    int order;  // Gauss-Legendre points per axis at convergence
};

/// Tensor Gauss-Legendre of escalating order until two successive orders
/// agree to `tol`; throws ConvergenceError past max_order.
OracleResult oracle_integral(const GenzFunction& g, double tol = 1e-12, int max_order = 512);

/// a and b i.i.d. uniform on [0, 1]^q from CounterRng(seed).
GenzFunction random_genz(GenzFamily family, int q, std::uint64_t seed);

/// values + u, u_i uniform on [-magnitude, magnitude] from CounterRng(seed).
std::vector<double> add_noise(const std::vector<double>& values, double magnitude,
                              std::uint64_t seed);

GenzFamily parse_genz_family(std::string_view s);

/// `genz:<family>:<seed>` or `genz:<family>:a=a1[,a2]:b=b1[,b2]`, family 1-4
/// or its name.
GenzFunction parse_genz(std::string_view spec, int q);

} // namespace rbfqf
