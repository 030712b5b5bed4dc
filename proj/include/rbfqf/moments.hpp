#pragma once

#include "rbfqf/exec.hpp"
#include "rbfqf/integration.hpp"
#include "rbfqf/kernels.hpp"
#include "rbfqf/pointsets.hpp"
#include "rbfqf/space.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace rbfqf {

enum class MomentMethod { closed_form, triangle_decomposition, adaptive_numeric };

std::string to_string(MomentMethod m);

/// Integrals of the translated kernels (rbf) and polynomial basis (poly)
/// over the domain, with a method tag and error estimate per kernel entry.
struct MomentVector {
    Eigen::VectorXd rbf;
    Eigen::VectorXd poly;
    std::vector<MomentMethod> method;
    std::vector<double> error;
};

/// int_a^b exp(-eps^2 (x - c)^2) dx.
double gaussian_moment_1d(double eps, double center, double a, double b);

/// Product of the two 1D Gaussian moments.
double gaussian_moment_2d(double eps, const Point& center, const Domain& domain);

/// int_a^b phi(|x - c|) dx for a PHS kernel, a <= c <= b.
double phs_moment_1d(const Kernel& kernel, double center, double a, double b);

/// Integral of phi(|(x, y)|) over the triangle (0,0), (alpha,0), (alpha,beta).
/// Supports r^2 log r, r^3, r^5 and r^7; zero when alpha or beta is zero.
double iref_triangle(const Kernel& kernel, double alpha, double beta);

/// True when iref_triangle has a closed form for the kernel.
bool has_triangle_formula(const Kernel& kernel) noexcept;

/// 2D PHS moment by splitting the box into eight right triangles at the
/// center. The center must lie in the closed box.
double phs_moment_2d(const Kernel& kernel, const Point& center, const Domain& domain);

/// int_a^b phi(eps |x - c|) dx for a Wendland kernel, exact.
double wendland_moment_1d(const Kernel& kernel, double eps, double center, double a, double b);

/// 2D Wendland moment in polar coordinates around the center: the radial
/// integral is exact, the angular one adaptive with kinks as breakpoints.
QuadResult wendland_moment_2d(const Kernel& kernel, double eps, const Point& center,
                              const Domain& domain, double tol = 1e-11);

/// Adaptive tensor Gauss-Kronrod moment of phi(eps |x - c|) over the domain
/// clipped to the kernel support, with the center as a breakpoint. Used as
/// an oracle and as the fallback for kernels without closed forms.
/// Requires tol >= 1e-12; throws ConvergenceError when the budget runs out.
QuadResult numeric_moment(const Kernel& kernel, double eps, const Point& center,
                          const Domain& domain, double tol);

/// Moment of a single translated kernel with the preferred method.
struct SingleMoment {
    double value;
    MomentMethod method;
    double error;
};
SingleMoment kernel_moment(const Kernel& kernel, double eps, const Point& center,
                           const Domain& domain);

/// All moments of the space. Kernel entries are filled in parallel across
/// centers unless exec is serial.
MomentVector rbf_moments(const RbfSpace& space, const Domain& domain, Exec exec = Exec::parallel);

} // namespace rbfqf
