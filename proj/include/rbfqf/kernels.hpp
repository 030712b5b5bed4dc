#pragma once

#include <span>
#include <string>
#include <string_view>

namespace rbfqf {

enum class KernelFamily { gaussian, wendland, phs_odd, phs_even_log };

/// Radial kernel phi(r). Shape parameters are not part of the kernel; callers
/// evaluate phi(eps * r).
///
///   gaussian        exp(-r^2)                      order 0
///   wendland(D, k)  compactly supported on [0, 1]  order 0
///   phs(p), p odd   r^p                            order (p + 1) / 2
///   phslog(p), even r^p log r                      order p / 2 + 1
class Kernel {
public:
    static Kernel gaussian();
    static Kernel wendland(int dimension, int smoothness);
    static Kernel phs(int exponent);
    static Kernel phs_log(int exponent);

    /// Parses `gaussian`, `wendland:<D>,<k>`, `phs:<p>` or `phslog:<p>`.
    static Kernel parse(std::string_view spec);

    KernelFamily family() const noexcept { return family_; }
    int exponent() const noexcept { return exponent_; }
    int wendland_dimension() const noexcept { return dim_; }
    int wendland_smoothness() const noexcept { return smooth_; }

    /// phi(r); throws std::domain_error for r < 0.
    double operator()(double r) const;

    /// Same as operator() without the argument check, for inner loops.
    double eval_unchecked(double r) const noexcept;

    /// Conditional positive definiteness order.
    int order() const noexcept;

    /// Smallest polynomial degree that guarantees unique interpolation
    /// (order - 1; -1 means no polynomial term is needed).
    int min_degree() const noexcept { return order() - 1; }

    bool compactly_supported() const noexcept { return family_ == KernelFamily::wendland; }
    bool uses_shape() const noexcept {
        return family_ == KernelFamily::gaussian || family_ == KernelFamily::wendland;
    }
    bool is_phs() const noexcept {
        return family_ == KernelFamily::phs_odd || family_ == KernelFamily::phs_even_log;
    }

    /// Canonical spec string, round-trips through parse().
    std::string name() const;

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    Kernel(KernelFamily f, int exponent, int dim, int smooth)
        : family_(f), exponent_(exponent), dim_(dim), smooth_(smooth) {}

    KernelFamily family_;
    int exponent_;
    int dim_;
    int smooth_;
};

/// Ascending power coefficients of the Wendland polynomial on [0, 1],
/// normalized to phi(0) = 1. Valid for D in {1, 2, 3}, k in {0, 1, 2}.
std::span<const double> wendland_coefficients(int dimension, int smoothness);

} // namespace rbfqf
