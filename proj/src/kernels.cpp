#include "rbfqf/kernels.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rbfqf {

namespace {

constexpr int kMaxWendlandDegree = 8;
using WendlandPoly = std::array<double, kMaxWendlandDegree + 1>;

// (1 - r)^l * factor(r), expanded into ascending powers of r.
constexpr WendlandPoly expand(int l, std::array<double, 3> factor, double scale) {
    WendlandPoly out{};
    WendlandPoly base{};
    base[0] = 1.0;
    for (int i = 0; i < l; ++i) {
        WendlandPoly next{};
        for (int j = 0; j < kMaxWendlandDegree; ++j) {
            next[j] += base[j];
            next[j + 1] -= base[j];
        }
        base = next;
    }
    for (int i = 0; i <= kMaxWendlandDegree; ++i)
        for (int j = 0; j < 3 && i + j <= kMaxWendlandDegree; ++j)
            out[i + j] += base[i] * factor[j] / scale;
    return out;
}

// Minimal-degree Wendland functions phi_{D,k} (H. Wendland, "Piecewise
// polynomial, positive definite and compactly supported radial functions of
// minimal degree", Adv. Comput. Math. 4, 1995), l = floor(D/2) + k + 1,
// rescaled so that phi(0) = 1:
//   D = 1:    k=0 (1-r)_+        k=1 (1-r)_+^3 (3r+1)   k=2 (1-r)_+^5 (8r^2+5r+1)
//   D = 2, 3: k=0 (1-r)_+^2      k=1 (1-r)_+^4 (4r+1)   k=2 (1-r)_+^6 (35r^2+18r+3)/3
constexpr std::array<std::array<WendlandPoly, 3>, 2> kWendland{{
    {expand(1, {1, 0, 0}, 1), expand(3, {1, 3, 0}, 1), expand(5, {1, 5, 8}, 1)},
    {expand(2, {1, 0, 0}, 1), expand(4, {1, 4, 0}, 1), expand(6, {3, 18, 35}, 3)},
}};

constexpr std::array<std::array<int, 3>, 2> kWendlandDegree{{
    {1, 4, 7},
    {2, 5, 8},
}};

int parse_int(std::string_view s, std::string_view context) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad integer '" + std::string(s) + "' in kernel spec '" +
                                    std::string(context) + "'");
    return value;
}

} // namespace

std::span<const double> wendland_coefficients(int dimension, int smoothness) {
    if (dimension < 1 || dimension > 3 || smoothness < 0 || smoothness > 2)
        throw std::invalid_argument("Wendland kernel requires D in {1,2,3} and k in {0,1,2}");
    const int row = dimension == 1 ? 0 : 1;
    const auto& poly = kWendland[row][smoothness];
    return {poly.data(), static_cast<std::size_t>(kWendlandDegree[row][smoothness] + 1)};
}

Kernel Kernel::gaussian() { return {KernelFamily::gaussian, 0, 0, 0}; }

Kernel Kernel::wendland(int dimension, int smoothness) {
    (void)wendland_coefficients(dimension, smoothness);
    return {KernelFamily::wendland, 0, dimension, smoothness};
}

Kernel Kernel::phs(int exponent) {
    if (exponent < 1 || exponent % 2 == 0)
        throw std::invalid_argument("odd polyharmonic spline needs an odd exponent >= 1");
    return {KernelFamily::phs_odd, exponent, 0, 0};
}

Kernel Kernel::phs_log(int exponent) {
    if (exponent < 2 || exponent % 2 != 0)
        throw std::invalid_argument("r^p log r spline needs an even exponent >= 2");
    return {KernelFamily::phs_even_log, exponent, 0, 0};
}

Kernel Kernel::parse(std::string_view spec) {
    if (spec == "gaussian")
        return gaussian();
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("unknown kernel spec '" + std::string(spec) + "'");
    const auto head = spec.substr(0, colon);
    const auto tail = spec.substr(colon + 1);
    if (head == "phs")
        return phs(parse_int(tail, spec));
    if (head == "phslog")
        return phs_log(parse_int(tail, spec));
    if (head == "wendland") {
        const auto comma = tail.find(',');
        if (comma == std::string_view::npos)
            throw std::invalid_argument("wendland spec must be wendland:<D>,<k>");
        return wendland(parse_int(tail.substr(0, comma), spec),
                        parse_int(tail.substr(comma + 1), spec));
    }
    throw std::invalid_argument("unknown kernel spec '" + std::string(spec) + "'");
}

double Kernel::operator()(double r) const {
    if (!(r >= 0.0))
        throw std::domain_error("kernel evaluated at negative or NaN radius");
    return eval_unchecked(r);
}

double Kernel::eval_unchecked(double r) const noexcept {
    switch (family_) {
    case KernelFamily::gaussian:
        return std::exp(-r * r);
    case KernelFamily::wendland: {
        if (r >= 1.0)
            return 0.0;
        const auto c = wendland_coefficients(dim_, smooth_);
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            acc = acc * r + *it;
        return acc;
    }
    case KernelFamily::phs_odd:
        return std::pow(r, exponent_);
    case KernelFamily::phs_even_log:
        // continuous extension r^p log r -> 0 at r = 0
        return r > 0.0 ? std::pow(r, exponent_) * std::log(r) : 0.0;
    }
    return 0.0;
}

int Kernel::order() const noexcept {
    switch (family_) {
    case KernelFamily::gaussian:
    case KernelFamily::wendland:
        return 0;
    case KernelFamily::phs_odd:
        return (exponent_ + 1) / 2;
    case KernelFamily::phs_even_log:
        return exponent_ / 2 + 1;
    }
    return 0;
}

std::string Kernel::name() const {
    switch (family_) {
    case KernelFamily::gaussian:
        return "gaussian";
    case KernelFamily::wendland:
        return "wendland:" + std::to_string(dim_) + "," + std::to_string(smooth_);
    case KernelFamily::phs_odd:
        return "phs:" + std::to_string(exponent_);
    case KernelFamily::phs_even_log:
        return "phslog:" + std::to_string(exponent_);
    }
    return {};
}

} // namespace rbfqf
