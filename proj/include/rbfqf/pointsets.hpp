#pragma once

#include "rbfqf/exec.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rbfqf {

/// Coordinates of a point in one or two dimensions. One-dimensional points
/// keep the second coordinate at 0 so distances need no dimension switch.
using Point = std::array<double, 2>;

inline double distance(const Point& a, const Point& b) noexcept {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}

/// Axis-aligned box [lo0, hi0] (x [lo1, hi1] in 2D).
struct Domain {
    int dim = 1;
    Point lo{0.0, 0.0};
    Point hi{1.0, 0.0};

    static Domain interval(double a, double b);
    static Domain box(double a, double b, double c, double d);
    static Domain unit(int dim);

    double width(int axis) const noexcept { return hi[axis] - lo[axis]; }
    double volume() const noexcept { return dim == 1 ? width(0) : width(0) * width(1); }
    Point center() const noexcept;
    bool contains(const Point& x, double tol = 0.0) const noexcept;
    std::string describe() const;

    friend bool operator==(const Domain&, const Domain&) = default;
};

struct PointSet {
    Domain domain;
    std::vector<Point> points;

    std::size_t size() const noexcept { return points.size(); }
    const Point& operator[](std::size_t i) const noexcept { return points[i]; }

    /// First n points, sharing the domain.
    PointSet prefix(std::size_t n) const;
};

/// Tensor grid with n points per axis including the boundary, x fastest.
PointSet equidistant(const Domain& domain, int n_per_axis);

/// Van der Corput radical inverse of i in the given base.
double radical_inverse(std::uint64_t i, int base);

/// Plain Halton points (base 2, and base 3 for y). Element j is the radical
/// inverse of j + 1 + skip, so skip = 0 starts at 1/2.
PointSet halton(const Domain& domain, int n, int skip = 0);

/// i.i.d. uniform points from CounterRng(seed). Point i uses counters
/// D*i .. D*i + D - 1, so prefixes nest. Throws std::invalid_argument if two
/// points coincide.
PointSet random_points(const Domain& domain, int n, std::uint64_t seed);

/// h_n = min over m != n of |x_n - x_m|.
std::vector<double> nearest_neighbor_distances(const PointSet& ps, Exec exec = Exec::parallel);

/// Smallest pairwise distance h_min.
double min_distance(const PointSet& ps);

/// Largest nearest-neighbour distance h_max.
double max_fill_distance(const PointSet& ps);

/// Parses `unit1`, `unit2`, `interval:<a>,<b>` or `box:<a>,<b>,<c>,<d>`.
Domain parse_domain(std::string_view spec);

/// Parses `equid:<n>`, `halton:<n>[:skip]` or `random:<n>:<seed>`.
PointSet parse_pointset(std::string_view spec, const Domain& domain);

/// Point sequence that can be extended deterministically (Halton or random);
/// used by the least-squares construction, which grows its data set.
class PointSequence {
public:
    enum class Kind { halton, random };

    PointSequence(Kind kind, const Domain& domain, std::uint64_t seed_or_skip = 0);

    static PointSequence parse(std::string_view spec, const Domain& domain);

    PointSet first(int n) const;
    Kind kind() const noexcept { return kind_; }
    const Domain& domain() const noexcept { return domain_; }
    std::string describe() const;

private:
    Kind kind_;
    Domain domain_;
    std::uint64_t param_;
};

} // namespace rbfqf
