#pragma once

#include "rbfqf/exec.hpp"
#include "rbfqf/pointsets.hpp"

#include <cstdint>

namespace rbfqf {

/// Unit-square grid of N = n^2 points (n >= 2) with support radius 1 / eps.
struct CoverageQuery {
    int n_points;
    double eps;
};

/// Area of [0,1]^2 not covered by the disks of radius 1/eps around the
/// equidistant grid points, with m = sqrt(N) - 1:
///   eps > 2m:            1 - pi m^2 / eps^2
///   sqrt(2) m < eps <= 2m: the same plus 2 (theta - sin theta) m^2 / eps^2,
///                        theta = 2 asin(sqrt(4m^2 - eps^2) / (2m))
///   eps <= sqrt(2) m:    0
/// Each grid cell holds four quarter disks and three disks never meet in
/// the middle regime, so the formula is exact for the clipped grid.
double uncovered_area_equidistant(const CoverageQuery& q);

/// The two breakpoints sqrt(2) m and 2 m.
struct CoverageBreakpoints {
    double full_cover;  // sqrt(2) m
    double touching;    // 2 m
};
CoverageBreakpoints coverage_breakpoints(int n_points);

struct MonteCarloEstimate {
    double fraction;
    double std_error;  // sqrt(p (1 - p) / samples)
    std::uint64_t samples;
};

/// Fraction of uniform samples on the point set's domain farther than
/// `radius` from every point. Samples come in blocks of 2^16 with per-block
/// seeds derived from `seed`, so serial and parallel runs agree exactly.
/// Needs samples >= 10^4.
MonteCarloEstimate monte_carlo_uncovered(const PointSet& points, double radius,
                                         std::uint64_t samples, std::uint64_t seed,
                                         Exec exec = Exec::parallel);

} // namespace rbfqf
