#include "doctest.h"

#include "rbfqf/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>

using namespace rbfqf;

TEST_SUITE("geometry") {

TEST_CASE("regimes of the uncovered area") {
    const auto bp = coverage_breakpoints(16);
    CHECK(bp.full_cover == doctest::Approx(3 * std::sqrt(2.0)));
    CHECK(bp.touching == doctest::Approx(6.0));
    CHECK(uncovered_area_equidistant({16, 0.9 * bp.full_cover}) == 0.0);
    // disjoint disks: four quarter disks per cell of side 1/m
    const double eps = 10.0, m = 3.0;
    CHECK(uncovered_area_equidistant({16, eps}) ==
          doctest::Approx(1.0 - std::numbers::pi * m * m / (eps * eps)).epsilon(1e-14));
}

TEST_CASE("continuity and monotonicity") {
    for (int n : {4, 16, 64}) {
        const auto bp = coverage_breakpoints(n);
        for (double b : {bp.full_cover, bp.touching}) {
            const double l = uncovered_area_equidistant({n, b * (1 - 1e-13)});
            const double r = uncovered_area_equidistant({n, b * (1 + 1e-13)});
            CHECK(std::abs(l - r) <= 1e-10);
        }
        double prev = -1.0;
        for (double e = 0.5 * bp.full_cover; e < 3 * bp.touching; e *= 1.01) {
            const double a = uncovered_area_equidistant({n, e});
            CHECK(a >= prev - 1e-15);
            prev = a;
        }
    }
    CHECK_THROWS_AS(uncovered_area_equidistant({5, 1.0}), std::invalid_argument);
}

TEST_CASE("monte carlo agrees with the closed form") {
    for (double f : {0.8, 1.2}) {
        const double eps = f * coverage_breakpoints(16).touching;
        const auto mc = monte_carlo_uncovered(equidistant(Domain::unit(2), 4), 1 / eps, 200000, 5);
        const double want = uncovered_area_equidistant({16, eps});
        CHECK(std::abs(mc.fraction - want) <= 4 * mc.std_error);
    }
}

TEST_CASE("monte carlo is independent of the thread count") {
    const PointSet p = halton(Domain::unit(2), 30);
    const auto a = monte_carlo_uncovered(p, 0.08, 300000, 11, Exec::serial);
    const auto b = monte_carlo_uncovered(p, 0.08, 300000, 11, Exec::parallel);
    CHECK(a.fraction == b.fraction);
    CHECK(a.samples == 300000);
    CHECK_THROWS_AS(monte_carlo_uncovered(p, 0.1, 10, 1), std::invalid_argument);
}

}
