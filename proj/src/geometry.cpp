#include "rbfqf/geometry.hpp"

#include "rbfqf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rbfqf {

namespace {

int grid_side(int n_points) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_points))));
    if (side < 2 || side * side != n_points)
        throw std::invalid_argument("coverage query needs N = n^2 with n >= 2");
    return side;
}

// Uniform bucket grid with cells no smaller than the query radius, so a
// query only inspects its own and the eight neighbouring cells.
class BucketGrid {
public:
    BucketGrid(const PointSet& ps, double radius) : lo_(ps.domain.lo) {
        for (int ax = 0; ax < 2; ++ax) {
            const double w = ax < ps.domain.dim ? ps.domain.width(ax) : 0.0;
            int cells = 1;
            if (w > 0.0 && radius > 0.0)
                cells = static_cast<int>(std::clamp(std::floor(w / radius), 1.0, 1024.0));
            else if (w > 0.0)
                cells = 1024;
            cells_[ax] = cells;
            size_[ax] = w > 0.0 ? w / cells : 1.0;
        }
        start_.assign(static_cast<std::size_t>(cells_[0] * cells_[1]) + 1, 0);
        std::vector<int> owner(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) {
            owner[i] = cell_of(ps[i]);
            ++start_[static_cast<std::size_t>(owner[i]) + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c)
            start_[c] += start_[c - 1];
        pts_.resize(ps.size());
        auto fill = start_;
        for (std::size_t i = 0; i < ps.size(); ++i)
            pts_[fill[static_cast<std::size_t>(owner[i])]++] = ps[i];
    }

    bool covered(const Point& x, double r2) const {
        const int cx = axis_cell(x[0], 0), cy = axis_cell(x[1], 1);
        for (int j = std::max(0, cy - 1); j <= std::min(cells_[1] - 1, cy + 1); ++j)
            for (int i = std::max(0, cx - 1); i <= std::min(cells_[0] - 1, cx + 1); ++i) {
                const auto c = static_cast<std::size_t>(j * cells_[0] + i);
                for (auto k = start_[c]; k < start_[c + 1]; ++k) {
                    const double dx = x[0] - pts_[k][0], dy = x[1] - pts_[k][1];
                    if (dx * dx + dy * dy <= r2)
                        return true;
                }
            }
        return false;
    }

private:
    int axis_cell(double v, int ax) const {
        const int c = static_cast<int>((v - lo_[ax]) / size_[ax]);
        return std::clamp(c, 0, cells_[ax] - 1);
    }
    int cell_of(const Point& x) const { return axis_cell(x[1], 1) * cells_[0] + axis_cell(x[0], 0); }

    Point lo_;
    int cells_[2]{1, 1};
    double size_[2]{1.0, 1.0};
    std::vector<std::size_t> start_;
    std::vector<Point> pts_;
};

} // namespace

CoverageBreakpoints coverage_breakpoints(int n_points) {
    const double m = grid_side(n_points) - 1;
    return {std::numbers::sqrt2 * m, 2.0 * m};
}

double uncovered_area_equidistant(const CoverageQuery& q) {
    if (!(q.eps > 0.0))
        throw std::invalid_argument("coverage query needs eps > 0");
    const double m = grid_side(q.n_points) - 1;
    const double e = q.eps;
    if (std::isinf(e))
        return 1.0;
    if (e > 2.0 * m)
        return 1.0 - std::numbers::pi * m * m / (e * e);
    if (e > std::numbers::sqrt2 * m) {
        const double s = std::sqrt(std::max(0.0, 4.0 * m * m - e * e)) / (2.0 * m);
        const double theta = 2.0 * std::asin(std::min(1.0, s));
        return 1.0 - std::numbers::pi * m * m / (e * e) +
               2.0 * (theta - std::sin(theta)) * m * m / (e * e);
    }
    return 0.0;
}

MonteCarloEstimate monte_carlo_uncovered(const PointSet& points, double radius,
                                         std::uint64_t samples, std::uint64_t seed, Exec exec) {
    if (samples < 10000)
        throw std::invalid_argument("Monte Carlo coverage needs at least 10^4 samples");
    if (!(radius >= 0.0))
        throw std::invalid_argument("coverage radius must be >= 0");
    constexpr std::uint64_t kBlock = 1u << 16;
    const BucketGrid grid(points, radius);
    const Domain& dom = points.domain;
    const double r2 = radius * radius;
    const auto blocks = static_cast<std::ptrdiff_t>((samples + kBlock - 1) / kBlock);
    std::uint64_t uncovered = 0;
#pragma omp parallel for schedule(static) reduction(+ : uncovered) if (is_parallel(exec))
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        const std::uint64_t first = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t count = std::min(kBlock, samples - first);
        std::uint64_t local = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            Point x{dom.lo[0] + dom.width(0) * rng.uniform(2 * i), 0.0};
            if (dom.dim == 2)
                x[1] = dom.lo[1] + dom.width(1) * rng.uniform(2 * i + 1);
            if (!grid.covered(x, r2))
                ++local;
        }
        uncovered += local;
    }
    const double p = static_cast<double>(uncovered) / static_cast<double>(samples);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples};
}

} // namespace rbfqf
