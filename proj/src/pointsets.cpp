#include "rbfqf/pointsets.hpp"

#include "rbfqf/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rbfqf {

namespace {

void check_domain(const Domain& d) {
    if (d.dim != 1 && d.dim != 2)
        throw std::invalid_argument("domain dimension must be 1 or 2");
    for (int i = 0; i < d.dim; ++i)
        if (!(d.lo[i] < d.hi[i]))
            throw std::invalid_argument("domain bounds must satisfy a < b on every axis");
}

Point map_unit(const Domain& d, double u, double v) {
    Point p{d.lo[0] + u * d.width(0), 0.0};
    if (d.dim == 2)
        p[1] = d.lo[1] + v * d.width(1);
    return p;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view spec) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad number '" + std::string(s) + "' in point set spec '" +
                                    std::string(spec) + "'");
    return value;
}

void require_two(const PointSet& ps) {
    if (ps.size() < 2)
        throw std::invalid_argument("distance measures need at least two points");
}

} // namespace

Domain Domain::interval(double a, double b) {
    Domain d{1, {a, 0.0}, {b, 0.0}};
    check_domain(d);
    return d;
}

Domain Domain::box(double a, double b, double c, double dd) {
    Domain d{2, {a, c}, {b, dd}};
    check_domain(d);
    return d;
}

Domain Domain::unit(int dim) {
    return dim == 1 ? interval(0.0, 1.0) : box(0.0, 1.0, 0.0, 1.0);
}

Point Domain::center() const noexcept {
    return {0.5 * (lo[0] + hi[0]), dim == 2 ? 0.5 * (lo[1] + hi[1]) : 0.0};
}

bool Domain::contains(const Point& x, double tol) const noexcept {
    for (int i = 0; i < dim; ++i)
        if (x[i] < lo[i] - tol || x[i] > hi[i] + tol)
            return false;
    return dim == 2 || x[1] == 0.0;
}

std::string Domain::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << '[' << lo[0] << ',' << hi[0] << ']';
    if (dim == 2)
        os << "x[" << lo[1] << ',' << hi[1] << ']';
    return os.str();
}

PointSet PointSet::prefix(std::size_t n) const {
    if (n > points.size())
        throw std::invalid_argument("prefix longer than the point set");
    return {domain, {points.begin(), points.begin() + static_cast<std::ptrdiff_t>(n)}};
}

PointSet equidistant(const Domain& domain, int n_per_axis) {
    check_domain(domain);
    if (n_per_axis < 2)
        throw std::invalid_argument("equidistant grid needs at least 2 points per axis");
    const double last = n_per_axis - 1;
    PointSet ps{domain, {}};
    if (domain.dim == 1) {
        ps.points.reserve(n_per_axis);
        for (int i = 0; i < n_per_axis; ++i)
            ps.points.push_back(map_unit(domain, i / last, 0.0));
        ps.points.back()[0] = domain.hi[0];
    } else {
        ps.points.reserve(static_cast<std::size_t>(n_per_axis) * n_per_axis);
        for (int j = 0; j < n_per_axis; ++j)
            for (int i = 0; i < n_per_axis; ++i) {
                Point p = map_unit(domain, i / last, j / last);
                if (i + 1 == n_per_axis)
                    p[0] = domain.hi[0];
                if (j + 1 == n_per_axis)
                    p[1] = domain.hi[1];
                ps.points.push_back(p);
            }
    }
    return ps;
}

double radical_inverse(std::uint64_t i, int base) {
    if (base < 2)
        throw std::invalid_argument("radical inverse base must be >= 2");
    const double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

PointSet halton(const Domain& domain, int n, int skip) {
    check_domain(domain);
    if (n < 1 || skip < 0)
        throw std::invalid_argument("halton needs n >= 1 and skip >= 0");
    PointSet ps{domain, {}};
    ps.points.reserve(n);
    for (int j = 0; j < n; ++j) {
        const auto idx = static_cast<std::uint64_t>(j) + 1 + static_cast<std::uint64_t>(skip);
        ps.points.push_back(
            map_unit(domain, radical_inverse(idx, 2), domain.dim == 2 ? radical_inverse(idx, 3) : 0.0));
    }
    return ps;
}

PointSet random_points(const Domain& domain, int n, std::uint64_t seed) {
    check_domain(domain);
    if (n < 1)
        throw std::invalid_argument("random point set needs n >= 1");
    const CounterRng rng(seed);
    const auto d = static_cast<std::uint64_t>(domain.dim);
    PointSet ps{domain, {}};
    ps.points.reserve(n);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(n); ++i)
        ps.points.push_back(
            map_unit(domain, rng.uniform(d * i), domain.dim == 2 ? rng.uniform(d * i + 1) : 0.0));

    auto sorted = ps.points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("random seed " + std::to_string(seed) +
                                    " produced coincident points");
    return ps;
}

std::vector<double> nearest_neighbor_distances(const PointSet& ps, Exec exec) {
    require_two(ps);
    const auto n = static_cast<std::ptrdiff_t>(ps.size());
    const Point* x = ps.points.data();
    std::vector<double> h(ps.size());
#pragma omp parallel for schedule(static) if (is_parallel(exec))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::ptrdiff_t j = 0; j < n; ++j)
            if (j != i)
                best = std::min(best, distance(x[i], x[j]));
        h[i] = best;
    }
    return h;
}

double min_distance(const PointSet& ps) {
    const auto h = nearest_neighbor_distances(ps);
    return *std::min_element(h.begin(), h.end());
}

double max_fill_distance(const PointSet& ps) {
    const auto h = nearest_neighbor_distances(ps);
    return *std::max_element(h.begin(), h.end());
}

Domain parse_domain(std::string_view spec) {
    if (spec == "unit1")
        return Domain::unit(1);
    if (spec == "unit2")
        return Domain::unit(2);
    const auto colon = spec.find(':');
    if (colon != std::string_view::npos) {
        const auto head = spec.substr(0, colon);
        const auto nums = split(spec.substr(colon + 1), ',');
        std::vector<double> v;
        for (auto s : nums)
            v.push_back(parse_number<double>(s, spec));
        if (head == "interval" && v.size() == 2)
            return Domain::interval(v[0], v[1]);
        if (head == "box" && v.size() == 4)
            return Domain::box(v[0], v[1], v[2], v[3]);
    }
    throw std::invalid_argument("unknown domain spec '" + std::string(spec) +
                                "' (expected unit1, unit2, interval:a,b or box:a,b,c,d)");
}

PointSet parse_pointset(std::string_view spec, const Domain& domain) {
    const auto parts = split(spec, ':');
    const auto kind = parts.front();
    if (kind == "equid" && parts.size() == 2)
        return equidistant(domain, parse_number<int>(parts[1], spec));
    if (kind == "halton" && (parts.size() == 2 || parts.size() == 3))
        return halton(domain, parse_number<int>(parts[1], spec),
                      parts.size() == 3 ? parse_number<int>(parts[2], spec) : 0);
    if (kind == "random" && parts.size() == 3)
        return random_points(domain, parse_number<int>(parts[1], spec),
                             parse_number<std::uint64_t>(parts[2], spec));
    throw std::invalid_argument("unknown point set spec '" + std::string(spec) +
                                "' (expected equid:<n>, halton:<n>[:skip] or random:<n>:<seed>)");
}

PointSequence::PointSequence(Kind kind, const Domain& domain, std::uint64_t seed_or_skip)
    : kind_(kind), domain_(domain), param_(seed_or_skip) {
    check_domain(domain);
}

PointSequence PointSequence::parse(std::string_view spec, const Domain& domain) {
    const auto parts = split(spec, ':');
    if (parts.front() == "halton" && parts.size() <= 2)
        return {Kind::halton, domain, parts.size() == 2 ? parse_number<std::uint64_t>(parts[1], spec) : 0};
    if (parts.front() == "random" && parts.size() == 2)
        return {Kind::random, domain, parse_number<std::uint64_t>(parts[1], spec)};
    throw std::invalid_argument("unknown point sequence '" + std::string(spec) +
                                "' (expected halton[:skip] or random:<seed>)");
}

PointSet PointSequence::first(int n) const {
    return kind_ == Kind::halton ? halton(domain_, n, static_cast<int>(param_))
                                 : random_points(domain_, n, param_);
}

std::string PointSequence::describe() const {
    return (kind_ == Kind::halton ? "halton:" : "random:") + std::to_string(param_);
}

} // namespace rbfqf
