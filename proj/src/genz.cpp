#include "rbfqf/genz.hpp"

#include "rbfqf/errors.hpp"
#include "rbfqf/integration.hpp"
#include "rbfqf/rng.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rbfqf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad number '" + std::string(s) + "' in Genz spec");
    return v;
}

Point parse_vector(std::string_view s, int q) {
    Point p{0.0, 0.0};
    const auto comma = s.find(',');
    p[0] = parse_double(s.substr(0, comma));
    if (q == 2) {
        if (comma == std::string_view::npos)
            throw std::invalid_argument("2D Genz parameters need two components");
        p[1] = parse_double(s.substr(comma + 1));
    } else if (comma != std::string_view::npos) {
        throw std::invalid_argument("1D Genz parameters take one component");
    }
    return p;
}

} // namespace

double GenzFunction::operator()(const Point& x) const { return evaluate(*this, x); }

std::string GenzFunction::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "genz:" << static_cast<int>(family) << ":a=" << a[0];
    if (q == 2)
        os << ',' << a[1];
    os << ":b=" << b[0];
    if (q == 2)
        os << ',' << b[1];
    return os.str();
}

double evaluate(const GenzFunction& g, const Point& x) {
    switch (g.family) {
    case GenzFamily::oscillatory: {
        double arg = kTwoPi * g.b[0];
        for (int i = 0; i < g.q; ++i)
            arg += g.a[i] * x[i];
        return std::cos(arg);
    }
    case GenzFamily::product_peak: {
        double v = 1.0;
        for (int i = 0; i < g.q; ++i) {
            const double d = x[i] - g.b[i];
            v /= 1.0 / (g.a[i] * g.a[i]) + d * d;
        }
        return v;
    }
    case GenzFamily::corner_peak: {
        double s = 1.0;
        for (int i = 0; i < g.q; ++i)
            s += g.a[i] * x[i];
        return std::pow(s, -(g.q + 1));
    }
    case GenzFamily::gaussian_peak: {
        double s = 0.0;
        for (int i = 0; i < g.q; ++i) {
            const double d = x[i] - g.b[i];
            s += g.a[i] * g.a[i] * d * d;
        }
        return std::exp(-s);
    }
    }
    return 0.0;
}

double reference_integral(const GenzFunction& g) {
    if (g.q != 1 && g.q != 2)
        throw std::invalid_argument("Genz reference integrals are provided for q in {1, 2}");
    switch (g.family) {
    case GenzFamily::oscillatory: {
        // Re exp(i(2 pi b1 + sum a_i/2)) prod 2 sin(a_i/2)/a_i
        double phase = kTwoPi * g.b[0];
        double amp = 1.0;
        for (int i = 0; i < g.q; ++i) {
            const double h = 0.5 * g.a[i];
            phase += h;
            amp *= h == 0.0 ? 1.0 : std::sin(h) / h;
        }
        return std::cos(phase) * amp;
    }
    case GenzFamily::product_peak: {
        double v = 1.0;
        for (int i = 0; i < g.q; ++i) {
            const double a = g.a[i];
            if (!(a > 0.0))
                throw std::invalid_argument("product peak integral needs a_i > 0");
            v *= a * (std::atan(a * (1.0 - g.b[i])) + std::atan(a * g.b[i]));
        }
        return v;
    }
    case GenzFamily::corner_peak: {
        const double a1 = g.a[0];
        if (g.q == 1)
            return 1.0 / (1.0 + a1);
        const double a2 = g.a[1];
        // int int (1 + a1 x + a2 y)^-3 = 1/(2 a1 a2) [1 - 1/(1+a1) - 1/(1+a2) + 1/(1+a1+a2)],
        // simplified so that a_i -> 0 stays finite
        return (2.0 + a1 + a2) / (2.0 * (1.0 + a1) * (1.0 + a2) * (1.0 + a1 + a2));
    }
    case GenzFamily::gaussian_peak: {
        double v = 1.0;
        for (int i = 0; i < g.q; ++i) {
            const double a = g.a[i];
            if (a == 0.0)
                continue;
            v *= std::sqrt(std::numbers::pi) / (2.0 * a) *
                 (std::erf(a * (1.0 - g.b[i])) + std::erf(a * g.b[i]));
        }
        return v;
    }
    }
    return 0.0;
}

OracleResult oracle_integral(const GenzFunction& g, double tol, int max_order) {
    const Domain dom = Domain::unit(g.q);
    auto f = [&g](const Point& x) { return evaluate(g, x); };
    double prev = tensor_gauss(f, dom, 4);
    for (int n = 8; n <= max_order; n *= 2) {
        const double cur = tensor_gauss(f, dom, n);
        if (std::abs(cur - prev) <= tol)
            return {cur, n};
        prev = cur;
    }
    throw ConvergenceError("Genz oracle did not settle", std::abs(prev));
}

GenzFunction random_genz(GenzFamily family, int q, std::uint64_t seed) {
    if (q != 1 && q != 2)
        throw std::invalid_argument("Genz dimension must be 1 or 2");
    const CounterRng rng(seed);
    GenzFunction g{family, q, {0.0, 0.0}, {0.0, 0.0}};
    for (int i = 0; i < q; ++i) {
        g.a[i] = rng.uniform(static_cast<std::uint64_t>(i));
        g.b[i] = rng.uniform(static_cast<std::uint64_t>(q + i));
    }
    return g;
}

std::vector<double> add_noise(const std::vector<double>& values, double magnitude,
                              std::uint64_t seed) {
    if (!(magnitude >= 0.0))
        throw std::invalid_argument("noise magnitude must be >= 0");
    const CounterRng rng(seed);
    std::vector<double> out(values);
    if (magnitude == 0.0)
        return out;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += magnitude * (2.0 * rng.uniform(i) - 1.0);
    return out;
}

GenzFamily parse_genz_family(std::string_view s) {
    if (s == "1" || s == "oscillatory")
        return GenzFamily::oscillatory;
    if (s == "2" || s == "product_peak")
        return GenzFamily::product_peak;
    if (s == "3" || s == "corner_peak")
        return GenzFamily::corner_peak;
    if (s == "4" || s == "gaussian_peak")
        return GenzFamily::gaussian_peak;
    throw std::invalid_argument("unknown Genz family '" + std::string(s) + "'");
}

GenzFunction parse_genz(std::string_view spec, int q) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = spec.find(':', start);
        parts.push_back(spec.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    if (parts.size() < 3 || parts[0] != "genz")
        throw std::invalid_argument("Genz spec must be genz:<family>:<seed> or genz:<family>:a=..:b=..");
    const GenzFamily fam = parse_genz_family(parts[1]);
    if (parts.size() == 3) {
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), seed);
        if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size())
            throw std::invalid_argument("bad Genz seed '" + std::string(parts[2]) + "'");
        return random_genz(fam, q, seed);
    }
    if (parts.size() == 4 && parts[2].starts_with("a=") && parts[3].starts_with("b="))
        return {fam, q, parse_vector(parts[2].substr(2), q), parse_vector(parts[3].substr(2), q)};
    throw std::invalid_argument("bad Genz spec '" + std::string(spec) + "'");
}

} // namespace rbfqf
