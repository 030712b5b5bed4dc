#include "rbfqf/integration.hpp"

#include "rbfqf/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace rbfqf {

namespace {

// 15 Kronrod nodes on [-1, 1] with Kronrod and embedded Gauss weights. In
// Boost's layout the 7 Gauss nodes sit at the even positive-side indices.
struct Kronrod15 {
    std::array<double, 15> x{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};

    Kronrod15() {
        using K = boost::math::quadrature::gauss_kronrod<double, 15>;
        using G = boost::math::quadrature::gauss<double, 7>;
        const auto& ka = K::abscissa();
        const auto& kw = K::weights();
        const auto& gw = G::weights();
        for (std::size_t i = 0; i < 8; ++i) {
            const double g = i % 2 == 0 ? gw[i / 2] : 0.0;
            x[7 + i] = ka[i];
            x[7 - i] = -ka[i];
            wk[7 + i] = wk[7 - i] = kw[i];
            wg[7 + i] = wg[7 - i] = g;
        }
    }
};

const Kronrod15& kronrod() {
    static const Kronrod15 rule;
    return rule;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk_panel(const std::function<double(double)>& f, double a, double b) {
    const auto& r = kronrod();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double k = 0.0;
    double g = 0.0;
    for (std::size_t i = 0; i < 15; ++i) {
        const double v = f(c + h * r.x[i]);
        k += r.wk[i] * v;
        g += r.wg[i] * v;
    }
    return {a, b, h * k, std::abs(h * (k - g))};
}

struct Cell {
    Point lo, hi;
    double value, error;
    bool operator<(const Cell& o) const { return error < o.error; }
};

Cell gk_cell(const std::function<double(const Point&)>& f, const Point& lo, const Point& hi) {
    const auto& r = kronrod();
    const double cx = 0.5 * (lo[0] + hi[0]), hx = 0.5 * (hi[0] - lo[0]);
    const double cy = 0.5 * (lo[1] + hi[1]), hy = 0.5 * (hi[1] - lo[1]);
    double k = 0.0;
    double g = 0.0;
    for (std::size_t j = 0; j < 15; ++j) {
        const double y = cy + hy * r.x[j];
        double kr = 0.0;
        double gr = 0.0;
        for (std::size_t i = 0; i < 15; ++i) {
            const double v = f({cx + hx * r.x[i], y});
            kr += r.wk[i] * v;
            gr += r.wg[i] * v;
        }
        k += r.wk[j] * kr;
        g += r.wg[j] * gr;
    }
    const double area = hx * hy;
    return {lo, hi, area * k, std::abs(area * (k - g))};
}

std::vector<double> partition(double a, double b, std::span<const double> breaks) {
    std::vector<double> edges{a};
    for (double t : breaks)
        if (t > a && t < b)
            edges.push_back(t);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

template <class T>
double total_error(const std::vector<T>& heap) {
    double e = 0.0;
    for (const auto& item : heap)
        e += item.error;
    return e;
}

template <class T>
void push(std::vector<T>& heap, const T& item) {
    heap.push_back(item);
    std::push_heap(heap.begin(), heap.end());
}

template <class T>
T pop(std::vector<T>& heap) {
    std::pop_heap(heap.begin(), heap.end());
    T item = heap.back();
    heap.pop_back();
    return item;
}

template <class T>
QuadResult summarize(const std::vector<T>& heap, std::size_t evaluations) {
    QuadResult out{0.0, 0.0, evaluations};
    for (const auto& item : heap) {
        out.value += item.value;
        out.error += item.error;
    }
    return out;
}

} // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1)
        throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    GaussRule rule;
    auto weight = [n](double x) {
        const double dp = boost::math::legendre_p_prime(n, x);
        return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
        if (*it == 0.0)
            continue;
        rule.nodes.push_back(-*it);
        rule.weights.push_back(weight(*it));
    }
    for (double z : zeros) {
        rule.nodes.push_back(z);
        rule.weights.push_back(weight(z));
    }
    return rule;
}

double tensor_gauss(const std::function<double(const Point&)>& f, const Domain& domain, int n) {
    const auto rule = gauss_legendre(n);
    const double hx = 0.5 * domain.width(0), cx = domain.lo[0] + hx;
    if (domain.dim == 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f({cx + hx * rule.nodes[i], 0.0});
        return hx * s;
    }
    const double hy = 0.5 * domain.width(1), cy = domain.lo[1] + hy;
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        double row = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            row += rule.weights[i] * f({cx + hx * rule.nodes[i], cy + hy * rule.nodes[j]});
        s += rule.weights[j] * row;
    }
    return hx * hy * s;
}

QuadResult adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol,
                       std::span<const double> breaks, std::size_t max_panels) {
    if (!(a <= b) || !(tol > 0.0))
        throw std::invalid_argument("adaptive_1d needs a <= b and tol > 0");
    if (a == b)
        return {};
    std::vector<Panel> heap;
    double err = 0.0;
    std::size_t evals = 0;
    const auto edges = partition(a, b, breaks);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        push(heap, gk_panel(f, edges[i], edges[i + 1]));
        evals += 15;
    }
    err = total_error(heap);
    while (err > tol) {
        if (heap.size() >= max_panels)
            throw ConvergenceError("adaptive_1d exhausted its panel budget", err);
        const Panel worst = pop(heap);
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw ConvergenceError("adaptive_1d panel reached machine resolution", err);
        const Panel left = gk_panel(f, worst.a, mid);
        const Panel right = gk_panel(f, mid, worst.b);
        evals += 30;
        push(heap, left);
        push(heap, right);
        err += left.error + right.error - worst.error;
        // the running sum drifts by roundoff; refresh it near the target
        if (err <= tol)
            err = total_error(heap);
    }
    return summarize(heap, evals);
}

QuadResult adaptive_2d(const std::function<double(const Point&)>& f, const Point& lo,
                       const Point& hi, double tol, std::span<const double> xbreaks,
                       std::span<const double> ybreaks, std::size_t max_cells) {
    if (!(lo[0] <= hi[0]) || !(lo[1] <= hi[1]) || !(tol > 0.0))
        throw std::invalid_argument("adaptive_2d needs an ordered box and tol > 0");
    if (lo[0] == hi[0] || lo[1] == hi[1])
        return {};
    std::vector<Cell> heap;
    std::size_t evals = 0;
    double err = 0.0;
    const auto xs = partition(lo[0], hi[0], xbreaks);
    const auto ys = partition(lo[1], hi[1], ybreaks);
    for (std::size_t j = 0; j + 1 < ys.size(); ++j)
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            push(heap, gk_cell(f, {xs[i], ys[j]}, {xs[i + 1], ys[j + 1]}));
            evals += 225;
        }
    err = total_error(heap);
    while (err > tol) {
        if (heap.size() + 3 > max_cells)
            throw ConvergenceError("adaptive_2d exhausted its cell budget", err);
        const Cell worst = pop(heap);
        const Point mid{0.5 * (worst.lo[0] + worst.hi[0]), 0.5 * (worst.lo[1] + worst.hi[1])};
        const std::array<Cell, 4> kids{
            gk_cell(f, worst.lo, mid),
            gk_cell(f, {mid[0], worst.lo[1]}, {worst.hi[0], mid[1]}),
            gk_cell(f, {worst.lo[0], mid[1]}, {mid[0], worst.hi[1]}),
            gk_cell(f, mid, worst.hi),
        };
        evals += 4 * 225;
        err -= worst.error;
        for (const auto& c : kids) {
            push(heap, c);
            err += c.error;
        }
        if (err <= tol)
            err = total_error(heap);
    }
    return summarize(heap, evals);
}

} // namespace rbfqf
