// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"
#include "rbfqf/errors.hpp"
#include "rbfqf/experiments.hpp"
#include "rbfqf/lsquad.hpp"
#include "rbfqf/moments.hpp"
#include "rbfqf/polybasis.hpp"
#include "rbfqf/quadrature.hpp"
#include "rbfqf/rbfsystem.hpp"
#include "rbfqf/rng.hpp"
#include "rbfqf/geometry.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace rbfqf;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out{false, {}};
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit_s <= 0 || secs < limit_s;
    const bool pass = out.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s C%d %s: %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", id, title, out.detail.c_str(),
                secs, in_time ? "" : " over time limit");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::size_t column(const Table& t, const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    if (it == t.columns.end())
        throw std::logic_error("missing column " + name);
    return static_cast<std::size_t>(it - t.columns.begin());
}

double num(const Cell& c) {
    if (const double* d = std::get_if<double>(&c))
        return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c))
        return static_cast<double>(*i);
    return std::nan("");
}

bool stable_with_unit_measure(const QuadratureRule& r, double& worst_neg, double& worst_gap) {
    const StabilityReport s = stability_report(r);
    worst_neg = std::min(worst_neg, s.min_weight / s.stability_measure);
    const double gap = (s.stability_measure - s.rule_of_one) / s.stability_measure;
    worst_gap = std::max(worst_gap, gap);
    return s.min_weight >= -1e-12 * s.stability_measure && gap <= 1e-12;
}

std::string render(const Table& t, const Config& c) {
    std::ostringstream os;
    write_csv(os, t, metadata(t.experiment, c));
    return os.str();
}

} // namespace

int main() {
    criterion(1, "linear spline weights equal the composite trapezoid rule", 1.0, [] {
        double worst = 0.0;
        for (int n : {3, 11, 101}) {
            const RbfSpace s = RbfSpace::make(Kernel::phs(1), equidistant(Domain::unit(1), n),
                                              ShapePolicy::constant(1.0), -1);
            const QuadratureRule r = interpolatory_weights(s, Domain::unit(1));
            worst = std::max(worst, (r.weights - oracle::trapezoid(n)).cwiseAbs().maxCoeff());
        }
        return Outcome{worst <= 1e-10, fmt("max |w - trapezoid| = %.3g", worst)};
    });

    criterion(2, "Wendland rules on equidistant points with eps = 1/h are stable", 30.0, [] {
        double neg = 0.0, gap = 0.0;
        int bad = 0, cases = 0;
        for (int k : {0, 1, 2})
            for (int n : {50, 100, 200})
                for (int d : {-1, 0, 1, 2}) {
                    const PointSet x = equidistant(Domain::unit(1), n);
                    const RbfSpace s =
                        RbfSpace::make(Kernel::wendland(1, k), x,
                                       ShapePolicy::equal_moment_boundary(1.0 / min_distance(x)), d);
                    ++cases;
                    bad += !stable_with_unit_measure(interpolatory_weights(s, Domain::unit(1)),
                                                     neg, gap);
                }
        return Outcome{bad == 0, std::to_string(cases - bad) + "/" + std::to_string(cases) +
                                     " stable, min w/sum|w| = " + fmt("%.3g", neg) +
                                     ", max relative gap = " + fmt("%.3g", gap)};
    });

    criterion(3, "Wendland rules on Halton points with eps = 1/h_min are stable", 10.0, [] {
        double neg = 0.0, gap = 0.0;
        int bad = 0, cases = 0;
        const PointSet x = halton(Domain::unit(1), 100);
        const double eps = 1.0 / min_distance(x);
        for (int k : {0, 1, 2})
            for (int d : {-1, 0, 1, 2}) {
                const RbfSpace s =
                    RbfSpace::make(Kernel::wendland(1, k), x, ShapePolicy::constant(eps), d);
                ++cases;
                bad += !stable_with_unit_measure(interpolatory_weights(s, Domain::unit(1)), neg,
                                                 gap);
            }
        return Outcome{bad == 0, std::to_string(cases - bad) + "/" + std::to_string(cases) +
                                     " stable, min w/sum|w| = " + fmt("%.3g", neg) +
                                     ", max relative gap = " + fmt("%.3g", gap)};
    });

    criterion(4, "closed-form moments agree with the adaptive oracle", 120.0, [] {
        const CounterRng rng(2024);
        std::uint64_t ctr = 0;
        auto u = [&] { return rng.uniform(ctr++); };
        const char* phs_1d[] = {"phs:1", "phs:3", "phs:5", "phs:7", "phslog:2", "phslog:4"};
        const char* phs_2d[] = {"phs:3", "phs:5", "phs:7", "phslog:2"};
        double worst = 0.0;
        int count = 0;
        for (int i = 0; i < 200; ++i) {
            const int family = i % 5;
            const double eps = std::pow(10.0, -1.0 + 2.0 * u());
            const bool two_d = family == 1 || family == 3;
            const double a = -1.0 + u(), b = a + 0.5 + 1.5 * u();
            const Domain dom = two_d ? Domain::box(a, b, a - 0.3, b + 0.2) : Domain::interval(a, b);
            Point center{std::clamp(a + (b - a) * u(), a, b), 0.0};
            if (two_d)
                center[1] = std::clamp(a - 0.3 + (b - a + 0.5) * u(), a - 0.3, b + 0.2);
            Kernel k = Kernel::gaussian();
            if (family == 2)
                k = Kernel::parse(phs_1d[(i / 5) % 6]);
            if (family == 3)
                k = Kernel::parse(phs_2d[(i / 5) % 4]);
            if (family == 4)
                k = Kernel::wendland(1 + (i / 5) % 3, (i / 15) % 3);
            const double e = k.is_phs() ? 1.0 : eps;
            const SingleMoment m = kernel_moment(k, e, center, dom);
            if (family == 3 && m.method != MomentMethod::triangle_decomposition)
                return Outcome{false, "PHS 2D did not use the triangle decomposition"};
            const QuadResult ref = numeric_moment(k, e, center, dom, 1e-12);
            worst = std::max(worst, std::abs(m.value - ref.value) / std::max(1.0, std::abs(ref.value)));
            ++count;
        }
        return Outcome{worst <= 1e-8, std::to_string(count) + " configurations, max relative gap " +
                                          fmt("%.3g", worst)};
    });

    criterion(5, "constructed rules integrate their own basis functions", 60.0, [] {
        const CounterRng rng(77);
        std::uint64_t ctr = 0;
        auto u = [&] { return rng.uniform(ctr++); };
        const char* kernels[] = {"gaussian", "wendland:1,1", "wendland:2,2", "phs:3", "phs:1",
                                 "phslog:2", "phs:5"};
        double worst = 0.0;
        int done = 0, skipped = 0;
        for (int i = 0; i < 100; ++i) {
            const int dim = 1 + (i % 2);
            Kernel k = Kernel::parse(kernels[(i / 2) % 7]);
            if (k.compactly_supported() && k.wendland_dimension() < dim)
                k = Kernel::wendland(2, k.wendland_smoothness());
            const Domain dom = Domain::unit(dim);
            const int n = 10 + static_cast<int>(40 * u());
            const PointSet x = i % 3 == 0 ? random_points(dom, n, 1000 + i) : halton(dom, n, i);
            // shape relative to the mean spacing keeps flat Gaussians out
            const double eps = (1.0 + 2.0 * u()) * std::pow(n, 1.0 / dim);
            const int d = std::max(k.min_degree(), static_cast<int>(3 * u()) - 1);
            const RbfSpace s = RbfSpace::make(k, x, ShapePolicy::constant(eps), d);
            const MomentVector m = rbf_moments(s, dom);
            try {
                if (i % 4 == 3) {
                    // least-squares rule on data that extends the centers
                    const int nd = 4 * (n + s.num_poly());
                    const PointSet data =
                        i % 3 == 0 ? random_points(dom, nd, 1000 + i) : halton(dom, nd, i);
                    const LsProblem p = build_ls_problem(s, data, m);
                    const LsSolution sol = weighted_min_norm(p);
                    worst = std::max(worst, check_exactness(sol.rule, s, m).max_error);
                } else {
                    const QuadratureRule r = interpolatory_weights(s, m);
                    worst = std::max(worst, check_exactness(r, s, m).max_error);
                }
                ++done;
            } catch (const Error& e) {
                ++skipped;
                std::printf("  C5 case %d (%s, N=%d, d=%d) raised: %s\n", i, k.name().c_str(), n, d,
                            e.what());
            }
        }
        return Outcome{worst <= 1e-8 && skipped == 0,
                       std::to_string(done) + " rules checked, " + std::to_string(skipped) +
                           " failed to build, max exactness error " + fmt("%.3g", worst)};
    });

    criterion(6, "weight decomposition identity", 10.0, [] {
        double worst = 0.0;
        int cases = 0;
        for (double eps : {1.0, 2.0})
            for (int n : {30, 60})
                for (int d : {0, 1}) {
                    const RbfSpace s = RbfSpace::make(Kernel::gaussian(), halton(Domain::unit(1), n),
                                                      ShapePolicy::constant(eps), d);
                    const WeightDecomposition dec = decompose_weights(s, Domain::unit(1));
                    worst = std::max(worst, dec.identity_error / dec.w.cwiseAbs().maxCoeff());
                    ++cases;
                }
        return Outcome{worst <= 1e-8, std::to_string(cases) + " cases, max relative deviation " +
                                          fmt("%.3g", worst)};
    });

    criterion(7, "least-squares construction reaches positive weights", 120.0, [] {
        const Domain dom = Domain::unit(2);
        const auto seq = PointSequence::parse("halton", dom);
        std::vector<double> ms, ns;
        std::string detail;
        bool ok = true;
        for (int m : {10, 20, 40}) {
            const RbfSpace s =
                RbfSpace::make(Kernel::gaussian(), seq.first(m), ShapePolicy::constant(0.8), 0);
            const Algorithm1Result r = algorithm1(s, seq, dom);
            const bool good = r.success && r.rule && r.rule->weights.minCoeff() > 0.0 &&
                              std::abs(r.rule->weights.sum() - 1.0) <= 1e-9 &&
                              r.n_final <= 50 * m * m;
            ok = ok && good;
            ms.push_back(m);
            ns.push_back(r.n_final);
            detail += "M=" + std::to_string(m) + " N=" + std::to_string(r.n_final) + "; ";
        }
        const PowerLaw fit = fit_power_law(ms, ns);
        ok = ok && fit.s >= 1.4 && fit.s <= 2.7;
        return Outcome{ok, detail + "fitted s = " + fmt("%.3f", fit.s)};
    });

    criterion(8, "polyharmonic convergence orders", 300.0, [] {
        double orders[2];
        int i = 0;
        for (const char* k : {"phs:3", "phs:5"}) {
            Config c;
            c.set("kernel", k);
            const Table t = run_convergence(c, {});
            orders[i++] = t.summary.at("fitted_order").get<double>();
        }
        return Outcome{orders[0] >= 1.7 && orders[1] >= 2.5,
                       "cubic " + fmt("%.3f", orders[0]) + ", quintic " + fmt("%.3f", orders[1])};
    });

    criterion(9, "least-squares rule is more robust to noise", 120.0, [] {
        const Table t = run_lsrbf_compare(Config{}, {});
        const auto ls = column(t, "ls_error_noise_0.01"), in = column(t, "interp_error_noise_0.01");
        const auto stable = column(t, "ls_is_stable"), m = column(t, "m");
        bool ok = true;
        std::string detail;
        for (const auto& row : t.rows) {
            const double a = num(row[ls]), b = num(row[in]);
            ok = ok && a <= b && std::get<bool>(row[stable]);
            detail += "M=" + fmt("%.0f", num(row[m])) + " ls " + fmt("%.3g", a) + " vs interp " +
                      fmt("%.3g", b) + "; ";
        }
        return Outcome{ok && !t.rows.empty(), detail + "(medians over 20 trials, noise 1e-2)"};
    });

    criterion(10, "minimal error of the eps sweep is small and stable", 300.0, [] {
        const Table t = run_error_sweep(Config{}, {});
        const auto& s = t.summary;
        const double err = s.at("argmin_median_error").get<double>();
        const bool stable = s.at("argmin_is_stable").get<bool>();
        std::string detail = "argmin eps " + fmt("%.4g", s.at("argmin_eps").get<double>()) +
                             ", median error " + fmt("%.3g", err) + ", stability measure " +
                             fmt("%.6g", s.at("argmin_stability_measure").get<double>()) +
                             (stable ? " (stable)" : " (unstable)");
        if (s.contains("best_stable_eps"))
            detail += "; best stable eps " + fmt("%.4g", s.at("best_stable_eps").get<double>()) +
                      " error " + fmt("%.3g", s.at("best_stable_median_error").get<double>());
        return Outcome{err <= 1e-4 && stable, detail};
    });

    criterion(11, "uncovered area: closed form vs Monte Carlo", 60.0, [] {
        Config c;
        c.set("samples", "10000000");
        const Table t = run_coverage(c, {});
        const auto z = column(t, "z_score");
        double worst_z = 0.0;
        for (const auto& row : t.rows)
            worst_z = std::max(worst_z, std::abs(num(row[z])));
        double jump = 0.0;
        for (int n : {4, 16, 64}) {
            const auto bp = coverage_breakpoints(n);
            for (double b : {bp.full_cover, bp.touching})
                jump = std::max(jump, std::abs(uncovered_area_equidistant({n, b * (1 - 1e-12)}) -
                                               uncovered_area_equidistant({n, b * (1 + 1e-12)})));
        }
        return Outcome{worst_z <= 3.0 && jump <= 1e-10 && t.rows.size() == 12,
                       std::to_string(t.rows.size()) + " cells, max |z| = " + fmt("%.3f", worst_z) +
                           ", max jump at breakpoints " + fmt("%.3g", jump)};
    });

    criterion(12, "discrete orthogonal polynomial properties", 60.0, [] {
        double gram = 0.0;
        for (int dim : {1, 2})
            for (int d = 0; d <= 5; ++d) {
                const PointSet x = halton(Domain::unit(dim), 200);
                const PolyBasis p = build_dops(x, d);
                const Eigen::MatrixXd g = discrete_gram(p, x);
                gram = std::max(gram, (g - Eigen::MatrixXd::Identity(g.rows(), g.cols()))
                                          .cwiseAbs()
                                          .maxCoeff());
            }
        auto continuous_error = [](int side) {
            const PointSet x = equidistant(Domain::unit(2), side);
            const Eigen::MatrixXd g = continuous_gram(build_dops(x, 2), Domain::unit(2));
            return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
        };
        const double coarse = continuous_error(8), fine = continuous_error(64);
        const PointSet x = equidistant(Domain::unit(1), 40);
        const RbfSpace s = RbfSpace::make(Kernel::wendland(1, 1), x,
                                          ShapePolicy::constant(1.0 / min_distance(x)), 2);
        const PolyBasis dops = build_dops(x, 2);
        const SaddleSystem sys = assemble(s);
        const CounterRng rng(4);
        double card = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Point p{rng.uniform(static_cast<std::uint64_t>(i)), 0.0};
            const Eigen::VectorXd c = cardinal_values(sys, p);
            for (std::size_t m = 0; m < x.size(); ++m)
                card = std::max(card, std::abs(c(static_cast<Eigen::Index>(m)) -
                                               explicit_cardinal_nonoverlap(s, dops, m, p)));
        }
        return Outcome{gram <= 1e-10 && fine < coarse && card <= 1e-8,
                       "Gram deviation " + fmt("%.3g", gram) + ", continuous Gram error N=64 " +
                           fmt("%.3g", coarse) + " -> N=4096 " + fmt("%.3g", fine) +
                           ", cardinal mismatch " + fmt("%.3g", card)};
    });

    criterion(13, "identical configs give byte-identical output", 0.0, [] {
        struct Run {
            const char* name;
            std::function<Table(const Config&, const RunContext&)> fn;
            const char* overrides;
        };
        const std::vector<Run> runs{
            {"stability_sweep", run_stability_sweep, "eps=log:1:1000:5"},
            {"error_sweep", run_error_sweep, "points=halton:150;eps=log:1:100:3;trials=4"},
            {"convergence", run_convergence, "n_values=50,100,200"},
            {"lsrbf_compare", run_lsrbf_compare, "m_values=8,12;trials=4"},
            {"ratio_study", run_ratio_study, "m_values=5,8,12"},
            {"coverage", run_coverage, "samples=50000"},
            {"moments_dump", run_moments_dump, "kernel=wendland:2,1;domain=unit2;points=halton:30;eps=3"},
            {"weights", run_weights, "lebesgue=true"},
        };
        int same = 0;
        for (const auto& r : runs) {
            Config c;
            std::string ov = r.overrides;
            std::size_t pos = 0;
            while (pos != std::string::npos) {
                const auto next = ov.find(';', pos);
                c.set(ov.substr(pos, next == std::string::npos ? next : next - pos));
                pos = next == std::string::npos ? next : next + 1;
            }
            const std::string a = render(r.fn(c, {1, false}), c);
            const std::string b = render(r.fn(c, {1, false}), c);
            const std::string p = render(r.fn(c, {3, false}), c);
            if (a == b && a == p)
                ++same;
            else
                std::printf("  C13 %s differs between runs\n", r.name);
        }
        Config lc;
        lc.set("centers", "halton:8");
        const LsrbfRun x = run_lsrbf(lc, {}), y = run_lsrbf(lc, {});
        const bool ls_same = render(x.trace, lc) == render(y.trace, lc) &&
                             render(x.rule, lc) == render(y.rule, lc);
        return Outcome{same == static_cast<int>(runs.size()) && ls_same,
                       std::to_string(same + ls_same) + "/" + std::to_string(runs.size() + 1) +
                           " experiments identical across reruns and worker counts"};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
