#include "rbfqf/experiments.hpp"

#include "rbfqf/errors.hpp"
#include "rbfqf/genz.hpp"
#include "rbfqf/geometry.hpp"
#include "rbfqf/lsquad.hpp"
#include "rbfqf/moments.hpp"
#include "rbfqf/polybasis.hpp"
#include "rbfqf/quadrature.hpp"
#include "rbfqf/rng.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rbfqf {

namespace {

constexpr const char* kLibraryVersion = "rbfqf 1.0.0";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty())
            out.push_back(cur);
    }
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("config key '" + key + "': bad number '" + s + "'");
    return v;
}

template <class T>
T to_integer(const std::string& s, const std::string& key) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        // accept integral values written in floating form, e.g. 1e7
        const double d = to_double(s, key);
        if (d != std::floor(d) || std::abs(d) > 9e15)
            throw std::invalid_argument("config key '" + key + "': bad integer '" + s + "'");
        return static_cast<T>(d);
    }
    return v;
}

double median(std::vector<double> v) {
    if (v.empty())
        return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Failure tag for a sweep cell.
std::string classify(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const SingularSystemError&) {
        return "singular";
    } catch (const RankDeficientError&) {
        return "rank_deficient";
    } catch (const ConvergenceError&) {
        return "convergence";
    } catch (const Error&) {
        return "numerical";
    } catch (const std::invalid_argument&) {
        return "invalid";
    } catch (const std::domain_error&) {
        return "invalid";
    } catch (...) {
        return "error";
    }
}

std::string message_of(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown failure";
    }
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<std::string> with_timing(std::vector<std::string> cols, const RunContext& ctx) {
    if (ctx.timing)
        cols.push_back("runtime_ms");
    return cols;
}

nlohmann::json json_of(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return nullptr;
            else if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v));
            else
                return v;
        },
        c);
}

std::string csv_field(const Cell& c) {
    std::string s = std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else
                return v;
        },
        c);
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + '"';
}

struct Stability {
    double measure = kNaN, one = kNaN, min_w = kNaN;
    bool stable = false;
    double cond = kNaN;
};

Stability stability_of(const QuadratureRule& rule) {
    const auto r = stability_report(rule);
    return {r.stability_measure, r.rule_of_one, r.min_weight, r.is_stable, rule.condition};
}

Domain domain_of(const Config& cfg) { return parse_domain(cfg.require("domain")); }

// A bare "random" sequence takes its seed from the config seed.
PointSequence sequence_of(const Config& cfg, const std::string& key, const Domain& domain) {
    std::string spec = cfg.require(key);
    if (spec == "random")
        spec += ":" + std::to_string(cfg.get_seed("seed", 1));
    return PointSequence::parse(spec, domain);
}

// Genz integrand selection: "genz:<family>" draws fresh parameters per
// trial, a full spec fixes them.
struct IntegrandSpec {
    GenzFamily family;
    bool fixed;
    GenzFunction function;
};

IntegrandSpec parse_integrand(const std::string& spec, int q) {
    const auto parts = split(spec, ':');
    if (parts.size() == 2 && parts[0] == "genz")
        return {parse_genz_family(parts[1]), false, {}};
    GenzFunction g = parse_genz(spec, q);
    return {g.family, true, g};
}

GenzFunction trial_function(const IntegrandSpec& spec, int q, std::uint64_t seed, int trial) {
    return spec.fixed ? spec.function
                      : random_genz(spec.family, q, derive_seed(seed, static_cast<std::uint64_t>(trial)));
}

Eigen::VectorXd sample(const GenzFunction& g, const PointSet& ps) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = evaluate(g, ps[i]);
    return v;
}

bool supports_disjoint(const RbfSpace& space, const std::vector<double>& h) {
    if (!space.kernel.compactly_supported())
        return false;
    for (std::size_t n = 0; n < space.num_centers(); ++n)
        if (1.0 / space.shape[n] > h[n] * (1.0 + 1e-12))
            return false;
    return true;
}

ShapePolicy policy_of(const Config& cfg, double eps) {
    const auto kind = cfg.get("shape_policy", "constant");
    if (kind == "constant")
        return ShapePolicy::constant(eps);
    if (kind == "equal_moment_boundary")
        return ShapePolicy::equal_moment_boundary(eps);
    throw std::invalid_argument("shape_policy must be constant or equal_moment_boundary");
}

Config prepared(const std::string& experiment, const Config& cfg) {
    return cfg.with_defaults(experiment_defaults(experiment));
}

} // namespace

// ---------------------------------------------------------------- Config

Config Config::parse(std::string_view text) {
    Config c;
    std::istringstream is{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(number) +
                                        ": expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(number) + ": empty key");
        c.values_[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void Config::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("override '" + assignment + "' must look like key=value");
    values_[trim(std::string_view(assignment).substr(0, eq))] =
        trim(std::string_view(assignment).substr(eq + 1));
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw std::invalid_argument("missing config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? to_double(require(key), key) : fallback;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? to_integer<std::int64_t>(require(key), key) : fallback;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? to_integer<std::uint64_t>(require(key), key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key))
        return fallback;
    const auto v = require(key);
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw std::invalid_argument("config key '" + key + "': expected a boolean");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::string& fallback) const {
    std::vector<double> out;
    for (const auto& s : split(get(key, fallback), ','))
        out.push_back(to_double(s, key));
    if (out.empty())
        throw std::invalid_argument("config key '" + key + "' must not be empty");
    return out;
}

std::vector<int> Config::get_ints(const std::string& key, const std::string& fallback) const {
    std::vector<int> out;
    for (const auto& s : split(get(key, fallback), ','))
        out.push_back(to_integer<int>(s, key));
    if (out.empty())
        throw std::invalid_argument("config key '" + key + "' must not be empty");
    return out;
}

std::vector<std::string> Config::get_list(const std::string& key, const std::string& fallback) const {
    auto out = split(get(key, fallback), ';');
    if (out.empty())
        throw std::invalid_argument("config key '" + key + "' must not be empty");
    return out;
}

Config Config::with_defaults(const std::map<std::string, std::string>& defaults) const {
    Config c = *this;
    for (const auto& [k, v] : defaults)
        c.values_.emplace(k, v);
    return c;
}

std::string Config::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : values_)
        for (char ch : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------- Tables

void Table::add(std::initializer_list<std::pair<std::string_view, Cell>> cells) {
    std::vector<std::pair<std::string, Cell>> v;
    for (const auto& [k, c] : cells)
        v.emplace_back(std::string(k), c);
    add(v);
}

void Table::add(const std::vector<std::pair<std::string, Cell>>& cells) {
    std::vector<Cell> row(columns.size());
    for (const auto& [k, c] : cells) {
        const auto it = std::find(columns.begin(), columns.end(), k);
        if (it == columns.end())
            throw std::logic_error("unknown column '" + k + "' in table " + experiment);
        row[static_cast<std::size_t>(it - columns.begin())] = c;
    }
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json metadata(const std::string& experiment, const Config& cfg) {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["library"] = kLibraryVersion;
    Config full = cfg;
    const std::string base = experiment == "lsrbf_trace" ? "lsrbf" : experiment;
    try {
        full = cfg.with_defaults(experiment_defaults(base));
    } catch (const std::invalid_argument&) {
        // free-form table without registered defaults
    }
    j["config"] = full.values();
    j["config_hash"] = full.hash();
    j["generator"] = {{"name", "splitmix64 counter stream"},
                      {"draw", "mix(seed + (i + 1) * gamma), uniform = (x >> 11) * 2^-53"},
                      {"gamma", "0x9E3779B97F4A7C15"},
                      {"mul1", "0xBF58476D1CE4E5B9"},
                      {"mul2", "0x94D049BB133111EB"}};
    j["halton"] = "plain, bases 2 and 3, element j is the radical inverse of j + 1 + skip";
    j["erf"] = "std::erf / std::erfc from the C library";
    return j;
}

void write_csv(std::ostream& os, const Table& t, const nlohmann::json& meta) {
    os << "# " << meta.dump() << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_field(row[i]);
        os << '\n';
    }
    if (!t.summary.empty())
        os << "# " << nlohmann::json{{"summary", t.summary}}.dump() << '\n';
}

void write_jsonl(std::ostream& os, const Table& t, const nlohmann::json& meta) {
    os << nlohmann::json{{"meta", meta}}.dump() << '\n';
    for (const auto& row : t.rows) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            j[t.columns[i]] = json_of(row[i]);
        os << j.dump() << '\n';
    }
    if (!t.summary.empty())
        os << nlohmann::json{{"summary", t.summary}}.dump() << '\n';
}

std::vector<double> parse_eps_grid(const std::string& spec, double h_min) {
    std::vector<double> out;
    if (spec.rfind("log:", 0) == 0) {
        const auto parts = split(spec.substr(4), ':');
        if (parts.size() != 3)
            throw std::invalid_argument("eps grid must be log:<lo>:<hi>:<per_decade>");
        const double lo = to_double(parts[0], "eps"), hi = to_double(parts[1], "eps");
        const int per = to_integer<int>(parts[2], "eps");
        if (!(lo > 0.0) || !(hi >= lo) || per < 1)
            throw std::invalid_argument("eps grid needs 0 < lo <= hi and per_decade >= 1");
        const double l0 = std::log10(lo);
        const auto steps = static_cast<int>(std::lround((std::log10(hi) - l0) * per));
        for (int i = 0; i <= steps; ++i)
            out.push_back(std::pow(10.0, l0 + static_cast<double>(i) / per));
        return out;
    }
    for (const auto& s : split(spec, ',')) {
        if (s == "inv_hmin") {
            if (!(h_min > 0.0))
                throw std::invalid_argument("inv_hmin needs a point set with h_min > 0");
            out.push_back(1.0 / h_min);
        } else {
            out.push_back(to_double(s, "eps"));
        }
    }
    if (out.empty())
        throw std::invalid_argument("eps grid must not be empty");
    for (double e : out)
        if (!(e > 0.0))
            throw std::invalid_argument("eps values must be positive");
    return out;
}

void run_cells(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const int threads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
        fn(static_cast<std::size_t>(i));
}

// ---------------------------------------------------------------- defaults

const std::map<std::string, std::string>& experiment_defaults(const std::string& experiment) {
    static const std::map<std::string, std::map<std::string, std::string>> table{
        {"stability_sweep",
         {{"kernels", "wendland:1,1"},
          {"points", "equid:100"},
          {"domain", "unit1"},
          {"degrees", "0"},
          {"eps", "log:0.1:100:40"},
          {"shape_policy", "constant"}}},
        {"error_sweep",
         {{"kernel", "wendland:2,1"},
          {"points", "halton:400"},
          {"domain", "unit2"},
          {"degree", "1"},
          {"eps", "log:0.1:100:40"},
          {"shape_policy", "constant"},
          {"integrand", "genz:1"},
          {"trials", "20"},
          {"seed", "1"}}},
        {"convergence",
         {{"kernel", "phs:3"},
          {"sequence", "halton"},
          {"domain", "unit2"},
          {"degree", "1"},
          {"n_values", "100,200,400,800,1600"},
          {"integrand", "genz:1:7"}}},
        {"lsrbf_compare",
         {{"kernel", "gaussian"},
          {"eps", "0.8"},
          {"sequence", "random"},
          {"domain", "unit2"},
          {"degree", "0"},
          {"m_values", "10,20,40"},
          {"integrand", "genz:1"},
          {"trials", "20"},
          {"noise", "1e-4,1e-2"},
          {"seed", "1"}}},
        {"ratio_study",
         {{"kernel", "gaussian"},
          {"eps", "0.8"},
          {"sequence", "halton"},
          {"domain", "unit2"},
          {"degree", "0"},
          {"m_values", "10,20,40"}}},
        {"coverage",
         {{"n_values", "4,16,64"}, {"eps", "breakpoints"}, {"samples", "1000000"}, {"seed", "1"}}},
        {"moments_dump",
         {{"kernel", "gaussian"},
          {"points", "equid:11"},
          {"domain", "unit1"},
          {"eps", "1"},
          {"shape_policy", "constant"}}},
        {"weights",
         {{"kernel", "phs:1"},
          {"points", "equid:11"},
          {"domain", "unit1"},
          {"eps", "1"},
          {"shape_policy", "constant"},
          {"degree", "-1"},
          {"lebesgue", "false"}}},
        {"lsrbf",
         {{"kernel", "gaussian"},
          {"eps", "0.8"},
          {"centers", "halton:20"},
          {"data_seq", "halton"},
          {"domain", "unit2"},
          {"degree", "0"},
          {"geometric", "false"}}},
        {"dop_gram", {{"points", "halton:200"}, {"domain", "unit1"}, {"degree", "3"}}},
    };
    const auto it = table.find(experiment);
    if (it == table.end())
        throw std::invalid_argument("unknown experiment '" + experiment + "'");
    return it->second;
}

// ---------------------------------------------------------------- sweeps

Table run_stability_sweep(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("stability_sweep", raw);
    const Domain domain = domain_of(cfg);
    const PointSet points = parse_pointset(cfg.require("points"), domain);
    const auto h = nearest_neighbor_distances(points);
    const double h_min = *std::min_element(h.begin(), h.end());
    std::vector<Kernel> kernels;
    for (const auto& k : cfg.get_list("kernels", ""))
        kernels.push_back(Kernel::parse(k));
    const auto degrees = cfg.get_ints("degrees", "");
    const auto eps = parse_eps_grid(cfg.require("eps"), h_min);
    (void)policy_of(cfg, 1.0);

    Table t{"stability_sweep",
            with_timing({"kernel", "points", "shape_policy", "eps", "eps_hmin", "nonoverlap",
                         "degree", "n", "stability_measure", "rule_of_one", "min_weight",
                         "is_stable", "condition_estimate", "ill_conditioned", "status", "message"},
                        ctx),
            {},
            nlohmann::json::object()};

    const std::size_t cells = kernels.size() * degrees.size() * eps.size();
    std::vector<std::vector<std::pair<std::string, Cell>>> out(cells);
    run_cells(cells, ctx.jobs, [&](std::size_t c) {
        const auto t0 = Clock::now();
        const Kernel& kernel = kernels[c / (degrees.size() * eps.size())];
        const int degree = degrees[(c / eps.size()) % degrees.size()];
        const double e = eps[c % eps.size()];
        const ShapePolicy policy = policy_of(cfg, e);
        auto& row = out[c];
        row = {{"kernel", kernel.name()},
               {"points", cfg.require("points")},
               {"shape_policy", policy.describe()},
               {"eps", e},
               {"eps_hmin", e * h_min},
               {"degree", static_cast<std::int64_t>(degree)},
               {"n", static_cast<std::int64_t>(points.size())}};
        try {
            const RbfSpace space = RbfSpace::make(kernel, points, policy, degree);
            const QuadratureRule rule = interpolatory_weights(space, domain, Exec::serial);
            const Stability s = stability_of(rule);
            row.insert(row.end(), {{"nonoverlap", supports_disjoint(space, h)},
                                   {"stability_measure", s.measure},
                                   {"rule_of_one", s.one},
                                   {"min_weight", s.min_w},
                                   {"is_stable", s.stable},
                                   {"condition_estimate", s.cond},
                                   {"ill_conditioned", !(s.cond <= kConditionLimit)},
                                   {"status", std::string("ok")}});
        } catch (...) {
            const auto ex = std::current_exception();
            row.insert(row.end(), {{"status", classify(ex)}, {"message", message_of(ex)}});
        }
        if (ctx.timing)
            row.emplace_back("runtime_ms", elapsed_ms(t0));
    });
    for (const auto& r : out)
        t.add(r);
    t.summary = {{"h_min", h_min}, {"inv_hmin", 1.0 / h_min}, {"cells", cells}};
    return t;
}

Table run_error_sweep(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("error_sweep", raw);
    const Domain domain = domain_of(cfg);
    const PointSet points = parse_pointset(cfg.require("points"), domain);
    const double h_min = min_distance(points);
    const Kernel kernel = Kernel::parse(cfg.require("kernel"));
    const int degree = static_cast<int>(cfg.get_int("degree", 0));
    const auto eps = parse_eps_grid(cfg.require("eps"), h_min);
    const IntegrandSpec integrand = parse_integrand(cfg.require("integrand"), domain.dim);
    const int trials = integrand.fixed ? 1 : static_cast<int>(cfg.get_int("trials", 1));
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (domain.dim == 2 && (domain.lo != Point{0, 0} || domain.hi != Point{1, 1}))
        throw std::invalid_argument("Genz integrands are defined on the unit square");
    if (domain.dim == 1 && (domain.lo[0] != 0.0 || domain.hi[0] != 1.0))
        throw std::invalid_argument("Genz integrands are defined on the unit interval");
    (void)policy_of(cfg, 1.0);

    // integrand samples and references do not depend on eps
    std::vector<Eigen::VectorXd> values(static_cast<std::size_t>(trials));
    std::vector<double> refs(static_cast<std::size_t>(trials));
    for (int tr = 0; tr < trials; ++tr) {
        const GenzFunction g = trial_function(integrand, domain.dim, seed, tr);
        values[static_cast<std::size_t>(tr)] = sample(g, points);
        refs[static_cast<std::size_t>(tr)] = reference_integral(g);
    }

    Table t{"error_sweep",
            with_timing({"kernel", "points", "integrand", "eps", "degree", "n", "trials",
                         "median_error", "min_error", "max_error", "stability_measure",
                         "rule_of_one", "min_weight", "is_stable", "condition_estimate", "status",
                         "message"},
                        ctx),
            {},
            nlohmann::json::object()};

    struct Result {
        double med = kNaN;
        Stability s;
        bool ok = false;
    };
    std::vector<Result> results(eps.size());
    std::vector<std::vector<std::pair<std::string, Cell>>> out(eps.size());
    run_cells(eps.size(), ctx.jobs, [&](std::size_t c) {
        const auto t0 = Clock::now();
        auto& row = out[c];
        row = {{"kernel", kernel.name()},
               {"points", cfg.require("points")},
               {"integrand", cfg.require("integrand")},
               {"eps", eps[c]},
               {"degree", static_cast<std::int64_t>(degree)},
               {"n", static_cast<std::int64_t>(points.size())},
               {"trials", static_cast<std::int64_t>(trials)}};
        try {
            const RbfSpace space = RbfSpace::make(kernel, points, policy_of(cfg, eps[c]), degree);
            const QuadratureRule rule = interpolatory_weights(space, domain, Exec::serial);
            std::vector<double> errs;
            for (int tr = 0; tr < trials; ++tr)
                errs.push_back(std::abs(apply(rule, values[static_cast<std::size_t>(tr)]) -
                                        refs[static_cast<std::size_t>(tr)]));
            const Stability s = stability_of(rule);
            results[c] = {median(errs), s, true};
            row.insert(row.end(), {{"median_error", results[c].med},
                                   {"min_error", *std::min_element(errs.begin(), errs.end())},
                                   {"max_error", *std::max_element(errs.begin(), errs.end())},
                                   {"stability_measure", s.measure},
                                   {"rule_of_one", s.one},
                                   {"min_weight", s.min_w},
                                   {"is_stable", s.stable},
                                   {"condition_estimate", s.cond},
                                   {"status", std::string("ok")}});
        } catch (...) {
            const auto ex = std::current_exception();
            row.insert(row.end(), {{"status", classify(ex)}, {"message", message_of(ex)}});
        }
        if (ctx.timing)
            row.emplace_back("runtime_ms", elapsed_ms(t0));
    });
    for (const auto& r : out)
        t.add(r);

    // aggregation: median over trials, then the minimum over eps
    std::ptrdiff_t best = -1, best_stable = -1;
    for (std::size_t c = 0; c < eps.size(); ++c) {
        if (!results[c].ok || std::isnan(results[c].med))
            continue;
        if (best < 0 || results[c].med < results[static_cast<std::size_t>(best)].med)
            best = static_cast<std::ptrdiff_t>(c);
        if (results[c].s.stable &&
            (best_stable < 0 || results[c].med < results[static_cast<std::size_t>(best_stable)].med))
            best_stable = static_cast<std::ptrdiff_t>(c);
    }
    t.summary["aggregation"] = "median over trials, minimum over eps";
    if (best >= 0) {
        const auto& r = results[static_cast<std::size_t>(best)];
        t.summary["argmin_eps"] = eps[static_cast<std::size_t>(best)];
        t.summary["argmin_median_error"] = r.med;
        t.summary["argmin_stability_measure"] = r.s.measure;
        t.summary["argmin_rule_of_one"] = r.s.one;
        t.summary["argmin_is_stable"] = r.s.stable;
    }
    if (best_stable >= 0) {
        t.summary["best_stable_eps"] = eps[static_cast<std::size_t>(best_stable)];
        t.summary["best_stable_median_error"] = results[static_cast<std::size_t>(best_stable)].med;
    }
    return t;
}

Table run_convergence(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("convergence", raw);
    const Domain domain = domain_of(cfg);
    const Kernel kernel = Kernel::parse(cfg.require("kernel"));
    const int degree = static_cast<int>(cfg.get_int("degree", 1));
    const auto sequence = sequence_of(cfg, "sequence", domain);
    const auto n_values = cfg.get_ints("n_values", "");
    const IntegrandSpec integrand = parse_integrand(cfg.require("integrand"), domain.dim);
    if (!integrand.fixed)
        throw std::invalid_argument("convergence needs fixed integrand parameters (genz:<f>:<seed>)");
    const double eps = cfg.get_double("eps", 1.0);
    const double ref = reference_integral(integrand.function);

    Table t{"convergence",
            with_timing({"kernel", "sequence", "integrand", "n", "degree", "h_max", "abs_error",
                         "stability_measure", "rule_of_one", "min_weight", "is_stable",
                         "condition_estimate", "status", "message"},
                        ctx),
            {},
            nlohmann::json::object()};
    std::vector<double> hs(n_values.size(), kNaN), errs(n_values.size(), kNaN);
    std::vector<std::vector<std::pair<std::string, Cell>>> out(n_values.size());
    run_cells(n_values.size(), ctx.jobs, [&](std::size_t c) {
        const auto t0 = Clock::now();
        auto& row = out[c];
        row = {{"kernel", kernel.name()},
               {"sequence", sequence.describe()},
               {"integrand", cfg.require("integrand")},
               {"n", static_cast<std::int64_t>(n_values[c])},
               {"degree", static_cast<std::int64_t>(degree)}};
        try {
            const PointSet points = sequence.first(n_values[c]);
            hs[c] = max_fill_distance(points);
            const RbfSpace space = RbfSpace::make(kernel, points, ShapePolicy::constant(eps), degree);
            const QuadratureRule rule = interpolatory_weights(space, domain, Exec::serial);
            errs[c] = std::abs(apply(rule, sample(integrand.function, points)) - ref);
            const Stability s = stability_of(rule);
            row.insert(row.end(), {{"h_max", hs[c]},
                                   {"abs_error", errs[c]},
                                   {"stability_measure", s.measure},
                                   {"rule_of_one", s.one},
                                   {"min_weight", s.min_w},
                                   {"is_stable", s.stable},
                                   {"condition_estimate", s.cond},
                                   {"status", std::string("ok")}});
        } catch (...) {
            const auto ex = std::current_exception();
            row.insert(row.end(), {{"status", classify(ex)}, {"message", message_of(ex)}});
        }
        if (ctx.timing)
            row.emplace_back("runtime_ms", elapsed_ms(t0));
    });
    for (const auto& r : out)
        t.add(r);

    std::vector<double> fh, fe;
    for (std::size_t c = 0; c < hs.size(); ++c)
        if (std::isfinite(hs[c]) && errs[c] > 0.0) {
            fh.push_back(hs[c]);
            fe.push_back(errs[c]);
        }
    if (fh.size() >= 2) {
        const PowerLaw fit = fit_power_law(fh, fe);
        t.summary["fitted_order"] = fit.s;
        t.summary["fit_constant"] = fit.c;
        t.summary["fit"] = "abs_error = C * h_max^order, least squares in log-log";
    }
    return t;
}

Table run_lsrbf_compare(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("lsrbf_compare", raw);
    const Domain domain = domain_of(cfg);
    const Kernel kernel = Kernel::parse(cfg.require("kernel"));
    const double eps = cfg.get_double("eps", 0.8);
    const int degree = static_cast<int>(cfg.get_int("degree", 0));
    const auto sequence = sequence_of(cfg, "sequence", domain);
    const auto m_values = cfg.get_ints("m_values", "");
    const IntegrandSpec integrand = parse_integrand(cfg.require("integrand"), domain.dim);
    const int trials = integrand.fixed ? 1 : static_cast<int>(cfg.get_int("trials", 1));
    const auto noise = cfg.get_doubles("noise", "");
    const std::uint64_t seed = cfg.get_seed("seed", 1);
    Algorithm1Options opts;
    opts.n_max = static_cast<int>(cfg.get_int("n_max", 0));
    opts.geometric = cfg.get_bool("geometric", false);

    std::vector<std::string> cols{"kernel", "eps", "sequence", "degree", "m", "n", "ls_success",
                                  "ls_stability_measure", "ls_rule_of_one", "ls_min_weight",
                                  "ls_is_stable", "interp_stability_measure", "interp_rule_of_one",
                                  "interp_min_weight", "interp_is_stable", "interp_condition",
                                  "trials", "ls_error_noiseless", "interp_error_noiseless"};
    std::vector<std::string> noise_cols;
    for (double mag : noise) {
        noise_cols.push_back("noise_" + format_double(mag));
        cols.push_back("ls_error_" + noise_cols.back());
        cols.push_back("interp_error_" + noise_cols.back());
    }
    cols.push_back("status");
    cols.push_back("message");
    Table t{"lsrbf_compare", with_timing(cols, ctx), {}, nlohmann::json::object()};

    std::vector<std::vector<std::pair<std::string, Cell>>> out(m_values.size());
    run_cells(m_values.size(), ctx.jobs, [&](std::size_t c) {
        const auto t0 = Clock::now();
        const int m = m_values[c];
        auto& row = out[c];
        row = {{"kernel", kernel.name()},
               {"eps", eps},
               {"sequence", sequence.describe()},
               {"degree", static_cast<std::int64_t>(degree)},
               {"m", static_cast<std::int64_t>(m)},
               {"trials", static_cast<std::int64_t>(trials)}};
        try {
            const RbfSpace ls_space =
                RbfSpace::make(kernel, sequence.first(m), ShapePolicy::constant(eps), degree);
            const auto alg = algorithm1(ls_space, sequence, domain, opts);
            if (!alg.rule)
                throw Error("no least-squares iterate succeeded");
            const QuadratureRule& ls = *alg.rule;
            const PointSet data = ls.points;
            const RbfSpace in_space = RbfSpace::make(kernel, data, ShapePolicy::constant(eps), degree);
            const QuadratureRule interp = interpolatory_weights(in_space, domain, Exec::serial);
            const Stability sl = stability_of(ls), si = stability_of(interp);
            row.insert(row.end(), {{"n", static_cast<std::int64_t>(alg.n_final)},
                                   {"ls_success", alg.success},
                                   {"ls_stability_measure", sl.measure},
                                   {"ls_rule_of_one", sl.one},
                                   {"ls_min_weight", sl.min_w},
                                   {"ls_is_stable", sl.stable},
                                   {"interp_stability_measure", si.measure},
                                   {"interp_rule_of_one", si.one},
                                   {"interp_min_weight", si.min_w},
                                   {"interp_is_stable", si.stable},
                                   {"interp_condition", si.cond}});
            std::vector<double> ls_clean, in_clean;
            std::vector<std::vector<double>> ls_noisy(noise.size()), in_noisy(noise.size());
            for (int tr = 0; tr < trials; ++tr) {
                const GenzFunction g = trial_function(integrand, domain.dim, seed, tr);
                const double ref = reference_integral(g);
                const Eigen::VectorXd v = sample(g, data);
                ls_clean.push_back(std::abs(apply(ls, v) - ref));
                in_clean.push_back(std::abs(apply(interp, v) - ref));
                const std::vector<double> base(v.data(), v.data() + v.size());
                for (std::size_t k = 0; k < noise.size(); ++k) {
                    const auto noisy = add_noise(
                        base, noise[k],
                        derive_seed(derive_seed(seed, 0x6e6f697365ULL + static_cast<std::uint64_t>(tr)),
                                    static_cast<std::uint64_t>(k)));
                    const Eigen::Map<const Eigen::VectorXd> nv(noisy.data(), v.size());
                    ls_noisy[k].push_back(std::abs(apply(ls, Eigen::VectorXd(nv)) - ref));
                    in_noisy[k].push_back(std::abs(apply(interp, Eigen::VectorXd(nv)) - ref));
                }
            }
            row.emplace_back("ls_error_noiseless", median(ls_clean));
            row.emplace_back("interp_error_noiseless", median(in_clean));
            for (std::size_t k = 0; k < noise.size(); ++k) {
                row.emplace_back("ls_error_" + noise_cols[k], median(ls_noisy[k]));
                row.emplace_back("interp_error_" + noise_cols[k], median(in_noisy[k]));
            }
            row.emplace_back("status", std::string(alg.success ? "ok" : "budget_exhausted"));
        } catch (...) {
            const auto ex = std::current_exception();
            row.insert(row.end(), {{"status", classify(ex)}, {"message", message_of(ex)}});
        }
        if (ctx.timing)
            row.emplace_back("runtime_ms", elapsed_ms(t0));
    });
    for (const auto& r : out)
        t.add(r);
    t.summary["aggregation"] = "median over trials";
    return t;
}

Table run_ratio_study(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("ratio_study", raw);
    const Domain domain = domain_of(cfg);
    const Kernel kernel = Kernel::parse(cfg.require("kernel"));
    const double eps = cfg.get_double("eps", 0.8);
    const int degree = static_cast<int>(cfg.get_int("degree", 0));
    const auto sequence = sequence_of(cfg, "sequence", domain);
    const auto m_values = cfg.get_ints("m_values", "");
    Algorithm1Options opts;
    opts.n_max = static_cast<int>(cfg.get_int("n_max", 0));
    opts.geometric = cfg.get_bool("geometric", false);

    Table t{"ratio_study",
            with_timing({"kernel", "eps", "sequence", "degree", "m", "n_final", "success",
                         "min_weight", "rule_of_one", "status", "message"},
                        ctx),
            {},
            nlohmann::json::object()};
    std::vector<double> n_final(m_values.size(), kNaN);
    std::vector<std::vector<std::pair<std::string, Cell>>> out(m_values.size());
    run_cells(m_values.size(), ctx.jobs, [&](std::size_t c) {
        const auto t0 = Clock::now();
        auto& row = out[c];
        row = {{"kernel", kernel.name()},
               {"eps", eps},
               {"sequence", sequence.describe()},
               {"degree", static_cast<std::int64_t>(degree)},
               {"m", static_cast<std::int64_t>(m_values[c])}};
        try {
            const RbfSpace space =
                RbfSpace::make(kernel, sequence.first(m_values[c]), ShapePolicy::constant(eps), degree);
            const auto res = algorithm1(space, sequence, domain, opts);
            n_final[c] = res.success ? res.n_final : kNaN;
            row.emplace_back("n_final", static_cast<std::int64_t>(res.n_final));
            row.emplace_back("success", res.success);
            if (res.rule) {
                const auto s = stability_of(*res.rule);
                row.emplace_back("min_weight", s.min_w);
                row.emplace_back("rule_of_one", s.one);
            }
            row.emplace_back("status", std::string(res.success ? "ok" : "budget_exhausted"));
        } catch (...) {
            const auto ex = std::current_exception();
            row.insert(row.end(), {{"status", classify(ex)}, {"message", message_of(ex)}});
        }
        if (ctx.timing)
            row.emplace_back("runtime_ms", elapsed_ms(t0));
    });
    for (const auto& r : out)
        t.add(r);
    std::vector<double> ms, ns;
    for (std::size_t c = 0; c < m_values.size(); ++c)
        if (std::isfinite(n_final[c])) {
            ms.push_back(m_values[c]);
            ns.push_back(n_final[c]);
        }
    if (ms.size() >= 2) {
        const PowerLaw fit = fit_power_law(ms, ns);
        t.summary["c"] = fit.c;
        t.summary["s"] = fit.s;
        t.summary["fit"] = "n_final = c * m^s, least squares in log-log";
    }
    return t;
}

Table run_coverage(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("coverage", raw);
    const auto n_values = cfg.get_ints("n_values", "");
    const std::string eps_spec = cfg.require("eps");
    const auto samples = static_cast<std::uint64_t>(cfg.get_int("samples", 1000000));
    const std::uint64_t seed = cfg.get_seed("seed", 1);

    struct Job {
        int n;
        double eps;
    };
    std::vector<Job> jobs;
    for (int n : n_values) {
        if (eps_spec == "breakpoints") {
            const auto bp = coverage_breakpoints(n);
            for (double b : {bp.full_cover, bp.touching})
                for (double f : {0.8, 1.2})
                    jobs.push_back({n, b * f});
        } else {
            for (double e : parse_eps_grid(eps_spec, 0.0))
                jobs.push_back({n, e});
        }
    }
    Table t{"coverage",
            with_timing({"n", "eps", "regime", "closed_form", "monte_carlo", "stderr", "z_score",
                         "within_3sigma", "samples", "status", "message"},
                        ctx),
            {},
            nlohmann::json::object()};
    std::vector<std::vector<std::pair<std::string, Cell>>> out(jobs.size());
    run_cells(jobs.size(), ctx.jobs, [&](std::size_t c) {
        const auto t0 = Clock::now();
        const Job& j = jobs[c];
        auto& row = out[c];
        row = {{"n", static_cast<std::int64_t>(j.n)}, {"eps", j.eps}};
        try {
            const auto bp = coverage_breakpoints(j.n);
            const double closed = uncovered_area_equidistant({j.n, j.eps});
            const int side = static_cast<int>(std::lround(std::sqrt(j.n)));
            const PointSet grid = equidistant(Domain::unit(2), side);
            const auto mc = monte_carlo_uncovered(grid, 1.0 / j.eps, samples,
                                                  derive_seed(seed, c), Exec::serial);
            const double z = mc.std_error > 0.0 ? (mc.fraction - closed) / mc.std_error
                                                : (mc.fraction == closed ? 0.0 : INFINITY);
            const std::string regime = j.eps > bp.touching      ? "disjoint"
                                       : j.eps > bp.full_cover ? "overlapping"
                                                               : "covered";
            row.insert(row.end(), {{"regime", regime},
                                   {"closed_form", closed},
                                   {"monte_carlo", mc.fraction},
                                   {"stderr", mc.std_error},
                                   {"z_score", z},
                                   {"within_3sigma", std::abs(z) <= 3.0},
                                   {"samples", static_cast<std::int64_t>(mc.samples)},
                                   {"status", std::string("ok")}});
        } catch (...) {
            const auto ex = std::current_exception();
            row.insert(row.end(), {{"status", classify(ex)}, {"message", message_of(ex)}});
        }
        if (ctx.timing)
            row.emplace_back("runtime_ms", elapsed_ms(t0));
    });
    for (const auto& r : out)
        t.add(r);
    return t;
}

Table run_moments_dump(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("moments_dump", raw);
    const Domain domain = domain_of(cfg);
    const PointSet points = parse_pointset(cfg.require("points"), domain);
    const Kernel kernel = Kernel::parse(cfg.require("kernel"));
    const auto eps = parse_eps_grid(cfg.require("eps"), points.size() > 1 ? min_distance(points) : 0.0);
    if (eps.size() != 1)
        throw std::invalid_argument("moments takes a single eps value");
    const RbfSpace space = RbfSpace::make(kernel, points, policy_of(cfg, eps[0]), -1);
    const MomentVector m = rbf_moments(space, domain, ctx.jobs > 1 ? Exec::parallel : Exec::serial);
    Table t{"moments_dump", {"index", "x", "y", "eps", "value", "method", "error_estimate"}, {},
            nlohmann::json::object()};
    for (std::size_t i = 0; i < points.size(); ++i)
        t.add({{"index", static_cast<std::int64_t>(i)},
               {"x", points[i][0]},
               {"y", points[i][1]},
               {"eps", space.shape[i]},
               {"value", m.rbf(static_cast<Eigen::Index>(i))},
               {"method", to_string(m.method[i])},
               {"error_estimate", m.error[i]}});
    t.summary = {{"kernel", kernel.name()}, {"domain", domain.describe()}, {"n", points.size()}};
    return t;
}

Table run_weights(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("weights", raw);
    const Domain domain = domain_of(cfg);
    const PointSet points = parse_pointset(cfg.require("points"), domain);
    const Kernel kernel = Kernel::parse(cfg.require("kernel"));
    const int degree = static_cast<int>(cfg.get_int("degree", -1));
    const auto eps = parse_eps_grid(cfg.require("eps"), points.size() > 1 ? min_distance(points) : 0.0);
    if (eps.size() != 1)
        throw std::invalid_argument("weights takes a single eps value");
    const Exec exec = ctx.jobs > 1 ? Exec::parallel : Exec::serial;
    const RbfSpace space = RbfSpace::make(kernel, points, policy_of(cfg, eps[0]), degree);
    const QuadratureRule rule = interpolatory_weights(space, domain, exec);
    Table t{"weights", {"index", "x", "y", "weight"}, {}, nlohmann::json::object()};
    for (std::size_t i = 0; i < points.size(); ++i)
        t.add({{"index", static_cast<std::int64_t>(i)},
               {"x", points[i][0]},
               {"y", points[i][1]},
               {"weight", rule.weights(static_cast<Eigen::Index>(i))}});
    const auto s = stability_report(rule);
    t.summary = {{"stability_measure", s.stability_measure},
                 {"rule_of_one", s.rule_of_one},
                 {"min_weight", s.min_weight},
                 {"is_stable", s.is_stable},
                 {"condition_estimate", rule.condition},
                 {"space", rule.space}};
    if (cfg.get_bool("lebesgue", false)) {
        const PointSet grid = default_lebesgue_grid(domain);
        t.summary["lebesgue_estimate"] = estimate_lebesgue(space, grid, exec).value;
        t.summary["lebesgue_samples"] = grid.size();
    }
    return t;
}

LsrbfRun run_lsrbf(const Config& raw, const RunContext& ctx) {
    const Config cfg = prepared("lsrbf", raw);
    const Domain domain = domain_of(cfg);
    const Kernel kernel = Kernel::parse(cfg.require("kernel"));
    const double eps = cfg.get_double("eps", 0.8);
    const int degree = static_cast<int>(cfg.get_int("degree", 0));
    const PointSet centers = parse_pointset(cfg.require("centers"), domain);
    const auto sequence = sequence_of(cfg, "data_seq", domain);
    Algorithm1Options opts;
    opts.n_max = static_cast<int>(cfg.get_int("nmax", 0));
    opts.n_start = static_cast<int>(cfg.get_int("nstart", -1));
    opts.geometric = cfg.get_bool("geometric", false);
    const auto t0 = Clock::now();
    const RbfSpace space = RbfSpace::make(kernel, centers, ShapePolicy::constant(eps), degree);
    const auto res = algorithm1(space, sequence, domain, opts);

    LsrbfRun run{{"lsrbf_trace", {"N", "min_weight", "residual", "rank", "status"}, {}, {}},
                 {"lsrbf", {"index", "x", "y", "weight"}, {}, nlohmann::json::object()}};
    for (const auto& st : res.trace)
        run.trace.add({{"N", static_cast<std::int64_t>(st.n)},
                       {"min_weight", st.min_weight},
                       {"residual", st.residual},
                       {"rank", static_cast<std::int64_t>(st.rank)},
                       {"status", st.status}});
    run.rule.summary = {{"success", res.success}, {"n_final", res.n_final}, {"m", centers.size()}};
    if (res.rule) {
        const auto& rule = *res.rule;
        for (std::size_t i = 0; i < rule.points.size(); ++i)
            run.rule.add({{"index", static_cast<std::int64_t>(i)},
                          {"x", rule.points[i][0]},
                          {"y", rule.points[i][1]},
                          {"weight", rule.weights(static_cast<Eigen::Index>(i))}});
        const auto s = stability_report(rule);
        run.rule.summary["stability_measure"] = s.stability_measure;
        run.rule.summary["rule_of_one"] = s.rule_of_one;
        run.rule.summary["min_weight"] = s.min_weight;
        run.rule.summary["is_stable"] = s.is_stable;
        run.rule.summary["residual"] = rule.residual;
    }
    if (ctx.timing)
        run.rule.summary["runtime_ms"] = elapsed_ms(t0);
    return run;
}

Table dop_gram(const Config& raw) {
    const Config cfg = prepared("dop_gram", raw);
    const Domain domain = domain_of(cfg);
    const PointSet points = parse_pointset(cfg.require("points"), domain);
    const int degree = static_cast<int>(cfg.get_int("degree", 3));
    const PolyBasis dops = build_dops(points, degree);
    const Eigen::MatrixXd dg = discrete_gram(dops, points);
    const Eigen::MatrixXd cg = continuous_gram(dops, domain);
    Table t{"dop_gram", {"k", "l", "discrete", "continuous"}, {}, nlohmann::json::object()};
    double dev = 0.0;
    for (Eigen::Index k = 0; k < dg.rows(); ++k)
        for (Eigen::Index l = 0; l < dg.cols(); ++l) {
            dev = std::max(dev, std::abs(dg(k, l) - (k == l ? 1.0 : 0.0)));
            t.add({{"k", static_cast<std::int64_t>(k)},
                   {"l", static_cast<std::int64_t>(l)},
                   {"discrete", dg(k, l)},
                   {"continuous", cg(k, l)}});
        }
    t.summary = {{"gram_deviation", dev}, {"degree", degree}, {"n", points.size()}};
    return t;
}

} // namespace rbfqf
