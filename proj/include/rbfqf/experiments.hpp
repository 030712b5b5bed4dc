#pragma once

#include "rbfqf/pointsets.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rbfqf {

/// Flat key = value configuration. Lines starting with '#' are comments.
class Config {
public:
    Config() = default;
    explicit Config(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    static Config parse(std::string_view text);
    static Config load(const std::string& path);

    /// Applies a "key=value" override.
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::string& fallback) const;
    std::vector<int> get_ints(const std::string& key, const std::string& fallback) const;
    /// Semicolon-separated list (kernel specs contain commas).
    std::vector<std::string> get_list(const std::string& key, const std::string& fallback) const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

    /// Missing keys are filled from `defaults`.
    Config with_defaults(const std::map<std::string, std::string>& defaults) const;

    /// FNV-1a 64 of the sorted "key=value\n" lines, as 16 hex digits.
    std::string hash() const;

private:
    std::map<std::string, std::string> values_;
};

using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json summary = nlohmann::json::object();

    /// Appends a row given as (column, value) pairs; absent columns are empty.
    void add(std::initializer_list<std::pair<std::string_view, Cell>> cells);
    void add(const std::vector<std::pair<std::string, Cell>>& cells);
};

struct RunContext {
    int jobs = 1;         // worker threads for sweep cells
    bool timing = false;  // include runtime_ms (makes output non-reproducible)
};

/// Shortest round-trip formatting ("%.17g"); "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// Metadata stored in the output header: config, hash, versions, generator.
nlohmann::json metadata(const std::string& experiment, const Config& cfg);

/// CSV with a leading "# {metadata}" line and, when non-empty, a trailing
/// "# {summary}" line.
void write_csv(std::ostream& os, const Table& t, const nlohmann::json& meta);

/// JSON lines: {"meta": ...}, one object per row, then {"summary": ...}.
void write_jsonl(std::ostream& os, const Table& t, const nlohmann::json& meta);

/// Evaluates an eps grid: "log:<lo>:<hi>:<per_decade>" or a comma list whose
/// entries are numbers or "inv_hmin" (1 / h_min of the point set).
std::vector<double> parse_eps_grid(const std::string& spec, double h_min);

/// Runs fn(i) for i in [0, count) on up to `jobs` threads; any results go
/// into caller-owned slots indexed by i, so output order is fixed.
void run_cells(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

Table run_stability_sweep(const Config& cfg, const RunContext& ctx);
Table run_error_sweep(const Config& cfg, const RunContext& ctx);
Table run_convergence(const Config& cfg, const RunContext& ctx);
Table run_lsrbf_compare(const Config& cfg, const RunContext& ctx);
Table run_ratio_study(const Config& cfg, const RunContext& ctx);
Table run_coverage(const Config& cfg, const RunContext& ctx);
Table run_moments_dump(const Config& cfg, const RunContext& ctx);
Table run_weights(const Config& cfg, const RunContext& ctx);

/// Per-iteration trace and final rule of one Algorithm 1 run.
struct LsrbfRun {
    Table trace;
    Table rule;
};
LsrbfRun run_lsrbf(const Config& cfg, const RunContext& ctx);

/// Discrete Gram matrix of the DOPs on the configured points (debug dump).
Table dop_gram(const Config& cfg);

/// Defaults applied by each run_* function, exposed for documentation and
/// the CLI's --print-config.
const std::map<std::string, std::string>& experiment_defaults(const std::string& experiment);

} // namespace rbfqf
