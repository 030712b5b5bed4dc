// Command-line front end for the quadrature experiments.

#include "rbfqf/experiments.hpp"
#include "rbfqf/errors.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace {

using namespace rbfqf;

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out;
    std::string format = "csv";
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    bool timing = false;
};

// Flag -> config key pairs; only flags given on the command line are applied.
using FlagMap = std::map<std::string, std::string>;

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "flat key = value config file");
    sub->add_option("--set", c.overrides, "override a config key (key=value), repeatable");
    sub->add_option("--out", c.out, "output path (default stdout)");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--jobs", c.jobs, "worker threads for sweep cells")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "base seed");
    sub->add_flag("--timing", c.timing, "add runtime_ms columns (not deterministic)");
}

void add_keys(CLI::App* sub, std::map<std::string, std::string>& values,
              const std::vector<std::pair<std::string, std::string>>& flags) {
    for (const auto& [flag, key] : flags)
        sub->add_option("--" + flag, values[key], "sets config key '" + key + "'");
}

Config build_config(const Common& c, const std::map<std::string, std::string>& flag_values) {
    Config cfg = c.config_path.empty() ? Config{} : Config::load(c.config_path);
    for (const auto& [key, value] : flag_values)
        if (!value.empty())
            cfg.set(key, value);
    if (c.seed)
        cfg.set("seed", std::to_string(*c.seed));
    for (const auto& o : c.overrides)
        cfg.set(o);
    return cfg;
}

void emit(const Table& t, const Config& cfg, const Common& c, const std::string& path) {
    const auto meta = metadata(t.experiment, cfg);
    auto write = [&](std::ostream& os) {
        if (c.format == "jsonl")
            write_jsonl(os, t, meta);
        else
            write_csv(os, t, meta);
    };
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::invalid_argument("cannot open output file '" + path + "'");
    write(os);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RBF quadrature rules: construction, stability and experiments"};
    app.require_subcommand(1);
    Common common;
    std::map<std::string, std::string> keys;

    const std::vector<std::pair<std::string, std::string>> space_flags{
        {"kernel", "kernel"},   {"points", "points"}, {"domain", "domain"},
        {"eps", "eps"},         {"degree", "degree"}, {"shape-policy", "shape_policy"}};

    struct Sub {
        const char* name;
        const char* experiment;
        const char* help;
        std::vector<std::pair<std::string, std::string>> flags;
    };
    const std::vector<Sub> subs{
        {"weights", "weights", "interpolatory weights with a stability footer", space_flags},
        {"moments", "moments_dump", "kernel moments per center",
         {{"kernel", "kernel"}, {"points", "points"}, {"domain", "domain"}, {"eps", "eps"},
          {"shape-policy", "shape_policy"}}},
        {"stability-sweep", "stability_sweep", "stability measure over an eps grid",
         {{"kernel", "kernels"}, {"points", "points"}, {"domain", "domain"}, {"eps", "eps"},
          {"degree", "degrees"}, {"shape-policy", "shape_policy"}}},
        {"error-sweep", "error_sweep", "Genz integration error over an eps grid",
         {{"kernel", "kernel"}, {"points", "points"}, {"domain", "domain"}, {"eps", "eps"},
          {"degree", "degree"}, {"shape-policy", "shape_policy"}, {"integrand", "integrand"},
          {"trials", "trials"}}},
        {"convergence", "convergence", "error decay for growing point sets",
         {{"kernel", "kernel"}, {"sequence", "sequence"}, {"domain", "domain"},
          {"degree", "degree"}, {"n-values", "n_values"}, {"integrand", "integrand"}}},
        {"lsrbf", "lsrbf", "positive least-squares rule by oversampling",
         {{"kernel", "kernel"}, {"eps", "eps"}, {"degree", "degree"}, {"centers", "centers"},
          {"data-seq", "data_seq"}, {"domain", "domain"}, {"nmax", "nmax"}, {"nstart", "nstart"}}},
        {"lsrbf-compare", "lsrbf_compare", "least-squares vs interpolatory rules under noise",
         {{"kernel", "kernel"}, {"eps", "eps"}, {"degree", "degree"}, {"sequence", "sequence"},
          {"domain", "domain"}, {"m-values", "m_values"}, {"integrand", "integrand"},
          {"trials", "trials"}, {"noise", "noise"}, {"nmax", "n_max"}}},
        {"ratio-study", "ratio_study", "N(M) growth of the least-squares construction",
         {{"kernel", "kernel"}, {"eps", "eps"}, {"degree", "degree"}, {"sequence", "sequence"},
          {"domain", "domain"}, {"m-values", "m_values"}, {"nmax", "n_max"}}},
        {"coverage", "coverage", "uncovered area: closed form vs Monte Carlo",
         {{"n-values", "n_values"}, {"eps", "eps"}, {"samples", "samples"}}},
    };

    std::map<std::string, std::map<std::string, std::string>> values;
    std::string dump_gram, trace_out;
    bool geometric = false;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        add_common(sub, common);
        add_keys(sub, values[s.name], s.flags);
        if (std::string(s.name) == "weights")
            sub->add_option("--dump-gram", dump_gram, "also write the DOP Gram matrix CSV here");
        if (std::string(s.name) == "lsrbf") {
            sub->add_option("--trace-out", trace_out, "per-iteration JSON lines (default stdout)");
            sub->add_flag("--geometric", geometric, "grow N geometrically");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const Sub* chosen = nullptr;
    for (const auto& s : subs)
        if (app.got_subcommand(s.name))
            chosen = &s;
    const std::string name = chosen->name;

    Config cfg;
    try {
        cfg = build_config(common, values[name]);
        if (geometric)
            cfg.set("geometric", "true");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    const RunContext ctx{common.jobs, common.timing};

    try {
        if (name == "lsrbf") {
            const LsrbfRun run = run_lsrbf(cfg, ctx);
            const auto meta = metadata("lsrbf", cfg);
            if (trace_out.empty()) {
                write_jsonl(std::cout, run.trace, meta);
            } else {
                std::ofstream os(trace_out, std::ios::binary);
                if (!os)
                    throw std::invalid_argument("cannot open trace file '" + trace_out + "'");
                write_jsonl(os, run.trace, meta);
            }
            emit(run.rule, cfg, common, common.out);
            return 0;
        }
        Table t;
        if (name == "weights")
            t = run_weights(cfg, ctx);
        else if (name == "moments")
            t = run_moments_dump(cfg, ctx);
        else if (name == "stability-sweep")
            t = run_stability_sweep(cfg, ctx);
        else if (name == "error-sweep")
            t = run_error_sweep(cfg, ctx);
        else if (name == "convergence")
            t = run_convergence(cfg, ctx);
        else if (name == "lsrbf-compare")
            t = run_lsrbf_compare(cfg, ctx);
        else if (name == "ratio-study")
            t = run_ratio_study(cfg, ctx);
        else
            t = run_coverage(cfg, ctx);
        emit(t, cfg, common, common.out);
        if (!dump_gram.empty()) {
            Config g;
            for (const char* key : {"points", "domain", "degree"})
                if (cfg.has(key))
                    g.set(key, cfg.require(key));
            if (!g.has("degree") || std::stoi(g.require("degree")) < 0)
                g.set("degree", "0");
            emit(dop_gram(g), g, common, dump_gram);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
