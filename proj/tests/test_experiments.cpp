#include "doctest.h"

#include "rbfqf/experiments.hpp"

#include <sstream>
#include <stdexcept>

using namespace rbfqf;

namespace {

std::string csv(const Table& t, const Config& cfg) {
    std::ostringstream os;
    write_csv(os, t, metadata(t.experiment, cfg));
    return os.str();
}

std::string jsonl(const Table& t, const Config& cfg) {
    std::ostringstream os;
    write_jsonl(os, t, metadata(t.experiment, cfg));
    return os.str();
}

} // namespace

TEST_SUITE("experiments") {

TEST_CASE("config parsing and overrides") {
    Config c = Config::parse("# comment\nkernel = phs:3\n\n degree=1 \neps = 0.5,2\n");
    CHECK(c.require("kernel") == "phs:3");
    CHECK(c.get_int("degree", 0) == 1);
    CHECK(c.get_doubles("eps", "") == std::vector<double>{0.5, 2.0});
    c.set("degree=2");
    CHECK(c.get_int("degree", 0) == 2);
    CHECK_THROWS_AS(c.set("novalue"), std::invalid_argument);
    CHECK_THROWS_AS(Config::parse("just words"), std::invalid_argument);
    CHECK_THROWS_AS(c.get_double("kernel", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(c.require("missing"), std::invalid_argument);
    CHECK(c.get_seed("samples", 7) == 7);
    c.set("samples=1e7");
    CHECK(c.get_int("samples", 0) == 10000000);
    const Config d = Config::parse("degree = 2\neps=0.5,2\nkernel=phs:3");
    CHECK(c.hash() != d.hash());
    c.set("samples", "7");
    Config e = d;
    e.set("samples", "7");
    CHECK(c.hash() == e.hash());
}

TEST_CASE("eps grids") {
    const auto g = parse_eps_grid("log:0.1:100:40", 0.0);
    CHECK(g.size() == 121);
    CHECK(g.front() == doctest::Approx(0.1));
    CHECK(g.back() == doctest::Approx(100.0));
    CHECK(parse_eps_grid("1,inv_hmin", 0.25) == std::vector<double>{1.0, 4.0});
    CHECK_THROWS_AS(parse_eps_grid("inv_hmin", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_eps_grid("-1", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(parse_eps_grid("log:1:0.1:4", 0.0), std::invalid_argument);
}

TEST_CASE("csv quoting and number format") {
    Table t{"x", {"a", "b", "c"}, {}, nlohmann::json::object()};
    t.add({{"a", std::string("wendland:1,1")}, {"b", 0.1}, {"c", true}});
    t.add({{"a", std::string("say \"hi\"")}});
    const std::string s = csv(t, Config{});
    CHECK(s.find("\"wendland:1,1\",0.10000000000000001,true\n") != std::string::npos);
    CHECK(s.find("\"say \"\"hi\"\"\",,\n") != std::string::npos);
    CHECK(format_double(1.0 / 0.0) == "inf");
    CHECK(format_double(0.0 / 0.0) == "nan");
    CHECK_THROWS_AS(t.add({{"zzz", 1.0}}), std::logic_error);
}

TEST_CASE("sweeps tag failing cells and keep going") {
    Config c;
    c.set("kernels", "gaussian");
    c.set("points", "halton:60");
    c.set("degrees", "0");
    c.set("eps", "0.001,5");
    const Table t = run_stability_sweep(c, {});
    REQUIRE(t.rows.size() == 2);
    const auto status = std::find(t.columns.begin(), t.columns.end(), "status") - t.columns.begin();
    const auto ill =
        std::find(t.columns.begin(), t.columns.end(), "ill_conditioned") - t.columns.begin();
    CHECK(std::get<std::string>(t.rows[1][status]) == "ok");
    // the flat case either fails outright or is flagged
    const bool failed = std::get<std::string>(t.rows[0][status]) != "ok";
    CHECK((failed || std::get<bool>(t.rows[0][ill])));
}

TEST_CASE("output is identical across reruns and worker counts") {
    Config c;
    c.set("kernel", "wendland:2,1");
    c.set("points", "halton:100");
    c.set("eps", "log:1:10:4");
    c.set("trials", "3");
    const std::string a = csv(run_error_sweep(c, {1, false}), c);
    const std::string b = csv(run_error_sweep(c, {1, false}), c);
    const std::string p = csv(run_error_sweep(c, {4, false}), c);
    CHECK(a == b);
    CHECK(a == p);
    Config cov;
    cov.set("samples", "20000");
    CHECK(jsonl(run_coverage(cov, {1, false}), cov) == jsonl(run_coverage(cov, {3, false}), cov));
}

TEST_CASE("timing column only on request") {
    Config c;
    c.set("n_values", "4");
    c.set("samples", "10000");
    const Table a = run_coverage(c, {1, false});
    const Table b = run_coverage(c, {1, true});
    CHECK(std::find(a.columns.begin(), a.columns.end(), "runtime_ms") == a.columns.end());
    CHECK(std::find(b.columns.begin(), b.columns.end(), "runtime_ms") != b.columns.end());
}

TEST_CASE("metadata echoes defaults and generator constants") {
    Config c;
    c.set("points", "equid:5");
    const auto m = metadata("weights", c);
    CHECK(m["config"]["kernel"] == "phs:1");
    CHECK(m["config"]["points"] == "equid:5");
    CHECK(m["generator"]["gamma"] == "0x9E3779B97F4A7C15");
    CHECK(m["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("weights table and gram dump") {
    Config c;
    c.set("points", "equid:3");
    const Table t = run_weights(c, {});
    REQUIRE(t.rows.size() == 3);
    CHECK(std::get<double>(t.rows[1][3]) == doctest::Approx(0.5));
    CHECK(t.summary["is_stable"] == true);
    Config g;
    g.set("degree", "2");
    const Table d = dop_gram(g);
    CHECK(d.rows.size() == 9);
    CHECK(d.summary["gram_deviation"].get<double>() < 1e-10);
    CHECK_THROWS_AS(experiment_defaults("nope"), std::invalid_argument);
}

}
