#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "../support.hpp"
#include "tailforge/builtins.hpp"
#include "tailforge/convolve.hpp"
#include "tailforge/errors.hpp"
#include "tailforge/experiments.hpp"
#include "tailforge/functionals.hpp"
#include "tailforge/io.hpp"

using namespace tailforge;
using testsupport::TempDir;

TEST_SUITE("io") {

TEST_CASE("grid text") {
    CHECK(io::parse_grid("1,2,5") == std::vector<double>{1, 2, 5});
    CHECK(io::parse_grid("lin:0:1:3") == std::vector<double>{0, 0.5, 1});
    const auto g = io::parse_grid("geom:1:1000:4");
    REQUIRE(g.size() == 4);
    CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(g.back() == 1000.0);
    CHECK_THROWS_AS(io::parse_grid(""), ParameterError);
    CHECK_THROWS_AS(io::parse_grid("geom:1:10"), ParameterError);
    CHECK_THROWS_AS(io::parse_grid("1,x"), ParameterError);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5}) CHECK(std::stod(io::fmt(v)) == v);
    CHECK(io::fmt(INFINITY) == "inf");
    CHECK(io::fmt(-INFINITY) == "-inf");
    CHECK(io::fmt(NAN) == "nan");
    const auto j = io::sanitize(nlohmann::json{{"a", INFINITY}, {"b", 1.0}});
    CHECK(j.at("a") == "inf");
    CHECK(io::format_from_string("csv") == io::Format::csv);
    CHECK_THROWS_AS(io::format_from_string("xml"), ParameterError);
}

TEST_CASE("table columns") {
    const auto d = builtin(DyadicParetoSpec{});
    const std::vector<double> grid{2, 4, 8};
    const auto s = ratio_diagnostic(d, {RatioKind::D}, grid);
    const auto t = io::table(s);
    CHECK(t.columns == std::vector<std::string>{"x", "value"});
    CHECK(t.rows.size() == 3);
    const auto g = convn_tail_grid(builtin(ExponentialSpec{1.0}), 2, 2.0, 0.5);
    const auto tg = io::table(g);
    CHECK(tg.columns == std::vector<std::string>{"x", "log_lower", "log_upper"});
    CHECK(tg.csv().rfind("x,log_lower,log_upper\n", 0) == 0);
}

TEST_CASE("exports are byte identical across runs") {
    TempDir dir("export");
    const auto d = builtin(ParetoSpec{3.0});
    const auto s = ratio_diagnostic(d, {RatioKind::OL, 1.0}, geometric_grid(2, 2000, 12));
    const auto g = convn_tail_grid(d, 3, 8.0, 0.25);
    for (auto f : {io::Format::csv, io::Format::json}) {
        const std::string ext = f == io::Format::csv ? ".csv" : ".json";
        io::export_grid(s, f, (dir.path() / ("s1" + ext)).string());
        io::export_grid(s, f, (dir.path() / ("s2" + ext)).string());
        io::export_grid(g, f, (dir.path() / ("g1" + ext)).string());
        io::export_grid(g, f, (dir.path() / ("g2" + ext)).string());
        CHECK(testsupport::slurp(dir.path() / ("s1" + ext)) == testsupport::slurp(dir.path() / ("s2" + ext)));
        CHECK(testsupport::slurp(dir.path() / ("g1" + ext)) == testsupport::slurp(dir.path() / ("g2" + ext)));
    }
    const auto json = nlohmann::json::parse(testsupport::slurp(dir.path() / "s1.json"));
    CHECK(json.is_object());
}

TEST_CASE("file errors name the path") {
    try {
        io::read_file("/nonexistent/dir/file.txt");
        FAIL("no exception");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/file.txt") != std::string::npos);
    }
}

TEST_CASE("grid cache returns the same grid") {
    TempDir dir("cache");
    const auto d = builtin(ExponentialSpec{1.0});
    const auto plain = convn_tail_grid(d, 2, 6.0, 0.125);
    ::setenv("TAILFORGE_CACHE_DIR", dir.str().c_str(), 1);
    const auto first = io::cached_convn_tail_grid(d, 2, 6.0, 0.125);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        ++files;
        const std::string body = testsupport::slurp(e.path());
        const auto header = nlohmann::json::parse(body.substr(0, body.find('\n')));
        CHECK(header.at("schema") == "tailforge/grid-cache@1");
        CHECK(header.contains("spec_hash"));
    }
    CHECK(files == 1);
    const auto second = io::cached_convn_tail_grid(d, 2, 6.0, 0.125);
    ::unsetenv("TAILFORGE_CACHE_DIR");
    CHECK(first.lower == plain.lower);
    CHECK(first.upper == plain.upper);
    CHECK(second.lower == plain.lower);
    CHECK(second.upper == plain.upper);
    CHECK(second.grid == plain.grid);
}

TEST_CASE("fnv hash") {
    CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

}  // TEST_SUITE

TEST_SUITE("experiments") {

TEST_CASE("ids and default configs") {
    const auto& ids = experiment_ids();
    CHECK(ids.size() == 5);
    for (const auto& id : ids) {
        CHECK(is_experiment_id(id));
        const auto c = default_experiment_config(id);
        CHECK(c.at("id") == id);
    }
    CHECK_FALSE(is_experiment_id("prop-9.9"));
    CHECK_THROWS_AS(default_experiment_config("prop-9.9"), ParameterError);
}

TEST_CASE("an experiment reruns identically, also from its summary") {
    TempDir a("exp-a"), b("exp-b"), c("exp-c");
    const auto cfg = default_experiment_config("prop-1.3");
    const auto ra = run_experiment(cfg, a.str());
    const auto rb = run_experiment(cfg, b.str());
    CHECK(ra.passed);
    CHECK(ra.first_failure().empty());
    CHECK(rb.passed);
    CHECK(testsupport::tree_diff(a.path(), b.path()) == "");
    const auto rc = rerun_from_summary((a.path() / "summary.json").string(), c.str());
    CHECK(rc.passed);
    CHECK(testsupport::tree_diff(a.path(), c.path()) == "");
    const auto summary = nlohmann::json::parse(testsupport::slurp(a.path() / "summary.json"));
    CHECK(summary.at("schema") == experiment_schema);
    CHECK(summary.at("config") == cfg);
}

TEST_CASE("a failing expectation is reported") {
    TempDir a("exp-fail");
    auto cfg = default_experiment_config("prop-1.3");
    // an unreachable floor for the t ratio profile
    cfg["t_ratio"]["floor"] = 1.5;
    const auto r = run_experiment(cfg, a.str());
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.first_failure().empty());
}

}  // TEST_SUITE
