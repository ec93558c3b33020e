#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "emvac/config.hpp"
#include "emvac/runners.hpp"

using namespace emvac;
using doctest::Approx;

namespace {

const char* kSample = R"(
# benchmark setup
[medium]
rho = 0.05
alpha_tilde = 1.0,4.2e-4
xi = 1.0

[sweep]
k_grid = 0.1,0.2,0.5

[run]
parallelism = 2
verbose = true
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parse, serialize, reparse round trip") {
    const auto cfg = RunConfig::parse_string(kSample);
    const auto again = RunConfig::parse_string(cfg.serialize());
    CHECK(cfg.serialize() == again.serialize());
    CHECK(cfg.sections() == again.sections());
}

TEST_CASE("typed getters") {
    const auto cfg = RunConfig::parse_string(kSample);
    CHECK(cfg.get_double("medium", "rho") == 0.05);
    CHECK(cfg.get_double("medium", "missing", 7.0) == 7.0);
    CHECK_THROWS_AS(cfg.get_double("medium", "missing"), ConfigError);
    CHECK(cfg.get_int("run", "parallelism") == 2);
    CHECK(cfg.get_bool("run", "verbose"));
    CHECK(cfg.get_bool("run", "quiet", false) == false);
    const auto a = cfg.get_complex("medium", "alpha_tilde");
    CHECK(a.real() == 1.0);
    CHECK(a.imag() == 4.2e-4);
    CHECK(cfg.get_complex("medium", "rho").imag() == 0.0);
    const auto grid = cfg.get_grid("sweep", "k_grid");
    REQUIRE(grid.size() == 3);
    CHECK(grid[1] == 0.2);
}

TEST_CASE("grids must increase strictly") {
    auto cfg = RunConfig::parse_string("[sweep]\nk_grid = 1.0,1.0,2.0\n");
    CHECK_THROWS_AS(cfg.get_grid("sweep", "k_grid"), ConfigError);
    cfg = RunConfig::parse_string("[sweep]\nk_grid = 2.0,1.0\n");
    CHECK_THROWS_AS(cfg.get_grid("sweep", "k_grid"), ConfigError);
    cfg = RunConfig::parse_string("[sweep]\nk_grid = 3.0\n");
    CHECK(cfg.get_grid("sweep", "k_grid").size() == 1);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(RunConfig::parse_string("[medium\nrho = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::parse_string("rho = 1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse_string("[m]\nrho\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse_string("[m]\nrho = 1\nrho = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::parse_string("[m]\nbad key = 1\n"),
                    ConfigError);
    auto cfg = RunConfig::parse_string("[m]\nx = not_a_number\n");
    CHECK_THROWS_AS(cfg.get_double("m", "x"), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("m", "x"), ConfigError);
    CHECK_THROWS_AS(cfg.get_bool("m", "x"), ConfigError);
}

TEST_CASE("overrides") {
    auto cfg = RunConfig::parse_string(kSample);
    cfg.set("medium.rho", "0.10");
    CHECK(cfg.get_double("medium", "rho") == 0.10);
    cfg.set("fresh.key", "1");
    CHECK(cfg.get_int("fresh", "key") == 1);
    CHECK_THROWS_AS(cfg.set("noseparator", "1"), ConfigError);
    CHECK_THROWS_AS(cfg.set("a.", "1"), ConfigError);
}

TEST_CASE("hash ignores declaration order and the run section") {
    const auto a = RunConfig::parse_string(
        "[m]\nx = 1\ny = 2\n[z]\nw = 3\n[run]\nparallelism = 1\n");
    const auto b = RunConfig::parse_string(
        "[z]\nw = 3\n[m]\ny = 2\nx = 1\n[run]\nparallelism = 8\n");
    CHECK(a.hash() == b.hash());
    auto c = a;
    c.set("m.x", "2");
    CHECK(c.hash() != a.hash());
    // canonical text drops [run] but serialize keeps it
    CHECK(a.canonical().find("parallelism") == std::string::npos);
    CHECK(a.serialize().find("parallelism") != std::string::npos);
}

TEST_CASE("numeric formatting round trips doubles exactly") {
    for (double v : {1.0 / 3.0, 0.1, 6.02e23, -2.5e-17, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("quadrature section with defaults") {
    const auto cfg = RunConfig::parse_string("[quadrature]\nq_max = 25.0\n");
    const auto spec = quad_spec_from(cfg);
    CHECK(spec.q_max == 25.0);
    CHECK(spec.eta == 1e-6);
    CHECK(spec.rel_tol == 1e-9);
    const auto bad =
        RunConfig::parse_string("[quadrature]\nrel_tol = 0.5\n");
    CHECK_THROWS_AS(quad_spec_from(bad), ConfigError);
}

TEST_CASE("ldos runner output is deterministic and annotated") {
    const auto cfg = RunConfig::parse_string(
        "[medium]\nrho = 0.2\nalpha_tilde = 1.0\nxi = 0.1\n"
        "[sweep]\nk_grid = 0.5,1.0\n");
    std::ostringstream a, b;
    CHECK(run_ldos(cfg, a) == 0);
    CHECK(run_ldos(cfg, b) == 0);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("# emvac ") == 0);
    CHECK(a.str().find("config_hash") != std::string::npos);
    CHECK(a.str().find("n_emis") != std::string::npos);
    // two data rows after the header
    int rows = 0;
    std::istringstream lines(a.str());
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'k') ++rows;
    CHECK(rows == 2);
}

TEST_CASE("emission runner validates its model name") {
    const auto cfg = RunConfig::parse_string(
        "[medium]\nrho = 0.2\nalpha_tilde = 1.0\nxi = 0.1\nmodel = bogus\n"
        "[sweep]\nk_grid = 1.0\n");
    std::ostringstream out;
    CHECK_THROWS_AS(run_emission(cfg, out), ConfigError);
}

TEST_CASE("ensemble runner bytes are identical across worker counts") {
    const std::string base =
        "[medium]\nrho = 0.05\nxi = 1.0\n"
        "[ensemble]\nk = 0.2\nn_dipoles = 40\nn_configs = 6\n"
        "alpha0 = 1.0\nbase_seed = 11\n";
    const auto serial =
        RunConfig::parse_string(base + "[run]\nparallelism = 1\n");
    const auto threaded =
        RunConfig::parse_string(base + "[run]\nparallelism = 4\n");
    std::ostringstream a, b;
    const int ra = run_cdm_validate(serial, a);
    const int rb = run_cdm_validate(threaded, b);
    CHECK(ra == rb);
    CHECK(a.str() == b.str());
}

TEST_CASE("selftest passes") {
    std::ostringstream out;
    CHECK(run_selftest(out) == 0);
    CHECK(out.str().find("FAIL") == std::string::npos);
}

}  // TEST_SUITE
