#include <doctest.h>

#include "leflab/config.hpp"

using namespace leflab;
using namespace leflab::config;

TEST_CASE("config parses globals and scenario blocks") {
    const char* text = R"(
# suite settings
tolerance 1e-7
t_grid 0.4,0.2,0.1,0.05
jobs 3

scenario my-disk {
  model disk
  resolution 16
  c 0.5
  boundary_map reflection
  profile one-crossing
  crossing 0.55
  crossing_slope 1.7
  routes simplicial,analytic
}

scenario my-swap {
  model annulus
  c = 2.0
  boundary_map swap:0.785
  crossing_slope 0.5
}
)";
    SuiteConfig cfg = parse_suite_config(text);
    CHECK(cfg.tolerance == doctest::Approx(1e-7));
    CHECK(cfg.jobs == 3);
    REQUIRE(cfg.scenarios.size() == 2);
    CHECK(cfg.scenarios[0].name == "my-disk");
    CHECK(cfg.scenarios[0].resolution == 16);
    CHECK(cfg.scenarios[0].t_grid.size() == 4);  // inherited
    CHECK(cfg.scenarios[1].c == doctest::Approx(2.0));
    CHECK_NOTHROW(validate_suite(cfg));
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_suite_config("tolerance 1e-6\nbogus_key 12\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_suite_config("scenario x {\nmodel disk\n"), ConfigError);
    CHECK_THROWS_AS(parse_suite_config("}\n"), ConfigError);
    CHECK_THROWS_AS(parse_suite_config("scenario a {\n t_grid 0.1,oops\n}\n"), ConfigError);
}

TEST_CASE("degenerate maps are rejected before execution") {
    const char* text = R"(
scenario degenerate {
  model disk
  c 1.0
  boundary_map reflection
}
)";
    SuiteConfig cfg = parse_suite_config(text);
    CHECK_THROWS_AS(validate_suite(cfg), ConfigError);
}

TEST_CASE("unknown models, routes, isometries fail validation") {
    auto make = [](const std::string& body) {
        return parse_suite_config("scenario s {\n" + body + "\n}\n");
    };
    CHECK_THROWS_AS(validate_suite(make("model mystery")), ConfigError);
    CHECK_THROWS_AS(validate_suite(make("model disk\nroutes psychic")), ConfigError);
    CHECK_THROWS_AS(validate_suite(make("model disk\nboundary_map shear")), ConfigError);
    CHECK_THROWS_AS(validate_suite(make("model disk\nresolution 3")), ConfigError);
    CHECK_THROWS_AS(validate_suite(make("model disk\nt_grid 0.1,0.2,0.3,0.4")), ConfigError);
}

TEST_CASE("missing config file") {
    CHECK_THROWS_AS(load_suite_config("/nonexistent/path.cfg"), ConfigError);
}
