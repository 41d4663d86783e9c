// Suite configuration: a line-oriented key-value grammar with scenario
// blocks. Example:
//
//   # global settings
//   tolerance 1e-6
//   t_grid 0.2,0.1,0.05,0.025
//   jobs 2
//
//   scenario my-disk {
//     model disk
//     c 0.5
//     boundary_map reflection
//     profile one-crossing
//     crossing 0.55
//     crossing_slope 1.7
//     routes simplicial,analytic
//   }
//
// 'key value' and 'key = value' are both accepted. Every scenario is
// validated before any execution begins; parse errors carry line/column.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "leflab/harness.hpp"

namespace leflab::config {

struct ConfigError : std::runtime_error {
    int line = 0;
    int column = 0;
    ConfigError(const std::string& msg, int ln, int col)
        : std::runtime_error(msg + " (line " + std::to_string(ln) + ", column " +
                             std::to_string(col) + ")"),
          line(ln), column(col) {}
};

struct SuiteConfig {
    double tolerance = 1e-6;
    double heat_tolerance = 1e-3;
    std::vector<double> t_grid = {0.2, 0.1, 0.05, 0.025};
    double cutoff = 0.0;
    int seed_grid = 48;
    int jobs = 0;
    std::vector<harness::Scenario> scenarios;
};

SuiteConfig parse_suite_config(const std::string& text);
SuiteConfig load_suite_config(const std::string& path);

// Fail-fast validation of every scenario (model, parameters, B, routes).
// Throws ConfigError (line info lost; message names the scenario).
void validate_suite(const SuiteConfig& cfg);

}  // namespace leflab::config
