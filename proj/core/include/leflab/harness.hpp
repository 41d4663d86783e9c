// Scenario orchestration: assemble a model + Condition A map, compute every
// left- and right-hand side of the verified identities by the enabled routes,
// and emit reports.
#pragma once

#include <string>
#include <vector>

#include "leflab/cohomology.hpp"
#include "leflab/models.hpp"
#include "leflab/selfmap.hpp"

namespace leflab::harness {

struct Scenario {
    std::string name;
    std::string model_name = "disk";
    int resolution = 0;          // 0 = catalog default
    double collar_width = 0.0;   // 0 = catalog default
    double c = 0.5;
    std::string boundary_map = "reflection";
    selfmap::ProfileSpec profile;
    std::vector<std::string> routes = {"simplicial", "analytic"};
    double tolerance = 1e-6;      // analytic-vs-exact tolerance
    double heat_tolerance = 1e-3;
    std::vector<double> t_grid = {0.2, 0.1, 0.05, 0.025};
    double cutoff = 0.0;          // 0 = 50 / min(t_grid)
    int seed_grid = 48;

    bool route_enabled(const std::string& r) const;
};

struct IdentityEntry {
    std::string name;
    double lhs = 0.0, rhs = 0.0, residual = 0.0;
    std::string lhs_exact, rhs_exact;  // exact rational strings when available
    bool exact = false;
    std::string routes;
    std::string verdict;  // pass | fail
};

struct FixedPointEntry {
    std::vector<double> location;
    std::string kind;  // interior | boundary
    int index = 0;
    double a_value = 0.0;
    std::string classification;
};

struct IdentityReport {
    Scenario scenario;
    std::vector<IdentityEntry> identities;
    std::vector<FixedPointEntry> fixed_points;
    std::vector<std::string> warnings;
    cohomology::TraceTable trace_table;
    double k0 = 0.0;
    bool orientation_reversing = false;
    double timing_seconds = 0.0;
    bool pass = false;
    std::string error;  // nonempty when the scenario failed to execute
};

IdentityReport verify_identities(const Scenario& sc);

std::vector<Scenario> builtin_scenarios();
const Scenario& builtin_scenario(const std::string& name);

struct SuiteResult {
    std::vector<IdentityReport> reports;
    bool all_pass = true;
};

SuiteResult run_suite(const std::vector<Scenario>& scenarios, int jobs = 0);

std::string report_to_json(const IdentityReport& report);
std::string suite_to_json(const SuiteResult& result);
std::string suite_to_csv(const SuiteResult& result);

// Structural validation against the shipped report schema
// (share/report-schema.json mirrors these requirements).
bool validate_report_json(const std::string& json_text, std::string* why = nullptr);

}  // namespace leflab::harness
