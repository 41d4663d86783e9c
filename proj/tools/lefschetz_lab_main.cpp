// lefschetz-lab: scenario suite runner, heat diagnostics, and catalog export.
//
// Exit codes: 0 all verdicts pass, 1 verification failure, 2 usage/config
// error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "leflab/config.hpp"
#include "leflab/harness.hpp"
#include "leflab/heat.hpp"
#include "leflab/models.hpp"
#include "leflab/parallel.hpp"
#include "leflab/spectral.hpp"

namespace {

using namespace leflab;

int cmd_list_scenarios() {
    for (const auto& s : harness::builtin_scenarios()) {
        std::ostringstream os;
        os << s.name << " c=" << s.c << " model=" << s.model_name
           << " B=" << s.boundary_map << " routes=";
        for (std::size_t i = 0; i < s.routes.size(); ++i)
            os << (i ? "," : "") << s.routes[i];
        std::cout << os.str() << "\n";
    }
    return 0;
}

struct RunOptions {
    std::string scenario;
    std::string config_path;
    std::string routes;
    std::string report_path;
    std::string csv_path;
    double tolerance = 0.0;
    std::string t_grid;
    double cutoff = 0.0;
    int seed_grid = 0;
    int jobs = 0;
};

int cmd_run(const RunOptions& opt) {
    std::vector<harness::Scenario> scenarios;
    int jobs = opt.jobs;
    try {
        if (!opt.config_path.empty()) {
            config::SuiteConfig cfg = config::load_suite_config(opt.config_path);
            config::validate_suite(cfg);
            scenarios = cfg.scenarios;
            if (jobs == 0) jobs = cfg.jobs;
        } else if (!opt.scenario.empty()) {
            if (opt.scenario == "all") scenarios = harness::builtin_scenarios();
            else scenarios.push_back(harness::builtin_scenario(opt.scenario));
        } else {
            scenarios = harness::builtin_scenarios();
        }
        for (auto& s : scenarios) {
            if (!opt.routes.empty()) {
                s.routes.clear();
                std::stringstream ss(opt.routes);
                std::string tok;
                while (std::getline(ss, tok, ',')) s.routes.push_back(tok);
            }
            if (opt.tolerance > 0) s.tolerance = opt.tolerance;
            if (!opt.t_grid.empty()) {
                s.t_grid.clear();
                std::stringstream ss(opt.t_grid);
                std::string tok;
                while (std::getline(ss, tok, ',')) s.t_grid.push_back(std::stod(tok));
            }
            if (opt.cutoff > 0) s.cutoff = opt.cutoff;
            if (opt.seed_grid > 0) s.seed_grid = opt.seed_grid;
        }
        // fail-fast validation of the final scenario list
        config::SuiteConfig final_cfg;
        final_cfg.scenarios = scenarios;
        config::validate_suite(final_cfg);
    } catch (const std::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    }

    harness::SuiteResult result = harness::run_suite(scenarios, jobs);
    for (const auto& rep : result.reports) {
        if (!rep.error.empty()) {
            std::cout << rep.scenario.name << ": ERROR " << rep.error << "\n";
            continue;
        }
        for (const auto& e : rep.identities) {
            std::cout << rep.scenario.name << "  " << (e.verdict == "pass" ? "PASS" : "FAIL")
                      << "  " << e.name << "  lhs=" << e.lhs << " rhs=" << e.rhs
                      << " residual=" << e.residual << "\n";
        }
    }
    if (!opt.report_path.empty()) {
        std::ofstream out(opt.report_path);
        if (!out) {
            std::cerr << "cannot write report to " << opt.report_path << "\n";
            return 2;
        }
        out << harness::suite_to_json(result);
    }
    if (!opt.csv_path.empty()) {
        std::ofstream out(opt.csv_path);
        if (!out) {
            std::cerr << "cannot write csv to " << opt.csv_path << "\n";
            return 2;
        }
        out << harness::suite_to_csv(result);
    }
    return result.all_pass ? 0 : 1;
}

struct HeatOptions {
    std::string model = "disk";
    double c = 0.5;
    std::string bmap = "reflection";
    std::string bc = "PminusL0";
    int q = 0;
    std::string t_grid = "0.2,0.1,0.05";
    std::string csv_path;
};

int cmd_heat_diagnostics(const HeatOptions& opt) {
    try {
        catalog::ModelManifold model = catalog::build_model(opt.model);
        selfmap::BoundaryIsometry b = selfmap::BoundaryIsometry::parse(opt.bmap);
        selfmap::ProfileSpec spec;
        if (opt.c > 1) spec.kind = model.kind == catalog::ModelKind::disk ||
                                           model.kind == catalog::ModelKind::solid_torus
                                       ? selfmap::ProfileSpec::Kind::no_crossing
                                       : selfmap::ProfileSpec::Kind::one_crossing;
        if (opt.c > 1) spec.crossing_slope = 0.5;
        selfmap::ConditionAMap map = selfmap::make_condition_a_map(model, opt.c, b, spec);
        heat::BoundaryCondition bc = heat::parse_boundary_condition(opt.bc);

        std::vector<double> ts;
        {
            std::stringstream ss(opt.t_grid);
            std::string tok;
            while (std::getline(ss, tok, ',')) ts.push_back(std::stod(tok));
        }
        if (ts.empty()) throw std::invalid_argument("empty t grid");

        std::ostringstream csv;
        csv.precision(17);
        csv << "# gaussian_factor tangential_dirichlet = "
            << heat::gaussian_factor(opt.c, heat::GaussianVariant::tangential_dirichlet) << "\n";
        csv << "# gaussian_factor tangential_neumann = "
            << heat::gaussian_factor(opt.c, heat::GaussianVariant::tangential_neumann) << "\n";
        csv << "# gaussian_factor normal_dirichlet = "
            << heat::gaussian_factor(opt.c, heat::GaussianVariant::normal_dirichlet) << "\n";
        csv << "# gaussian_factor normal_neumann = "
            << heat::gaussian_factor(opt.c, heat::GaussianVariant::normal_neumann) << "\n";

        bool is_interval = model.kind == catalog::ModelKind::interval;
        double t_min = *std::min_element(ts.begin(), ts.end());
        double cutoff = 50.0 / t_min;
        spectral::SpectralBasis sb(model, cutoff);
        csv << "t,q,bc,route_i,route_ii,difference" << (is_interval ? ",parametrix_error" : "")
            << "\n";
        for (double t : ts) {
            heat::BtiResult r = heat::boundary_trace_integral(map, sb, bc, opt.q, t);
            csv << t << "," << opt.q << "," << heat::to_string(bc) << "," << r.reduced << ","
                << r.quadrature << "," << std::abs(r.reduced - r.quadrature);
            if (is_interval) csv << "," << heat::parametrix_error(model, bc, t);
            csv << "\n";
        }
        std::string text = csv.str();
        if (!opt.csv_path.empty()) {
            std::ofstream out(opt.csv_path);
            if (!out) {
                std::cerr << "cannot write csv to " << opt.csv_path << "\n";
                return 2;
            }
            out << text;
        } else {
            std::cout << text;
        }
        return 0;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}

struct CatalogOptions {
    std::string model;
    std::string off_path;
};

int cmd_catalog(const CatalogOptions& opt) {
    try {
        if (opt.model.empty()) {
            for (const auto& d : catalog::list_models())
                std::cout << d.name << " dim=" << d.dim << " default_resolution="
                          << d.default_resolution << " default_collar=" << d.default_collar
                          << "  # " << d.summary << "\n";
            return 0;
        }
        catalog::ModelManifold m = catalog::build_model(opt.model);
        std::cout << catalog::serialize_catalog_entry(m);
        if (!opt.off_path.empty()) {
            std::ofstream out(opt.off_path);
            if (!out) {
                std::cerr << "cannot write OFF to " << opt.off_path << "\n";
                return 2;
            }
            out << catalog::export_off(m);
        }
        return 0;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lefschetz fixed point identity verification lab"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list-scenarios", "list built-in scenarios");

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "run verification scenarios");
    run_cmd->add_option("--scenario", run_opt.scenario, "built-in scenario name, or 'all'");
    run_cmd->add_option("--config", run_opt.config_path, "suite config file");
    run_cmd->add_option("--routes", run_opt.routes, "comma list: simplicial,analytic,heat");
    run_cmd->add_option("--report", run_opt.report_path, "write JSON report here");
    run_cmd->add_option("--csv", run_opt.csv_path, "write CSV summary here");
    run_cmd->add_option("--tolerance", run_opt.tolerance, "analytic route tolerance");
    run_cmd->add_option("--t-grid", run_opt.t_grid, "comma list of decreasing times");
    run_cmd->add_option("--cutoff", run_opt.cutoff, "spectral cutoff (max eigenvalue)");
    run_cmd->add_option("--seed-grid", run_opt.seed_grid, "fixed point search grid resolution");
    run_cmd->add_option("--jobs", run_opt.jobs,
                        "parallel scenarios (default: LEFSCHETZ_LAB_JOBS or hardware)");

    HeatOptions heat_opt;
    auto* heat_cmd = app.add_subcommand("heat-diagnostics", "per-t kernel and trace tables");
    heat_cmd->add_option("--model", heat_opt.model, "catalog model name");
    heat_cmd->add_option("--c", heat_opt.c, "collar scaling c");
    heat_cmd->add_option("--B", heat_opt.bmap, "boundary isometry descriptor");
    heat_cmd->add_option("--bc", heat_opt.bc, "PminusL0 | PplusL1");
    heat_cmd->add_option("--q", heat_opt.q, "form degree");
    heat_cmd->add_option("--t-grid", heat_opt.t_grid, "comma list of times");
    heat_cmd->add_option("--csv", heat_opt.csv_path, "write CSV here (default stdout)");

    CatalogOptions cat_opt;
    auto* cat_cmd = app.add_subcommand("catalog", "catalog entries and mesh export");
    cat_cmd->add_option("--model", cat_opt.model, "model to serialize (default: list all)");
    cat_cmd->add_option("--off", cat_opt.off_path, "write an OFF mesh here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list_cmd->parsed()) return cmd_list_scenarios();
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (heat_cmd->parsed()) return cmd_heat_diagnostics(heat_opt);
    if (cat_cmd->parsed()) return cmd_catalog(cat_opt);
    return 2;
}
