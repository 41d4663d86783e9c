#include "leflab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "leflab/heat.hpp"
#include "leflab/numerics.hpp"
#include "leflab/parallel.hpp"
#include "leflab/spectral.hpp"

namespace leflab::harness {

using nlohmann::ordered_json;

bool Scenario::route_enabled(const std::string& r) const {
    return std::find(routes.begin(), routes.end(), r) != routes.end();
}

namespace {

Rat exact_from_near_integer(double x, const char* what) {
    auto [n, dist] = num::nearest_integer(x);
    if (dist > 1e-9)
        throw std::runtime_error(std::string(what) + " is not integer-valued: " +
                                 std::to_string(x));
    return rat(n);
}

struct FixedPointSums {
    Rat interior{0};        // sum over F_0 of sign det(I - df)
    Rat boundary{0};        // sum over F_Y
    Rat attracting{0};      // sum over F_Y^+
    Rat repelling{0};       // sum over F_Y^-
    int n_attracting = 0;
    int n_repelling = 0;
};

FixedPointSums tally(const std::vector<selfmap::FixedPointRecord>& records) {
    FixedPointSums s;
    for (const auto& r : records) {
        if (!r.on_boundary) {
            s.interior += rat(r.index);
        } else {
            s.boundary += rat(r.index);
            if (r.classification == "attracting") {
                s.attracting += rat(r.index);
                ++s.n_attracting;
            } else {
                s.repelling += rat(r.index);
                ++s.n_repelling;
            }
        }
    }
    return s;
}

IdentityEntry exact_entry(const std::string& name, const Rat& lhs, const Rat& rhs,
                          const std::string& routes) {
    IdentityEntry e;
    e.name = name;
    e.exact = true;
    e.lhs = to_double(lhs);
    e.rhs = to_double(rhs);
    e.lhs_exact = to_string(lhs);
    e.rhs_exact = to_string(rhs);
    Rat resid = lhs - rhs;
    e.residual = std::abs(to_double(resid));
    e.routes = routes;
    e.verdict = resid == 0 ? "pass" : "fail";
    return e;
}

IdentityEntry float_entry(const std::string& name, double lhs, double rhs, double tol,
                          const std::string& routes) {
    IdentityEntry e;
    e.name = name;
    e.exact = false;
    e.lhs = lhs;
    e.rhs = rhs;
    e.residual = std::abs(lhs - rhs);
    e.routes = routes;
    e.verdict = e.residual <= tol ? "pass" : "fail";
    return e;
}

}  // namespace

IdentityReport verify_identities(const Scenario& sc) {
    IdentityReport rep;
    rep.scenario = sc;
    auto t0 = std::chrono::steady_clock::now();
    try {
        const auto& desc = catalog::descriptor(sc.model_name);
        int resolution = sc.resolution > 0 ? sc.resolution : desc.default_resolution;
        double collar = sc.collar_width > 0 ? sc.collar_width : desc.default_collar;
        rep.scenario.resolution = resolution;
        rep.scenario.collar_width = collar;
        catalog::ModelManifold model = catalog::build_model(sc.model_name, resolution, collar);

        selfmap::BoundaryIsometry b = selfmap::BoundaryIsometry::parse(sc.boundary_map);
        selfmap::ConditionAMap map = selfmap::make_condition_a_map(model, sc.c, b, sc.profile);

        auto cond_a = selfmap::verify_condition_a(map, 500);
        if (!cond_a.pass)
            throw std::runtime_error("Condition A violated: collar residual " +
                                     std::to_string(cond_a.worst_residual));

        selfmap::FixedPointSearch fps = selfmap::find_fixed_points(map, sc.seed_grid, 1e-12);
        rep.warnings = fps.warnings;
        for (const auto& r : fps.records) {
            FixedPointEntry e;
            for (int i = 0; i < r.location.dim; ++i) e.location.push_back(r.location[i]);
            e.kind = r.on_boundary ? "boundary" : "interior";
            e.index = r.index;
            e.a_value = r.a_value;
            e.classification = r.classification;
            rep.fixed_points.push_back(std::move(e));
        }
        FixedPointSums sums = tally(fps.records);

        // Condition A forces all boundary fixed points to one side of c = 1
        if (sums.n_attracting > 0 && sums.n_repelling > 0)
            throw std::runtime_error("both attracting and repelling boundary fixed points");

        int sigma = spectral::orientation_sign(model.boundary, b);
        rep.orientation_reversing = sigma < 0;
        rep.k0 = spectral::compute_k0(model, b);
        Rat k0 = exact_from_near_integer(rep.k0, "K0");

        Rat half{1, 2};
        Rat rhs_abs_fp = sums.interior + sums.attracting;
        Rat rhs_rel_fp = sums.interior + sums.repelling;
        Rat rhs_p0_fp = sums.interior + half * sums.boundary - k0;
        Rat rhs_p1_fp = sums.interior + half * sums.boundary + k0;
        Rat rhs_even_gap = half * sums.attracting - half * sums.repelling + k0;
        Rat rhs_odd_gap = -half * sums.attracting + half * sums.repelling + k0;

        bool exact_route = sc.route_enabled("simplicial");
        if (exact_route) {
            simplicial::VertexMap vm = cohomology::scenario_vertex_map(model, b);
            rep.trace_table = cohomology::induced_trace_simplicial(model, vm);
            auto ln = cohomology::lefschetz_numbers(rep.trace_table);

            Rat even_abs{0}, odd_abs{0}, even_rel{0}, odd_rel{0};
            for (int q = 0; q <= model.dim; ++q) {
                if (q % 2 == 0) {
                    even_abs += rep.trace_table.abs_exact[q];
                    even_rel += rep.trace_table.rel_exact[q];
                } else {
                    odd_abs += rep.trace_table.abs_exact[q];
                    odd_rel += rep.trace_table.rel_exact[q];
                }
            }
            rep.identities.push_back(
                exact_entry("absolute-vs-fixed-points", ln.e_abs, rhs_abs_fp, "simplicial+fixed-points"));
            rep.identities.push_back(
                exact_entry("relative-vs-fixed-points", ln.e_rel, rhs_rel_fp, "simplicial+fixed-points"));
            rep.identities.push_back(
                exact_entry("mixed-p0-identity", ln.e_p0, rhs_p0_fp, "simplicial+fixed-points+k0"));
            rep.identities.push_back(
                exact_entry("mixed-p1-identity", ln.e_p1, rhs_p1_fp, "simplicial+fixed-points+k0"));
            rep.identities.push_back(exact_entry("even-trace-difference", even_abs - even_rel, rhs_even_gap,
                                                 "simplicial+fixed-points+k0"));
            rep.identities.push_back(exact_entry("odd-trace-difference", odd_abs - odd_rel, rhs_odd_gap,
                                                 "simplicial+fixed-points+k0"));
            rep.identities.push_back(exact_entry("cross-k0-antisymmetry", ln.e_p1 - ln.e_p0,
                                                 rat(2) * k0, "simplicial+k0"));
            rep.identities.push_back(exact_entry("cross-sum-consistency", ln.e_p0 + ln.e_p1,
                                                 ln.e_abs + ln.e_rel, "simplicial"));
        }

        if (sc.route_enabled("analytic")) {
            cohomology::AnalyticDiagnostics diag;
            cohomology::TraceTable at = cohomology::induced_trace_analytic(model, map, &diag);
            auto ln = cohomology::lefschetz_numbers(at);
            if (!exact_route) rep.trace_table = at;
            rep.identities.push_back(float_entry("absolute-vs-fixed-points [analytic]", ln.l_abs,
                                                 to_double(rhs_abs_fp), sc.tolerance,
                                                 "analytic+fixed-points"));
            rep.identities.push_back(float_entry("relative-vs-fixed-points [analytic]", ln.l_rel,
                                                 to_double(rhs_rel_fp), sc.tolerance,
                                                 "analytic+fixed-points"));
            rep.identities.push_back(float_entry("mixed-p0-identity [analytic]", ln.l_p0,
                                                 to_double(rhs_p0_fp), sc.tolerance,
                                                 "analytic+fixed-points+k0"));
            rep.identities.push_back(float_entry("mixed-p1-identity [analytic]", ln.l_p1,
                                                 to_double(rhs_p1_fp), sc.tolerance,
                                                 "analytic+fixed-points+k0"));
            if (exact_route) {
                // route agreement, degree-by-degree
                double worst = 0.0;
                for (int q = 0; q <= model.dim; ++q) {
                    worst = std::max(worst, std::abs(at.abs[q] - rep.trace_table.abs[q]));
                    worst = std::max(worst, std::abs(at.rel[q] - rep.trace_table.rel[q]));
                }
                rep.identities.push_back(float_entry("route-agreement-traces", worst, 0.0,
                                                     sc.tolerance, "simplicial vs analytic"));
            }
        }

        if (sc.route_enabled("heat")) {
            double cutoff = sc.cutoff > 0 ? sc.cutoff : 50.0 / sc.t_grid.back();
            spectral::SpectralBasis sb(model, cutoff);
            double interior_sum = 0.0;
            for (const auto& r : fps.records) {
                if (r.on_boundary) continue;
                double clearance = 1e30;
                for (const auto& other : fps.records) {
                    double d = model.chart_dist(r.location, other.location);
                    if (d > 1e-9) clearance = std::min(clearance, d);
                }
                auto check = heat::interior_index_heat_check(map, r, sc.t_grid, clearance);
                interior_sum += check.extrapolated;
            }
            auto combined = heat::combined_boundary_limit(map, sb, sc.t_grid);
            rep.identities.push_back(float_entry("mixed-p0-identity [heat]",
                                                 interior_sum + combined.extrapolated,
                                                 to_double(rhs_p0_fp), sc.heat_tolerance,
                                                 "heat interior+boundary"));
            rep.identities.push_back(float_entry("heat-boundary-target",
                                                 combined.extrapolated,
                                                 combined.closed_form_target, sc.heat_tolerance,
                                                 "heat boundary vs closed form"));
        }

        rep.pass = true;
        for (const auto& e : rep.identities) rep.pass = rep.pass && e.verdict == "pass";
    } catch (const std::exception& ex) {
        rep.error = ex.what();
        rep.pass = false;
    }
    rep.timing_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> out;
    auto add = [&out](const std::string& name, const std::string& model, double c,
                      const std::string& bmap, selfmap::ProfileSpec::Kind kind,
                      double crossing_slope, double interior_slope = 0.4,
                      double crossing = 0.5) {
        Scenario s;
        s.name = name;
        s.model_name = model;
        s.c = c;
        s.boundary_map = bmap;
        s.profile.kind = kind;
        s.profile.interior_slope = interior_slope;
        s.profile.crossing = crossing;
        s.profile.crossing_slope = crossing_slope;
        out.push_back(std::move(s));
    };
    using K = selfmap::ProfileSpec::Kind;
    add("disk-reflection", "disk", 0.5, "reflection", K::one_crossing, 1.7, 0.4, 0.55);
    add("disk-reflection-repelling", "disk", 3.0, "reflection", K::no_crossing, 0.0);
    add("disk-rotation", "disk", 0.5, "rotation:1.0471975511965976", K::one_crossing, 1.7,
        0.4, 0.55);
    add("disk-rotation-repelling", "disk", 2.0, "rotation:1.0471975511965976",
        K::no_crossing, 0.0);
    add("annulus-rotation", "annulus", 0.5, "rotation:0.7853981633974483", K::one_crossing,
        1.7);
    add("annulus-rotation-repelling", "annulus", 2.0, "rotation:0.7853981633974483",
        K::one_crossing, 0.5);
    add("annulus-swap", "annulus", 0.5, "swap:0.7853981633974483", K::one_crossing, 0.5);
    add("annulus-swap-repelling", "annulus", 2.0, "swap:0.7853981633974483", K::one_crossing,
        0.5);
    add("annulus-reflection", "annulus", 0.5, "reflection", K::one_crossing, 1.7);
    add("annulus-reflection-repelling", "annulus", 3.0, "reflection", K::one_crossing, 0.5);
    add("interval-identity", "interval", 0.5, "identity", K::one_crossing, 1.7);
    add("interval-identity-repelling", "interval", 2.0, "identity", K::one_crossing, 0.4);
    add("interval-swap", "interval", 0.5, "swap", K::one_crossing, 0.5);
    add("solid-torus-meridian-reflection", "solid_torus", 0.5,
        "meridian-reflection:1.0471975511965976", K::one_crossing, 1.7, 0.4, 0.5);
    add("solid-torus-longitude-flip", "solid_torus", 2.0,
        "longitude-reflection:1.0471975511965976", K::no_crossing, 0.0);
    return out;
}

const Scenario& builtin_scenario(const std::string& name) {
    static const std::vector<Scenario> all = builtin_scenarios();
    for (const auto& s : all)
        if (s.name == name) return s;
    throw std::invalid_argument("unknown scenario: " + name);
}

SuiteResult run_suite(const std::vector<Scenario>& scenarios, int jobs) {
    SuiteResult result;
    result.reports.resize(scenarios.size());
    parallel_for(static_cast<int>(scenarios.size()), jobs,
                 [&](int i) { result.reports[i] = verify_identities(scenarios[i]); });
    for (const auto& r : result.reports) result.all_pass = result.all_pass && r.pass;
    return result;
}

namespace {

ordered_json report_json_object(const IdentityReport& rep) {
    ordered_json j;
    j["scenario"] = {{"name", rep.scenario.name},
                     {"model", rep.scenario.model_name},
                     {"resolution", rep.scenario.resolution},
                     {"collar_width", rep.scenario.collar_width},
                     {"c", rep.scenario.c},
                     {"boundary_map", rep.scenario.boundary_map},
                     {"routes", rep.scenario.routes}};
    j["orientation_reversing"] = rep.orientation_reversing;
    j["k0"] = rep.k0;
    j["fixed_points"] = ordered_json::array();
    for (const auto& f : rep.fixed_points) {
        ordered_json e;
        e["location"] = f.location;
        e["kind"] = f.kind;
        e["index"] = f.index;
        if (f.kind == "boundary") {
            e["a_value"] = f.a_value;
            e["classification"] = f.classification;
        }
        j["fixed_points"].push_back(e);
    }
    ordered_json tt;
    tt["exact"] = rep.trace_table.exact;
    tt["absolute"] = rep.trace_table.abs;
    tt["relative"] = rep.trace_table.rel;
    if (rep.trace_table.exact) {
        std::vector<std::string> ae, re;
        for (const auto& r : rep.trace_table.abs_exact) ae.push_back(to_string(r));
        for (const auto& r : rep.trace_table.rel_exact) re.push_back(to_string(r));
        tt["absolute_exact"] = ae;
        tt["relative_exact"] = re;
    }
    j["trace_table"] = tt;
    j["identities"] = ordered_json::array();
    for (const auto& e : rep.identities) {
        ordered_json ide;
        ide["name"] = e.name;
        ide["lhs"] = e.lhs;
        ide["rhs"] = e.rhs;
        ide["residual"] = e.residual;
        ide["verdict"] = e.verdict;
        ide["routes"] = e.routes;
        ide["exact"] = e.exact;
        if (!e.lhs_exact.empty()) {
            ide["lhs_exact"] = e.lhs_exact;
            ide["rhs_exact"] = e.rhs_exact;
        }
        j["identities"].push_back(ide);
    }
    if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
    if (!rep.error.empty()) j["error"] = rep.error;
    j["timings"] = {{"seconds", rep.timing_seconds}};
    j["pass"] = rep.pass;
    return j;
}

}  // namespace

std::string report_to_json(const IdentityReport& report) {
    return report_json_object(report).dump(2) + "\n";
}

std::string suite_to_json(const SuiteResult& result) {
    ordered_json j;
    j["reports"] = ordered_json::array();
    for (const auto& r : result.reports) j["reports"].push_back(report_json_object(r));
    j["all_pass"] = result.all_pass;
    return j.dump(2) + "\n";
}

std::string suite_to_csv(const SuiteResult& result) {
    std::ostringstream os;
    os.precision(17);
    os << "scenario,identity,lhs,rhs,residual,verdict,routes\n";
    for (const auto& rep : result.reports) {
        if (!rep.error.empty()) {
            os << rep.scenario.name << ",<error>,,,," << "fail" << ",\"" << rep.error << "\"\n";
            continue;
        }
        for (const auto& e : rep.identities)
            os << rep.scenario.name << "," << e.name << "," << e.lhs << "," << e.rhs << ","
               << e.residual << "," << e.verdict << "," << e.routes << "\n";
    }
    return os.str();
}

bool validate_report_json(const std::string& json_text, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const std::exception& ex) {
        return fail(std::string("parse error: ") + ex.what());
    }
    auto check_report = [&](const ordered_json& r) -> bool {
        if (!r.contains("scenario") || !r["scenario"].is_object())
            return fail("missing scenario object");
        for (const char* key : {"name", "model", "boundary_map"})
            if (!r["scenario"].contains(key) || !r["scenario"][key].is_string())
                return fail(std::string("scenario.") + key + " must be a string");
        if (!r.contains("k0") || !r["k0"].is_number()) return fail("k0 must be a number");
        if (!r.contains("identities") || !r["identities"].is_array())
            return fail("identities must be an array");
        for (const auto& e : r["identities"]) {
            for (const char* key : {"name", "verdict", "routes"})
                if (!e.contains(key) || !e[key].is_string())
                    return fail(std::string("identity.") + key + " must be a string");
            for (const char* key : {"lhs", "rhs", "residual"})
                if (!e.contains(key) || !e[key].is_number())
                    return fail(std::string("identity.") + key + " must be a number");
            if (e["verdict"] != "pass" && e["verdict"] != "fail")
                return fail("identity.verdict must be pass|fail");
        }
        if (!r.contains("fixed_points") || !r["fixed_points"].is_array())
            return fail("fixed_points must be an array");
        if (!r.contains("pass") || !r["pass"].is_boolean())
            return fail("pass must be a boolean");
        if (!r.contains("timings") || !r["timings"].contains("seconds"))
            return fail("timings.seconds missing");
        return true;
    };
    if (j.contains("reports")) {
        if (!j["reports"].is_array()) return fail("reports must be an array");
        for (const auto& r : j["reports"])
            if (!check_report(r)) return false;
        if (!j.contains("all_pass") || !j["all_pass"].is_boolean())
            return fail("all_pass must be a boolean");
        return true;
    }
    return check_report(j);
}

}  // namespace leflab::harness
