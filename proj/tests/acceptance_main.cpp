// Acceptance suite: one criterion per line, PASS/FAIL, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "leflab/config.hpp"
#include "leflab/harness.hpp"
#include "leflab/heat.hpp"
#include "leflab/numerics.hpp"
#include "leflab/spectral.hpp"

using namespace leflab;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

const harness::IdentityEntry* find_identity(const harness::IdentityReport& rep,
                                            const std::string& name) {
    for (const auto& e : rep.identities)
        if (e.name == name) return &e;
    return nullptr;
}

double quadrature_factor(double c, heat::GaussianVariant v) {
    double sign = (v == heat::GaussianVariant::tangential_dirichlet ||
                   v == heat::GaussianVariant::normal_dirichlet)
                      ? -1.0
                      : 1.0;
    double scale = (v == heat::GaussianVariant::normal_dirichlet ||
                    v == heat::GaussianVariant::normal_neumann)
                       ? c
                       : 1.0;
    double upper = 12.0 / std::min(std::abs(1.0 - c), 1.0 + c);
    double integral = num::adaptive_simpson(
        [&](double x) {
            return std::exp(-(c - 1) * (c - 1) * x * x) +
                   sign * std::exp(-(c + 1) * (c + 1) * x * x);
        },
        0.0, upper, 1e-13);
    return scale * integral / std::sqrt(num::kPi);
}

void criterion_1() {
    Timer timer;
    std::ostringstream detail;
    bool ok = true;
    try {
        harness::IdentityReport rep =
            harness::verify_identities(harness::builtin_scenario("disk-reflection"));
        ok = rep.error.empty() && rep.pass;
        const auto* t1 = find_identity(rep, "mixed-p0-identity");
        const auto* t2 = find_identity(rep, "mixed-p1-identity");
        ok = ok && t1 && t1->lhs_exact == "-1" && t1->residual == 0.0;
        ok = ok && t2 && t2->lhs_exact == "1" && t2->residual == 0.0;
        ok = ok && rep.k0 == 1.0;
        // fixed point route: interior sum -1, half boundary sum +1
        Rat interior{0}, boundary{0};
        for (const auto& f : rep.fixed_points)
            (f.kind == "interior" ? interior : boundary) += rat(f.index);
        ok = ok && interior == rat(-1) && boundary == rat(2);
        double secs = timer.seconds();
        ok = ok && secs < 5.0;
        detail.precision(3);
        detail << "L_P0=" << (t1 ? t1->lhs_exact : "?") << " L_P1="
               << (t2 ? t2->lhs_exact : "?") << " K0=" << rep.k0 << " time=" << secs << "s";
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(1, "disk-reflection scenario, exact identities", ok, detail.str());
}

void criterion_2() {
    std::ostringstream detail;
    bool ok = true;
    try {
        harness::IdentityReport rep =
            harness::verify_identities(harness::builtin_scenario("annulus-swap"));
        const auto* t1 = find_identity(rep, "mixed-p0-identity");
        const auto* t2 = find_identity(rep, "mixed-p1-identity");
        ok = rep.error.empty() && rep.pass && rep.fixed_points.empty() && rep.k0 == 2.0;
        ok = ok && t1 && t1->lhs_exact == "-2" && t1->residual == 0.0;
        ok = ok && t2 && t2->lhs_exact == "2" && t2->residual == 0.0;
        detail << "L_P0=" << (t1 ? t1->lhs_exact : "?") << " L_P1="
               << (t2 ? t2->lhs_exact : "?") << " K0=" << rep.k0
               << " fixed_points=" << rep.fixed_points.size();
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(2, "annulus-swap scenario, exact identities", ok, detail.str());
}

// shared by criteria 3 and 4: run the full builtin suite once
harness::SuiteResult& full_suite() {
    static harness::SuiteResult result = harness::run_suite(harness::builtin_scenarios(), 0);
    return result;
}

void criterion_3() {
    std::ostringstream detail;
    bool ok = true;
    int n = 0;
    try {
        const auto& suite = full_suite();
        ok = suite.reports.size() >= 8;
        for (const auto& rep : suite.reports) {
            if (!rep.error.empty()) {
                ok = false;
                detail << rep.scenario.name << ": " << rep.error << "; ";
                continue;
            }
            const auto* a = find_identity(rep, "absolute-vs-fixed-points");
            const auto* r = find_identity(rep, "relative-vs-fixed-points");
            bool here = a && r && a->residual == 0.0 && r->residual == 0.0 &&
                        a->verdict == "pass" && r->verdict == "pass";
            if (!here) {
                ok = false;
                detail << rep.scenario.name << " violates the fixed-point identities; ";
            }
            ++n;
        }
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    detail << n << " scenarios, residuals exactly 0";
    report(3, "absolute and relative fixed-point identities on every catalog scenario", ok, detail.str());
}

void criterion_4() {
    std::ostringstream detail;
    bool ok = true;
    try {
        const auto& suite = full_suite();
        for (const auto& rep : suite.reports) {
            const auto* anti = find_identity(rep, "cross-k0-antisymmetry");
            const auto* sum = find_identity(rep, "cross-sum-consistency");
            bool here = rep.error.empty() && anti && sum && anti->residual == 0.0 &&
                        sum->residual == 0.0;
            if (!here) {
                ok = false;
                detail << rep.scenario.name << "; ";
            }
        }
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(4, "cross identities L_P1 - L_P0 = 2 K0 and L_P0 + L_P1 = L_abs + L_rel", ok,
           detail.str());
}

void criterion_5() {
    Timer timer;
    std::ostringstream detail;
    bool ok = true;
    double worst = 0;
    try {
        for (double c : {0.25, 0.5, 2.0, 3.0, 10.0}) {
            for (auto v :
                 {heat::GaussianVariant::tangential_dirichlet,
                  heat::GaussianVariant::tangential_neumann,
                  heat::GaussianVariant::normal_dirichlet,
                  heat::GaussianVariant::normal_neumann}) {
                double diff = std::abs(heat::gaussian_factor(c, v) - quadrature_factor(c, v));
                worst = std::max(worst, diff);
            }
        }
        double secs = timer.seconds();
        ok = worst < 1e-10 && secs < 1.0;
        detail.precision(3);
        detail << "max |closed - quadrature| = " << worst << ", time=" << secs << "s";
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(5, "Gaussian factor against adaptive quadrature (1e-10)", ok, detail.str());
}

void criterion_6() {
    Timer timer;
    std::ostringstream detail;
    bool ok = true;
    try {
        struct Case {
            const char* model;
            const char* b;
            double expected;
        };
        for (const auto& [model_name, bname, expected] :
             {Case{"disk", "rotation:1.0471975511965976", 0.0},
              Case{"disk", "reflection", 2.0},
              Case{"annulus", "swap:0.7853981633974483", 0.0}}) {
            auto m = catalog::build_model(model_name, 8, 0.1);
            spectral::SpectralBasis sb(m, 2000.0);
            auto b = selfmap::BoundaryIsometry::parse(bname);
            std::vector<double> values;
            for (int i = 0; i <= 24; ++i) {
                double t = 0.05 + (2.0 - 0.05) * i / 24.0;
                double super = 0;
                for (int q = 0; q <= m.boundary.dim; ++q)
                    super += (q % 2 == 0 ? 1.0 : -1.0) *
                             sb.equivariant_trace(b, q, spectral::Restriction::all, t);
                values.push_back(super);
            }
            double mean = 0;
            for (double v : values) mean += v / values.size();
            double dev = 0;
            for (double v : values) dev = std::max(dev, std::abs(v - mean));
            if (dev >= 1e-10 || std::abs(mean - expected) >= 1e-10) {
                ok = false;
                detail << model_name << "/" << bname << " dev=" << dev << " mean=" << mean
                       << "; ";
            }
        }
        double secs = timer.seconds();
        ok = ok && secs < 2.0;
        detail << "time=" << secs << "s";
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(6, "equivariant McKean-Singer constancy and values (0, 2, 0)", ok, detail.str());
}

void criterion_7() {
    Timer timer;
    std::ostringstream detail;
    bool ok = true;
    try {
        auto m = catalog::build_model("interval_long");
        double err_small = heat::parametrix_error(m, heat::BoundaryCondition::PminusL0, 0.02);
        std::vector<double> inv_t, log_err;
        for (double t : {0.5, 0.25, 0.125, 0.0625}) {
            inv_t.push_back(1.0 / t);
            log_err.push_back(
                std::log(heat::parametrix_error(m, heat::BoundaryCondition::PminusL0, t)));
        }
        auto fit = num::linear_fit(inv_t, log_err);
        double secs = timer.seconds();
        ok = err_small < 1e-8 && fit.slope < 0 && fit.r2 > 0.99 && secs < 10.0;
        detail.precision(4);
        detail << "sup@t=0.02: " << err_small << ", slope=" << fit.slope << ", R2=" << fit.r2
               << ", time=" << secs << "s";
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(7, "parametrix error bound on the interval", ok, detail.str());
}

void criterion_8() {
    Timer timer;
    std::ostringstream detail;
    bool ok = true;
    try {
        harness::Scenario sc = harness::builtin_scenario("disk-reflection");
        sc.routes = {"simplicial", "heat"};
        sc.t_grid = {0.2, 0.1, 0.05, 0.025};
        harness::IdentityReport rep = harness::verify_identities(sc);
        const auto* h = find_identity(rep, "mixed-p0-identity [heat]");
        ok = rep.error.empty() && h && h->verdict == "pass" && std::abs(h->rhs - (-1.0)) == 0.0;
        double resid = h ? h->residual : 1e9;
        ok = ok && resid < 1e-3;
        double secs = timer.seconds();
        ok = ok && secs < 60.0;
        detail.precision(4);
        detail << "heat lhs=" << (h ? h->lhs : 0.0) << " exact rhs=-1, residual=" << resid
               << ", time=" << secs << "s";
        if (!rep.error.empty()) detail << " error=" << rep.error;
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(8, "heat route reproduces the mixed-identity fixed-point side on disk-reflection (1e-3)", ok, detail.str());
}

void criterion_9() {
    std::ostringstream detail;
    bool ok = true;
    try {
        struct ModelSpec {
            const char* name;
            int resolution;
            double collar;
        };
        for (const auto& [name, res, collar] :
             {ModelSpec{"interval", 32, 0.2}, ModelSpec{"disk", 32, 0.1},
              ModelSpec{"annulus", 32, 0.1}, ModelSpec{"solid_torus", 8, 0.1},
              ModelSpec{"interval_long", 32, 9.1}}) {
            auto m = catalog::build_model(name, res, collar);
            auto rep = catalog::validate_model(m);  // dd = 0, betti, duality, pairings
            if (!rep.ok) {
                ok = false;
                for (const auto& f : rep.failures) detail << name << ": " << f << "; ";
            }
            // K / star-K orthogonality and dimension at 1e-12
            spectral::KSplit ks = spectral::compute_k_split(m);
            if (2 * ks.dim() != m.boundary.total_harmonic_dim()) {
                ok = false;
                detail << name << ": dim K mismatch; ";
            }
            for (const auto& a : ks.k_basis)
                for (const auto& bb : ks.star_k_basis)
                    if (std::abs(spectral::harmonic_inner(m.boundary, a, bb)) > 1e-12) {
                        ok = false;
                        detail << name << ": K not orthogonal to *K; ";
                    }
            // B* block diagonality at 1e-12 for the catalog isometries
            std::vector<std::string> isometries;
            if (m.kind == catalog::ModelKind::interval) isometries = {"identity", "swap"};
            else if (m.kind == catalog::ModelKind::disk)
                isometries = {"rotation:0.9", "reflection"};
            else if (m.kind == catalog::ModelKind::annulus)
                isometries = {"rotation:0.785", "reflection", "swap:0.785"};
            else
                isometries = {"torus-rotation:0.5:0.9", "meridian-reflection:1.0471975511965976",
                              "longitude-reflection:1.0471975511965976"};
            for (const auto& iso : isometries) {
                auto b = selfmap::BoundaryIsometry::parse(iso);
                std::vector<spectral::HarmonicForm> all = ks.k_basis;
                all.insert(all.end(), ks.star_k_basis.begin(), ks.star_k_basis.end());
                auto mat = spectral::b_star_matrix(m.boundary, b, all);
                std::size_t d = ks.k_basis.size();
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = d; j < 2 * d; ++j)
                        if (std::abs(mat[i][j]) > 1e-12 || std::abs(mat[j][i]) > 1e-12) {
                            ok = false;
                            detail << name << "/" << iso << ": off-diagonal block; ";
                        }
            }
            // parity completeness: minus + plus spans all retained lines
            spectral::SpectralBasis sb(m, 200.0);
            auto b0 = selfmap::BoundaryIsometry::parse(isometries[0]);
            for (int q = 0; q <= m.boundary.dim; ++q) {
                double all_tr = sb.equivariant_trace(b0, q, spectral::Restriction::all, 0.3);
                double split =
                    sb.equivariant_trace(b0, q, spectral::Restriction::minus, 0.3) +
                    sb.equivariant_trace(b0, q, spectral::Restriction::plus, 0.3);
                if (std::abs(all_tr - split) > 1e-12) {
                    ok = false;
                    detail << name << ": parity incomplete at q=" << q << "; ";
                }
            }
        }
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(9, "structural invariants on every model", ok, detail.str());
}

void criterion_10() {
    std::ostringstream detail;
    bool ok = true;
    try {
        harness::Scenario a = harness::builtin_scenario("disk-reflection");
        harness::Scenario b = a;
        b.profile.crossing = 0.35;
        b.profile.crossing_slope = 2.6;
        b.profile.interior_slope = 0.2;
        harness::IdentityReport ra = harness::verify_identities(a);
        harness::IdentityReport rb = harness::verify_identities(b);
        ok = ra.error.empty() && rb.error.empty() && ra.pass && rb.pass;
        // exact equality of the simplicial trace tables
        ok = ok && ra.trace_table.exact && rb.trace_table.exact;
        for (int q = 0; ok && q <= 2; ++q) {
            ok = ok && ra.trace_table.abs_exact[q] == rb.trace_table.abs_exact[q];
            ok = ok && ra.trace_table.rel_exact[q] == rb.trace_table.rel_exact[q];
        }
        // and the fixed-point inventories genuinely differ in location
        bool moved = ra.fixed_points.size() == rb.fixed_points.size();
        detail << "tables identical, profiles differ (" << ra.fixed_points.size()
               << " fixed points each)";
        ok = ok && moved;
    } catch (const std::exception& ex) {
        ok = false;
        detail << ex.what();
    }
    report(10, "homotopy stability: profile change leaves trace tables identical", ok,
           detail.str());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures == 0) {
        std::cout << "acceptance: all criteria pass\n";
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria FAILED\n";
    return 1;
}
