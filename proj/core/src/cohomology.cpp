#include "leflab/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leflab/numerics.hpp"

namespace leflab::cohomology {

using catalog::ModelKind;
using selfmap::BoundaryIsometry;

namespace {

constexpr double kTwoPi = 2.0 * num::kPi;

}  // namespace

LefschetzNumbers lefschetz_numbers(const TraceTable& t) {
    LefschetzNumbers out;
    out.exact = t.exact;
    for (int q = 0; q <= t.dim; ++q) {
        double sgn = q % 2 == 0 ? 1.0 : -1.0;
        out.l_abs += sgn * t.abs[q];
        out.l_rel += sgn * t.rel[q];
        if (q % 2 == 0) {
            out.l_p0 += t.rel[q];
            out.l_p1 += t.abs[q];
        } else {
            out.l_p0 -= t.abs[q];
            out.l_p1 -= t.rel[q];
        }
    }
    if (t.exact) {
        out.e_abs = out.e_rel = out.e_p0 = out.e_p1 = Rat(0);
        for (int q = 0; q <= t.dim; ++q) {
            Rat sgn = rat(q % 2 == 0 ? 1 : -1);
            out.e_abs += sgn * t.abs_exact[q];
            out.e_rel += sgn * t.rel_exact[q];
            if (q % 2 == 0) {
                out.e_p0 += t.rel_exact[q];
                out.e_p1 += t.abs_exact[q];
            } else {
                out.e_p0 -= t.abs_exact[q];
                out.e_p1 -= t.rel_exact[q];
            }
        }
        if (out.e_p0 + out.e_p1 != out.e_abs + out.e_rel)
            throw std::logic_error("L_P0 + L_P1 != L_abs + L_rel");
    } else if (std::abs(out.l_p0 + out.l_p1 - out.l_abs - out.l_rel) > 1e-9) {
        throw std::logic_error("L_P0 + L_P1 != L_abs + L_rel (float route)");
    }
    return out;
}

TraceTable induced_trace_simplicial(const catalog::ModelManifold& model,
                                    const simplicial::VertexMap& vmap) {
    auto validation = simplicial::validate_vertex_map(model.complex, vmap);
    if (!validation.simplicial)
        throw std::invalid_argument("simplicial trace: " + validation.detail);
    if (!validation.boundary_preserving)
        throw std::invalid_argument("simplicial trace: " + validation.detail);

    TraceTable t;
    t.dim = model.dim;
    t.exact = true;
    // the involution fast path pays off on the 3D meshes
    bool use_involution = vmap.is_involution() && !vmap.is_identity() && model.dim == 3;
    auto run = [&](const simplicial::CochainComplex& cc) {
        if (vmap.is_identity()) {
            std::vector<Rat> h;
            for (int b : cc.betti()) h.push_back(rat(b));
            return h;
        }
        if (use_involution)
            return simplicial::cohomology_traces_involution(model.complex, cc, vmap);
        return simplicial::cohomology_traces(model.complex, cc, vmap);
    };
    t.abs_exact = run(model.abs_cochain);
    t.rel_exact = run(model.rel_cochain);
    for (int q = 0; q <= t.dim; ++q) {
        t.abs.push_back(to_double(t.abs_exact[q]));
        t.rel.push_back(to_double(t.rel_exact[q]));
    }
    return t;
}

namespace {

// preimages of w under the map, by multi-start Newton on f(p) - w
std::vector<geo::Vec> preimages(const catalog::ModelManifold& model,
                                const selfmap::ConditionAMap& map, const geo::Vec& w) {
    const int m = model.dim;
    std::vector<geo::Vec> seeds;
    const int n = 24;
    switch (model.kind) {
        case ModelKind::interval:
            for (int i = 0; i <= n; ++i) seeds.push_back(geo::Vec(model.length * i / n));
            break;
        case ModelKind::disk:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    seeds.push_back(geo::Vec(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n));
            break;
        case ModelKind::annulus:
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j < n; ++j)
                    seeds.push_back(geo::Vec(1.0 * i / n, kTwoPi * j / n));
            break;
        case ModelKind::solid_torus:
            for (int i = 0; i <= 12; ++i)
                for (int j = 0; j <= 12; ++j)
                    for (int k = 0; k < 12; ++k)
                        seeds.push_back(
                            geo::Vec(-1.0 + 2.0 * i / 12, -1.0 + 2.0 * j / 12, kTwoPi * k / 12));
            break;
    }
    std::vector<geo::Vec> found;
    for (auto p : seeds) {
        if (!model.in_domain(p, 1e-9)) continue;
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            geo::Vec d = map.apply(p) - w;
            if (model.kind == ModelKind::annulus) d.v[1] = num::wrap_angle(d[1]);
            if (model.kind == ModelKind::solid_torus) d.v[2] = num::wrap_angle(d[2]);
            if (geo::norm(d) < 1e-12) {
                ok = true;
                break;
            }
            geo::Mat j = map.jacobian(p);
            geo::Vec step;
            try {
                step = geo::solve(j, d);
            } catch (const std::runtime_error&) {
                break;
            }
            p = p - step;
            if (!model.in_domain(p, 0.1)) break;
            if (model.kind == ModelKind::annulus) p.v[1] = num::wrap_angle(p[1]);
            if (model.kind == ModelKind::solid_torus) p.v[2] = num::wrap_angle(p[2]);
        }
        if (!ok || !model.in_domain(p, 1e-9)) continue;
        bool dup = false;
        for (const auto& q : found) dup = dup || model.chart_dist(p, q) < 1e-6;
        if (!dup) found.push_back(p);
    }
    std::sort(found.begin(), found.end(), [](const geo::Vec& a, const geo::Vec& b) {
        for (int i = 0; i < a.dim; ++i) {
            if (a[i] < b[i] - 1e-12) return true;
            if (a[i] > b[i] + 1e-12) return false;
        }
        return false;
    });
    (void)m;
    return found;
}

geo::Vec regular_value_candidate(const catalog::ModelManifold& model, int attempt) {
    double j = 0.13 * attempt;
    switch (model.kind) {
        case ModelKind::interval: return geo::Vec(model.length * (0.43 + 0.05 * j));
        case ModelKind::disk: return geo::Vec(0.21 + 0.07 * j, 0.13 - 0.03 * j);
        case ModelKind::annulus: return geo::Vec(0.47 + 0.02 * j, 0.9 + 0.4 * j);
        case ModelKind::solid_torus: return geo::Vec(0.18 + 0.05 * j, 0.11, 1.1 + 0.3 * j);
    }
    return geo::Vec();
}

}  // namespace

int local_degree(const catalog::ModelManifold& model, const selfmap::ConditionAMap& map,
                 AnalyticDiagnostics* diag) {
    for (int attempt = 0; attempt < 10; ++attempt) {
        geo::Vec w = regular_value_candidate(model, attempt);
        auto pre = preimages(model, map, w);
        bool regular = true;
        int deg = 0;
        for (const auto& p : pre) {
            double d = geo::det(map.jacobian(p));
            if (std::abs(d) < 1e-8) {
                regular = false;
                break;
            }
            deg += d > 0 ? 1 : -1;
        }
        if (regular) {
            if (diag) {
                diag->degree_retries = attempt;
                diag->regular_value = w;
            }
            return deg;
        }
    }
    throw std::runtime_error("local_degree: no regular value found after 10 retries");
}

double degree_by_quadrature(const catalog::ModelManifold& model,
                            const selfmap::ConditionAMap& map) {
    // integral over M of f^*(top bump): the bump's top-form coefficient
    // evaluated at f(p), times det df(p)
    const catalog::Generator* bump = nullptr;
    for (const auto& g : model.rel_generators)
        if (g.kind == "top_bump") bump = &g;
    if (!bump) throw std::logic_error("catalog model lacks a top bump generator");
    auto integrand = [&](const geo::Vec& p) {
        geo::Vec fp = map.apply(p);
        double b = model.eval_generator(*bump, fp)[0];
        if (b == 0.0) return 0.0;
        return b * geo::det(map.jacobian(p));
    };
    switch (model.kind) {
        case ModelKind::interval:
            return num::integrate_gl([&](double x) { return integrand(geo::Vec(x)); }, 0.0,
                                     model.length, 256);
        case ModelKind::disk:
            return num::integrate_gl(
                [&](double x) {
                    return num::integrate_gl(
                        [&](double y) {
                            return x * x + y * y <= 1.0 ? integrand(geo::Vec(x, y)) : 0.0;
                        },
                        -1.0, 1.0, 220);
                },
                -1.0, 1.0, 220);
        case ModelKind::annulus:
            return num::integrate_gl(
                [&](double s) {
                    double inner = 0.0;
                    const int nt = 128;
                    for (int i = 0; i < nt; ++i)
                        inner += integrand(geo::Vec(s, kTwoPi * i / nt)) * kTwoPi / nt;
                    return inner;
                },
                0.0, 1.0, 220);
        case ModelKind::solid_torus: {
            double total = 0.0;
            const int np = 64;
            for (int k = 0; k < np; ++k) {
                double phi = kTwoPi * k / np;
                total += kTwoPi / np *
                         num::integrate_gl(
                             [&](double x) {
                                 return num::integrate_gl(
                                     [&](double y) {
                                         return x * x + y * y <= 1.0
                                                    ? integrand(geo::Vec(x, y, phi))
                                                    : 0.0;
                                     },
                                     -1.0, 1.0, 96);
                             },
                             -1.0, 1.0, 96);
            }
            return total;
        }
    }
    return 0.0;
}

TraceTable induced_trace_analytic(const catalog::ModelManifold& model,
                                  const selfmap::ConditionAMap& map,
                                  AnalyticDiagnostics* diag) {
    TraceTable t;
    t.dim = model.dim;
    t.exact = false;
    t.abs.assign(model.dim + 1, 0.0);
    t.rel.assign(model.dim + 1, 0.0);

    // absolute degree 0: pullback of the constant generator is the constant
    t.abs[0] = 1.0;

    // absolute degree 1: period of the pulled-back angle form over the core loop
    if (model.betti_abs_declared.size() > 1 && model.betti_abs_declared[1] == 1) {
        const int N = 2048;
        double acc = 0.0;
        double prev = 0.0;
        for (int i = 0; i <= N; ++i) {
            double tpar = kTwoPi * i / N;
            geo::Vec gamma = model.kind == ModelKind::annulus ? geo::Vec(0.5, tpar)
                                                              : geo::Vec(0.0, 0.0, tpar);
            geo::Vec img = map.apply(gamma);
            double ang = model.kind == ModelKind::annulus ? img[1] : img[2];
            if (i > 0) acc += num::wrap_angle(ang - prev);
            prev = ang;
        }
        double period = acc / kTwoPi;
        auto [nearest, dist] = num::nearest_integer(period);
        if (dist > 1e-6)
            throw std::runtime_error("analytic H^1 period is not an integer: " +
                                     std::to_string(period));
        t.abs[1] = period;
    }

    // top relative trace: the local degree
    int deg = local_degree(model, map, diag);
    t.rel[model.dim] = deg;

    // remaining relative degrees via the duality pairing with the absolute row
    for (int q = 1; q < model.dim; ++q) {
        if (model.betti_rel_declared[q] != 1) continue;
        double tabs = t.abs[model.dim - q];
        if (std::abs(tabs) < 0.5)
            throw std::runtime_error("duality route needs a nonzero absolute trace");
        t.rel[q] = deg / tabs;
    }
    return t;
}

simplicial::VertexMap scenario_vertex_map(const catalog::ModelManifold& model,
                                          const BoundaryIsometry& b) {
    // chart transform of the homotopy-class representative
    auto transform = [&](const geo::Vec& p) -> geo::Vec {
        switch (b.type) {
            case BoundaryIsometry::Type::interval_identity: return p;
            case BoundaryIsometry::Type::interval_swap: return geo::Vec(model.length - p[0]);
            case BoundaryIsometry::Type::rotation:
            case BoundaryIsometry::Type::torus_rotation:
                return p;  // homotopic to the identity through rotations
            case BoundaryIsometry::Type::reflection:
                if (model.kind == ModelKind::disk) return geo::Vec(p[0], -p[1]);
                return geo::Vec(p[0], num::wrap_angle(-p[1]));
            case BoundaryIsometry::Type::swap_rotation:
                return geo::Vec(1.0 - p[0], p[1]);
            case BoundaryIsometry::Type::meridian_reflection:
                return geo::Vec(p[0], -p[1], p[2]);
            case BoundaryIsometry::Type::longitude_reflection:
                return geo::Vec(p[0], p[1], num::wrap_angle(-p[2]));
        }
        return p;
    };
    const auto& sc = model.complex;
    simplicial::VertexMap vm;
    vm.image.resize(sc.num_vertices);
    for (int v = 0; v < sc.num_vertices; ++v) {
        geo::Vec target = transform(model.vertex_chart[v]);
        int best = -1;
        double bd = 1e30;
        for (int w = 0; w < sc.num_vertices; ++w) {
            double d = model.chart_dist(target, model.vertex_chart[w]);
            if (d < bd) {
                bd = d;
                best = w;
            }
        }
        if (bd > 1e-8)
            throw std::runtime_error("scenario vertex map: mesh is not symmetric under the map");
        vm.image[v] = best;
    }
    return vm;
}

}  // namespace leflab::cohomology
