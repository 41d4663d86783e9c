// Induced-map traces on absolute and relative cohomology by two independent
// routes: exact rational traces of a shipped simplicial approximation, and
// analytic period/degree computations on the closed-form catalog data.
#pragma once

#include <string>
#include <vector>

#include "leflab/models.hpp"
#include "leflab/selfmap.hpp"
#include "leflab/simplicial.hpp"

namespace leflab::cohomology {

struct TraceTable {
    int dim = 0;
    bool exact = false;
    std::vector<double> abs;        // Tr f* on H^q(M)
    std::vector<double> rel;        // Tr f* on H^q(M, Y)
    std::vector<Rat> abs_exact;     // filled when exact
    std::vector<Rat> rel_exact;
};

struct LefschetzNumbers {
    bool exact = false;
    double l_abs = 0, l_rel = 0, l_p0 = 0, l_p1 = 0;
    Rat e_abs, e_rel, e_p0, e_p1;
};

// The four alternating/mixed sums; asserts L_P0 + L_P1 = L_abs + L_rel.
LefschetzNumbers lefschetz_numbers(const TraceTable& t);

// Exact route. Validates that the vertex map is simplicial and sends the
// boundary subcomplex into itself (throws std::invalid_argument otherwise).
TraceTable induced_trace_simplicial(const catalog::ModelManifold& model,
                                    const simplicial::VertexMap& vmap);

struct AnalyticDiagnostics {
    int degree_retries = 0;         // regular-value retries used
    geo::Vec regular_value;
};

// Analytic route: H^0 by evaluation, H^1 by period integrals over the
// catalog cycles, top relative trace by signed preimage count at a regular
// value (quadrature fallback), remaining relative degrees via duality.
TraceTable induced_trace_analytic(const catalog::ModelManifold& model,
                                  const selfmap::ConditionAMap& map,
                                  AnalyticDiagnostics* diag = nullptr);

// Local degree of the map: signed preimage count at a regular interior value.
int local_degree(const catalog::ModelManifold& model, const selfmap::ConditionAMap& map,
                 AnalyticDiagnostics* diag = nullptr);

// Quadrature fallback for the degree: integral of f^*(top bump) over M.
double degree_by_quadrature(const catalog::ModelManifold& model,
                            const selfmap::ConditionAMap& map);

// The vertex map realizing the boundary-homotopy class of a Condition A map
// on the model's triangulation (rotations are homotopic to the identity,
// reflections/swaps to the mesh symmetry).
simplicial::VertexMap scenario_vertex_map(const catalog::ModelManifold& model,
                                          const selfmap::BoundaryIsometry& b);

}  // namespace leflab::cohomology
