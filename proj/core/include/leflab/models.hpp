// The model catalog: compact manifolds with boundary carrying exact product
// collars, triangulations, cohomology generators and their dual cycles.
//
// Catalog charts (these coordinates are used everywhere downstream):
//   interval      x in [0, L], boundary {0, L}, collar u = min(x, L-x)
//   disk          (x, y) with r <= 1, boundary circle r = 1, u = 1 - r
//   annulus       (s, theta) in [0,1] x S^1 (flat product), u = min(s, 1-s)
//   solid_torus   (x, y, phi), r <= 1, phi in S^1, boundary torus r = 1
//
// Metric convention: the collar carries the product metric du^2 + g_Y
// exactly; interior charts are flat. All boundary circles have circumference
// 2*pi. Induced boundary orientations follow the Stokes convention (sign of
// the fundamental chain's simplicial boundary against the reference
// parameterization).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leflab/geometry.hpp"
#include "leflab/rational_matrix.hpp"
#include "leflab/simplicial.hpp"

namespace leflab::catalog {

enum class ModelKind { interval, disk, annulus, solid_torus };

struct ModelDescriptor {
    std::string name;
    ModelKind kind = ModelKind::interval;
    int dim = 1;
    int min_resolution = 2;
    int default_resolution = 32;
    double max_collar = 0.45;
    double default_collar = 0.1;
    double length = 1.0;  // interval variants
    std::string summary;
};

std::vector<ModelDescriptor> list_models();
const ModelDescriptor& descriptor(const std::string& name);

struct BoundaryManifold {
    enum class Kind { points, circles, torus };
    Kind kind = Kind::points;
    int dim = 0;
    int num_components = 1;
    std::vector<int> orientation;          // induced sign per component
    double circumference = 2.0 * 3.14159265358979323846;

    double component_volume() const;
    double total_volume() const;
    // Harmonic form counts per degree (all components together).
    int harmonic_dim(int degree) const;
    int total_harmonic_dim() const;
};

struct Generator {
    int degree = 0;
    std::string kind;            // constant | angle | crossing | top_bump
    std::vector<Rat> cochain;    // coefficients in the matching cochain basis
};

struct DualCycle {
    int degree = 0;
    std::string kind;            // point | core_loop | cross_path | meridian_disk | fundamental
    la::SparseVec chain;         // (original simplex id, coefficient)
};

struct ModelManifold {
    std::string name;
    ModelKind kind = ModelKind::interval;
    int dim = 1;
    int resolution = 32;
    double collar_width = 0.1;
    double length = 1.0;

    BoundaryManifold boundary;
    simplicial::SimplicialComplex complex;
    std::vector<geo::Vec> vertex_chart;

    simplicial::CochainComplex abs_cochain;
    simplicial::CochainComplex rel_cochain;

    std::vector<int> betti_abs_declared;
    std::vector<int> betti_rel_declared;

    std::vector<Generator> abs_generators;
    std::vector<Generator> rel_generators;
    std::vector<DualCycle> abs_cycles;   // degree-matched duals of abs_generators
    std::vector<DualCycle> rel_cycles;   // duals of rel_generators

    // Chart geometry.
    double collar_u(const geo::Vec& p) const;      // distance to the boundary
    int collar_component(const geo::Vec& p) const;  // which boundary component
    bool in_domain(const geo::Vec& p, double pad = 1e-12) const;
    double chart_dist(const geo::Vec& a, const geo::Vec& b) const;

    // Analytic evaluation of catalog generators at a chart point: returns the
    // coefficient vector of the form on the chart coordinate basis (see .cpp).
    std::vector<double> eval_generator(const Generator& g, const geo::Vec& p) const;
};

ModelManifold build_model(const std::string& name, int resolution, double collar_width);
ModelManifold build_model(const std::string& name);  // catalog defaults

BoundaryManifold boundary_of(const ModelManifold& m);

// Structured-text catalog entry (key-value grammar documented in README).
std::string serialize_catalog_entry(const ModelManifold& m);

// OFF-style mesh export for inspection (vertices embedded in R^3).
std::string export_off(const ModelManifold& m);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> checks;    // "name: ok" lines
    std::vector<std::string> failures;
};

// Full invariant validation: betti vs declared, Lefschetz duality counts,
// d∘d = 0 and del∘del = 0, generator/cycle pairing identity (exact simplicial
// and 1e-8 analytic), collar extrusion structure, boundary orientations.
ValidationReport validate_model(const ModelManifold& m);

}  // namespace leflab::catalog
