#include <doctest.h>

#include "leflab/models.hpp"
#include "leflab/simplicial.hpp"

using namespace leflab;
using namespace leflab::simplicial;

namespace {

// standard 2-simplex as a toy complex: one triangle
SimplicialComplex triangle() {
    return build_from_top_simplices(3, {{0, 1, 2}}, {1});
}

}  // namespace

TEST_CASE("boundary of boundary vanishes on a triangle") {
    SimplicialComplex sc = triangle();
    auto d2 = sc.boundary_matrix(2);
    auto d1 = sc.boundary_matrix(1);
    CHECK(la::is_zero(la::multiply(d1, d2)));
    CHECK(sc.simplices[1].size() == 3);
    // all edges are boundary for a lone triangle
    for (char b : sc.on_boundary[1]) CHECK(b == 1);
}

TEST_CASE("cochain complexes of the catalog meshes are exact complexes") {
    for (const char* name : {"interval", "disk", "annulus"}) {
        catalog::ModelManifold m = catalog::build_model(name, 8, 0.1);
        for (int q = 0; q + 1 < m.dim; ++q) {
            CHECK(la::is_zero(la::multiply(m.abs_cochain.d[q + 1], m.abs_cochain.d[q])));
            CHECK(la::is_zero(la::multiply(m.rel_cochain.d[q + 1], m.rel_cochain.d[q])));
        }
        for (int q = m.dim; q >= 2; --q)
            CHECK(la::is_zero(
                la::multiply(m.complex.boundary_matrix(q - 1), m.complex.boundary_matrix(q))));
    }
}

TEST_CASE("identity vertex map has betti-number traces") {
    catalog::ModelManifold m = catalog::build_model("annulus", 8, 0.1);
    VertexMap vm;
    vm.image.resize(m.complex.num_vertices);
    for (int v = 0; v < m.complex.num_vertices; ++v) vm.image[v] = v;
    CHECK(vm.is_identity());
    auto habs = cohomology_traces(m.complex, m.abs_cochain, vm);
    auto hrel = cohomology_traces(m.complex, m.rel_cochain, vm);
    CHECK(habs == std::vector<Rat>{rat(1), rat(1), rat(0)});
    CHECK(hrel == std::vector<Rat>{rat(0), rat(1), rat(1)});
}

TEST_CASE("involution route agrees with the general route") {
    catalog::ModelManifold m = catalog::build_model("disk", 8, 0.1);
    // reflection (x, y) -> (x, -y) as a vertex permutation
    VertexMap vm;
    vm.image.resize(m.complex.num_vertices);
    for (int v = 0; v < m.complex.num_vertices; ++v) {
        geo::Vec p = m.vertex_chart[v];
        geo::Vec target(p[0], -p[1]);
        int best = -1;
        double bd = 1e9;
        for (int w = 0; w < m.complex.num_vertices; ++w) {
            double d = m.chart_dist(target, m.vertex_chart[w]);
            if (d < bd) {
                bd = d;
                best = w;
            }
        }
        REQUIRE(bd < 1e-9);
        vm.image[v] = best;
    }
    REQUIRE(vm.is_involution());
    auto validation = validate_vertex_map(m.complex, vm);
    CHECK(validation.simplicial);
    CHECK(validation.boundary_preserving);

    for (const auto* cc : {&m.abs_cochain, &m.rel_cochain}) {
        auto general = cohomology_traces(m.complex, *cc, vm);
        auto fast = cohomology_traces_involution(m.complex, *cc, vm);
        CHECK(general == fast);
    }
}

TEST_CASE("non-simplicial vertex maps are rejected") {
    catalog::ModelManifold m = catalog::build_model("disk", 8, 0.1);
    VertexMap vm;
    vm.image.resize(m.complex.num_vertices);
    for (int v = 0; v < m.complex.num_vertices; ++v) vm.image[v] = v;
    // send one boundary vertex to the far side: image edge will not exist
    int bv = -1;
    for (std::size_t i = 0; i < m.complex.on_boundary[0].size(); ++i)
        if (m.complex.on_boundary[0][i]) bv = static_cast<int>(i);
    REQUIRE(bv >= 0);
    vm.image[bv] = 0;  // the disk center
    auto validation = validate_vertex_map(m.complex, vm);
    CHECK_FALSE((validation.simplicial && validation.boundary_preserving));
}
