#include <doctest.h>

#include <sstream>

#include "leflab/models.hpp"

using namespace leflab;
using namespace leflab::catalog;

TEST_CASE("catalog lists the required models") {
    auto models = list_models();
    auto has = [&](const char* n) {
        for (const auto& d : models)
            if (d.name == n) return true;
        return false;
    };
    CHECK(has("disk"));
    CHECK(has("interval"));
    CHECK(has("annulus"));
    CHECK(has("solid_torus"));
    CHECK(models.size() >= 4);
    for (const auto& d : models) CHECK(d.dim <= 3);
}

TEST_CASE("interval betti numbers") {
    ModelManifold m = build_model("interval", 16, 0.2);
    CHECK(m.abs_cochain.betti() == std::vector<int>{1, 0});
    CHECK(m.rel_cochain.betti() == std::vector<int>{0, 1});
}

TEST_CASE("disk betti numbers at the default resolution") {
    ModelManifold m = build_model("disk", 32, 0.1);
    CHECK(m.abs_cochain.betti() == std::vector<int>{1, 0, 0});
    CHECK(m.rel_cochain.betti() == std::vector<int>{0, 0, 1});
}

TEST_CASE("annulus betti numbers and duality") {
    ModelManifold m = build_model("annulus", 32, 0.1);
    auto babs = m.abs_cochain.betti();
    auto brel = m.rel_cochain.betti();
    CHECK(babs == std::vector<int>{1, 1, 0});
    CHECK(brel == std::vector<int>{0, 1, 1});
    for (int q = 0; q <= 2; ++q) CHECK(brel[q] == babs[2 - q]);
}

TEST_CASE("boundary manifolds") {
    ModelManifold disk = build_model("disk", 8, 0.1);
    BoundaryManifold by = boundary_of(disk);
    CHECK(by.kind == BoundaryManifold::Kind::circles);
    CHECK(by.num_components == 1);
    CHECK(by.circumference == doctest::Approx(2 * 3.14159265358979));

    ModelManifold interval = build_model("interval", 8, 0.2);
    CHECK(boundary_of(interval).num_components == 2);

    ModelManifold annulus = build_model("annulus", 8, 0.1);
    BoundaryManifold ay = boundary_of(annulus);
    CHECK(ay.orientation[0] * ay.orientation[1] == -1);
    CHECK(ay.total_harmonic_dim() % 2 == 0);
}

TEST_CASE("full validation of every catalog model") {
    for (const char* name : {"interval", "disk", "annulus", "interval_long"}) {
        ModelManifold m = build_model(name);
        ValidationReport rep = validate_model(m);
        for (const auto& f : rep.failures) MESSAGE(name, ": ", f);
        CHECK(rep.ok);
    }
    // solid torus at a lighter resolution keeps the exact ranks quick
    ModelManifold st = build_model("solid_torus", 6, 0.1);
    ValidationReport rep = validate_model(st);
    for (const auto& f : rep.failures) MESSAGE("solid_torus: ", f);
    CHECK(rep.ok);
}

TEST_CASE("solid torus betti numbers") {
    ModelManifold m = build_model("solid_torus", 6, 0.1);
    CHECK(m.abs_cochain.betti() == std::vector<int>{1, 1, 0, 0});
    CHECK(m.rel_cochain.betti() == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("build errors") {
    CHECK_THROWS_AS(build_model("klein_bottle", 8, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(build_model("disk", 2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(build_model("disk", 32, 0.9), std::invalid_argument);
}

TEST_CASE("serialization and OFF export") {
    ModelManifold m = build_model("disk", 8, 0.1);
    std::string entry = serialize_catalog_entry(m);
    CHECK(entry.find("model disk") != std::string::npos);
    CHECK(entry.find("betti_rel 0,0,1") != std::string::npos);
    std::string off = export_off(m);
    CHECK(off.substr(0, 3) == "OFF");
    std::istringstream is(off);
    std::string header;
    int nv, nf, ne;
    is >> header >> nv >> nf >> ne;
    CHECK(nv == m.complex.num_vertices);
    CHECK(nf == static_cast<int>(m.complex.simplices[2].size()));
}
