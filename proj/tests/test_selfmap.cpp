#include <doctest.h>

#include <cmath>

#include "leflab/numerics.hpp"
#include "leflab/selfmap.hpp"

using namespace leflab;
using namespace leflab::selfmap;

namespace {

ProfileSpec one_crossing(double slope = 1.7, double at = 0.5, double k = 0.4) {
    ProfileSpec s;
    s.kind = ProfileSpec::Kind::one_crossing;
    s.crossing_slope = slope;
    s.crossing = at;
    s.interior_slope = k;
    return s;
}

ProfileSpec no_crossing(double k = 0.4) {
    ProfileSpec s;
    s.kind = ProfileSpec::Kind::no_crossing;
    s.interior_slope = k;
    return s;
}

// independent oracle: count sign changes of f(x) - x over a dense 1-D grid
int bisection_root_count(const ConditionAMap& map, double lo, double hi) {
    const int N = 20000;
    int count = 0;
    double prev = map.apply(geo::Vec(lo))[0] - lo;
    for (int i = 1; i <= N; ++i) {
        double x = lo + (hi - lo) * i / N;
        double d = map.apply(geo::Vec(x))[0] - x;
        if ((prev < 0 && d > 0) || (prev > 0 && d < 0)) ++count;
        if (d != 0) prev = d;
    }
    return count;
}

}  // namespace

TEST_CASE("construction rejects degenerate parameters") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    BoundaryIsometry rot = BoundaryIsometry::parse("rotation:1.0471975511965976");
    CHECK_THROWS_WITH_AS(make_condition_a_map(disk, 1.0, rot, one_crossing()),
                         "c must differ from 1", std::invalid_argument);
    CHECK_THROWS_AS(make_condition_a_map(disk, -0.5, rot, one_crossing()),
                    std::invalid_argument);
    BoundaryIsometry swap = BoundaryIsometry::parse("swap:0.5");
    CHECK_THROWS_AS(make_condition_a_map(disk, 0.5, swap, one_crossing()),
                    std::invalid_argument);
}

TEST_CASE("condition A holds exactly on the collar") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto map = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                    one_crossing(1.7, 0.55));
    auto check = verify_condition_a(map, 1000);
    CHECK(check.pass);
    CHECK(check.worst_residual < 1e-12);

    auto annulus = catalog::build_model("annulus", 16, 0.1);
    auto swap_map = make_condition_a_map(annulus, 0.5, BoundaryIsometry::parse("swap:0.7853"),
                                         one_crossing(0.5));
    CHECK(verify_condition_a(swap_map, 1000).pass);
}

TEST_CASE("B isometry check on sampled boundary pairs") {
    auto annulus = catalog::build_model("annulus", 16, 0.1);
    auto map = make_condition_a_map(annulus, 2.0, BoundaryIsometry::parse("swap:0.7853"),
                                    one_crossing(0.5));
    for (int i = 0; i < 40; ++i) {
        BoundaryPoint y0{i % 2, {0.13 * i}};
        BoundaryPoint y1{i % 2, {0.41 * i + 0.2}};
        double before = std::abs(num::wrap_angle(y0.y[0] - y1.y[0]));
        BoundaryPoint b0 = map.apply_boundary(y0), b1 = map.apply_boundary(y1);
        REQUIRE(b0.component == b1.component);
        double after = std::abs(num::wrap_angle(b0.y[0] - b1.y[0]));
        CHECK(std::abs(before - after) < 1e-12);
    }
}

TEST_CASE("disk reflection (c = 1/2) has the expected five fixed points") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto map = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                    one_crossing(1.7, 0.55));
    auto result = find_fixed_points(map, 48, 1e-12);
    REQUIRE(result.records.size() == 5);

    int boundary = 0, interior_minus = 0;
    for (const auto& r : result.records) {
        CHECK(std::abs(geo::det(geo::Mat::identity(2) - r.jacobian)) > kSimplenessThreshold);
        if (r.on_boundary) {
            ++boundary;
            CHECK(r.classification == "attracting");
            CHECK(r.a_value == doctest::Approx(0.5));
            // sign det(I - diag(c, -1)) = sign((1-c) * 2) = +1
            CHECK(r.index == 1);
        } else if (geo::norm(r.location) < 1e-8) {
            // origin: det(I - k A) = (1-k)(1+k) > 0
            CHECK(r.index == 1);
        } else {
            // axis crossings at (r*, 0) and (r*, pi): det = (1 - rho') * 2 < 0
            CHECK(r.index == -1);
            CHECK(std::abs(r.location[1]) < 1e-9);
            ++interior_minus;
        }
    }
    CHECK(boundary == 2);
    CHECK(interior_minus == 2);
    for (const auto& r : result.records)
        CHECK(disk.chart_dist(map.apply(r.location), r.location) < 1e-9);
}

TEST_CASE("annulus rotation has no fixed points") {
    auto annulus = catalog::build_model("annulus", 16, 0.1);
    auto map = make_condition_a_map(
        annulus, 2.0, BoundaryIsometry::parse("rotation:0.7853981633974483"),
        one_crossing(0.5));
    auto result = find_fixed_points(map, 48, 1e-12);
    CHECK(result.records.empty());
}

TEST_CASE("interval identity (c = 1/2): two attracting ends, one repelling crossing") {
    auto interval = catalog::build_model("interval", 16, 0.2);
    auto map = make_condition_a_map(interval, 0.5, BoundaryIsometry::parse("identity"),
                                    one_crossing(1.7));
    // 1-D oracle: the diagonal is crossed exactly once in the open interior
    CHECK(bisection_root_count(map, 1e-6, 1.0 - 1e-6) == 1);

    auto result = find_fixed_points(map, 64, 1e-12);
    REQUIRE(result.records.size() == 3);
    int n_boundary = 0;
    for (const auto& r : result.records) {
        if (r.on_boundary) {
            ++n_boundary;
            CHECK(r.classification == "attracting");
            CHECK(r.index == 1);  // sign(1 - c) = +1
        } else {
            // crossing from below to above forces f'(x*) > 1
            CHECK(map.jacobian(r.location)(0, 0) > 1.0);
            CHECK(r.index == -1);
        }
    }
    CHECK(n_boundary == 2);
}

TEST_CASE("classify_boundary_point") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto half = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                     one_crossing(1.7, 0.55));
    auto [a1, cls1] = classify_boundary_point(half, BoundaryPoint{0, {0.0}});
    CHECK(a1 == doctest::Approx(0.5));
    CHECK(cls1 == "attracting");

    auto triple = make_condition_a_map(disk, 3.0, BoundaryIsometry::parse("reflection"),
                                       no_crossing());
    auto [a2, cls2] = classify_boundary_point(triple, BoundaryPoint{0, {num::kPi}});
    CHECK(a2 == doctest::Approx(3.0));
    CHECK(cls2 == "repelling");

    CHECK_THROWS_AS(classify_boundary_point(half, BoundaryPoint{0, {num::kPi / 2}}),
                    std::invalid_argument);
}

TEST_CASE("repelling boundary points carry index -1") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto triple = make_condition_a_map(disk, 3.0, BoundaryIsometry::parse("reflection"),
                                       no_crossing());
    auto result = find_fixed_points(triple, 48, 1e-12);
    int n_boundary = 0;
    for (const auto& r : result.records) {
        if (r.on_boundary) {
            ++n_boundary;
            // sign((1-3) * (1-(-1))) = -1
            CHECK(r.index == -1);
            CHECK(local_index(triple, r) == -1);
        } else {
            CHECK(geo::norm(r.location) < 1e-8);  // only the origin remains
            CHECK(r.index == 1);
        }
    }
    CHECK(n_boundary == 2);
    CHECK(result.records.size() == 3);
}

TEST_CASE("rotation fixed point at the origin has index +1 for any angle") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    for (double c : {0.5, 2.0}) {
        auto map = make_condition_a_map(
            disk, c, BoundaryIsometry::parse("rotation:1.0471975511965976"),
            c < 1 ? one_crossing(1.7, 0.55) : no_crossing());
        auto result = find_fixed_points(map, 48, 1e-12);
        REQUIRE(result.records.size() == 1);
        CHECK_FALSE(result.records[0].on_boundary);
        // det(I - k R_alpha) = 1 - 2 k cos(alpha) + k^2 > 0
        CHECK(result.records[0].index == 1);
    }
}

TEST_CASE("index is stable under grid refinement") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto map = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                    one_crossing(1.7, 0.55));
    auto coarse = find_fixed_points(map, 32, 1e-12);
    auto fine = find_fixed_points(map, 64, 1e-12);
    REQUIRE(coarse.records.size() == fine.records.size());
    for (std::size_t i = 0; i < coarse.records.size(); ++i) {
        CHECK(coarse.records[i].index == fine.records[i].index);
        CHECK(disk.chart_dist(coarse.records[i].location, fine.records[i].location) < 1e-8);
    }
}

TEST_CASE("boundary fixed points are exactly the fixed points of B") {
    auto annulus = catalog::build_model("annulus", 16, 0.1);
    auto map = make_condition_a_map(annulus, 0.5, BoundaryIsometry::parse("reflection"),
                                    one_crossing(1.7));
    auto bfp = map.boundary_fixed_points();
    CHECK(bfp.size() == 4);  // theta in {0, pi} on each circle
    auto result = find_fixed_points(map, 48, 1e-12);
    int n_boundary = 0;
    for (const auto& r : result.records) n_boundary += r.on_boundary ? 1 : 0;
    CHECK(n_boundary == 4);
}

TEST_CASE("degenerate boundary isometries raise NotSimple") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto map = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("rotation:0"),
                                    one_crossing(1.7, 0.55));
    CHECK_THROWS_AS(find_fixed_points(map, 32, 1e-12), NotSimpleError);
}

TEST_CASE("local_index rejects identity-like degenerate records") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto map = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                    one_crossing(1.7, 0.55));
    FixedPointRecord degenerate;
    degenerate.location = geo::Vec(0.0, 0.0);
    degenerate.jacobian = geo::Mat::identity(2);  // det(I - df) = 0
    CHECK_THROWS_AS(local_index(map, degenerate), NotSimpleError);
}

TEST_CASE("a broken collar profile is detected with a located sample") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto map = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                    one_crossing(1.7, 0.55));
    REQUIRE(verify_condition_a(map, 500).pass);
    // tamper: put the profile seam inside the collar (slope 0.6 instead of c)
    ConditionAMap broken = map;
    broken.profile = Profile::monotone_through(
        {{0.0, 0.0, 0.4}, {0.55, 0.55, 1.7}, {0.95, 0.97, 0.6}, {1.0, 1.0, 0.6}});
    auto check = verify_condition_a(broken, 500);
    CHECK_FALSE(check.pass);
    CHECK(check.worst_residual > 1e-12);
    // the located sample sits in the collar
    CHECK(disk.collar_u(check.worst_point) <= disk.collar_width + 1e-12);
}

TEST_CASE("pullback operator functoriality on sampled points") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto f = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                  one_crossing(1.7, 0.55));
    auto g = make_condition_a_map(disk, 0.5,
                                  BoundaryIsometry::parse("rotation:1.0471975511965976"),
                                  one_crossing(1.7, 0.55));
    // T_q(g o f at x) = T_q(f at x) . T_q(g at f(x))
    for (double x0 : {0.3, -0.2, 0.55}) {
        geo::Vec x(x0, 0.21);
        geo::Vec fx = f.apply(x);
        for (int q = 0; q <= 2; ++q) {
            auto tf = f.pullback_operator(x, q);
            auto tg = g.pullback_operator(fx, q);
            geo::Mat comp = g.jacobian(fx) * f.jacobian(x);
            auto tcomp = geo::exterior_power(geo::transpose(comp), q);
            const int n = static_cast<int>(tcomp.size());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0;
                    for (int k = 0; k < n; ++k) acc += tf[i][k] * tg[k][j];
                    CHECK(acc == doctest::Approx(tcomp[i][j]).epsilon(1e-10));
                }
        }
    }
}

TEST_CASE("alternating exterior traces reproduce det(I - df)") {
    auto disk = catalog::build_model("disk", 16, 0.1);
    auto map = make_condition_a_map(disk, 0.5, BoundaryIsometry::parse("reflection"),
                                    one_crossing(1.7, 0.55));
    geo::Vec x(0.4, -0.3);
    geo::Mat df = map.jacobian(x);
    double alt = 0;
    for (int q = 0; q <= 2; ++q)
        alt += (q % 2 == 0 ? 1 : -1) * geo::exterior_trace(geo::transpose(df), q);
    CHECK(alt == doctest::Approx(geo::det(geo::Mat::identity(2) - df)).epsilon(1e-12));
}
