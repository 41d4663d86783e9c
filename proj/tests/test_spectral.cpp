#include <doctest.h>

#include <cmath>

#include "leflab/numerics.hpp"
#include "leflab/spectral.hpp"

using namespace leflab;
using namespace leflab::spectral;
using selfmap::BoundaryIsometry;

namespace {

// direct Fourier summation oracle for the circle:
// Tr(B* e^{-t Delta^0}) = 1 + sum_{k>=1} 2 cos(k alpha) e^{-t k^2} (rotation)
double circle_rotation_trace_oracle(double alpha, double t, int kmax) {
    double s = 1.0;
    for (int k = 1; k <= kmax; ++k) s += 2.0 * std::cos(k * alpha) * std::exp(-t * k * k);
    return s;
}

double tr(const std::vector<std::vector<double>>& m) {
    double s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m[i][i];
    return s;
}

}  // namespace

TEST_CASE("circle eigenvalues below the cutoff") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    SpectralBasis sb(disk, 100.0);
    // degree 0: k = 0 once (harmonic) and each k = 1..10 with multiplicity 2
    int zero_modes = 0;
    std::map<int, int> mult;
    for (const auto& ln : sb.lines()) {
        if (ln.degree != 0) continue;
        if (ln.harmonic) ++zero_modes;
        else ++mult[ln.k];
    }
    CHECK(zero_modes == 1);
    for (int k = 1; k <= 10; ++k) CHECK(mult[k] == 2);
    CHECK(mult.size() == 10);
    // degree 1 mirrors it (forms f dtheta), plus the harmonic dtheta line
    int d1_harmonic = 0, d1_nonharmonic = 0;
    for (const auto& ln : sb.lines())
        if (ln.degree == 1) ln.harmonic ? ++d1_harmonic : ++d1_nonharmonic;
    CHECK(d1_harmonic == 1);
    CHECK(d1_nonharmonic == 20);
}

TEST_CASE("annulus eigendata is duplicated per component") {
    auto annulus = catalog::build_model("annulus", 8, 0.1);
    SpectralBasis sb(annulus, 50.0);
    std::map<std::pair<int, int>, int> per_comp;  // (component, k) -> count
    for (const auto& ln : sb.lines())
        if (!ln.harmonic && ln.degree == 0) ++per_comp[{ln.component, ln.k}];
    for (const auto& [key, count] : per_comp) {
        CHECK(count == 2);
        CHECK(per_comp.count({1 - key.first, key.second}) == 1);
    }
}

TEST_CASE("K splits of the catalog models") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    KSplit kd = compute_k_split(disk);
    CHECK(kd.dim() == 1);
    CHECK(kd.k_basis[0].degree == 0);
    CHECK(kd.star_k_basis[0].degree == 1);

    auto annulus = catalog::build_model("annulus", 8, 0.1);
    KSplit ka = compute_k_split(annulus);
    CHECK(ka.dim() == 2);
    // diagonal restriction classes: (1,1) in degree 0 and (dtheta, dtheta)
    CHECK(ka.k_in_degree(0).size() == 1);
    CHECK(ka.k_in_degree(1).size() == 1);
    auto k0 = ka.k_in_degree(0)[0];
    CHECK(k0.coeff[0] == doctest::Approx(k0.coeff[1]));

    auto torus = catalog::build_model("solid_torus", 4, 0.1);
    KSplit kt = compute_k_split(torus);
    CHECK(kt.dim() == 2);
    CHECK(kt.k_in_degree(0).size() == 1);
    CHECK(kt.k_in_degree(1).size() == 1);
    // K^1 is the dphi direction
    CHECK(std::abs(kt.k_in_degree(1)[0].coeff[0]) < 1e-14);
    CHECK(std::abs(kt.k_in_degree(1)[0].coeff[1]) > 0);

    auto interval = catalog::build_model("interval", 8, 0.2);
    KSplit ki = compute_k_split(interval);
    CHECK(ki.dim() == 1);
    CHECK(ki.k_basis[0].coeff[0] == doctest::Approx(ki.k_basis[0].coeff[1]));
    // star K is the anti-diagonal
    CHECK(ki.star_k_basis[0].coeff[0] == doctest::Approx(-ki.star_k_basis[0].coeff[1]));
}

TEST_CASE("K-splitting invariants: orthogonality and dimension count") {
    for (const char* name : {"interval", "disk", "annulus"}) {
        auto m = catalog::build_model(name, 8, name[0] == 'i' ? 0.2 : 0.1);
        KSplit ks = compute_k_split(m);
        CHECK(2 * ks.dim() == m.boundary.total_harmonic_dim());
        for (const auto& a : ks.k_basis)
            for (const auto& b : ks.star_k_basis)
                CHECK(std::abs(harmonic_inner(m.boundary, a, b)) < 1e-12);
        // orthonormality of each basis
        for (std::size_t i = 0; i < ks.k_basis.size(); ++i)
            for (std::size_t j = 0; j < ks.k_basis.size(); ++j) {
                double g = harmonic_inner(m.boundary, ks.k_basis[i], ks.k_basis[j]);
                CHECK(g == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
            }
    }
}

TEST_CASE("b_star_matrix on circle harmonic spaces") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    BoundaryIsometry refl = BoundaryIsometry::parse("reflection");
    // constants are fixed
    HarmonicForm h0{0, {1.0}};
    auto m0 = b_star_matrix(disk.boundary, refl, {h0});
    CHECK(m0[0][0] == doctest::Approx(1.0));
    // dtheta flips
    HarmonicForm h1{1, {1.0}};
    auto m1 = b_star_matrix(disk.boundary, refl, {h1});
    CHECK(m1[0][0] == doctest::Approx(-1.0));
}

TEST_CASE("b_star_matrix flags non-invariant subspaces") {
    auto annulus = catalog::build_model("annulus", 8, 0.1);
    BoundaryIsometry swap = BoundaryIsometry::parse("swap:0.7853981633974483");
    // a single-component constant is not swap-invariant
    HarmonicForm lopsided{0, {1.0, 0.0}};
    CHECK_THROWS_AS(b_star_matrix(annulus.boundary, swap, {lopsided}), std::runtime_error);
}

TEST_CASE("annulus swap acts as the identity on K") {
    auto annulus = catalog::build_model("annulus", 8, 0.1);
    BoundaryIsometry swap = BoundaryIsometry::parse("swap:0.7853981633974483");
    KSplit ks = compute_k_split(annulus);
    auto m = b_star_matrix(annulus.boundary, swap, ks.k_basis);
    REQUIRE(m.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("B* is block diagonal over K and star K") {
    struct Case {
        const char* model;
        const char* b;
    };
    for (const auto& [model_name, bname] :
         {Case{"disk", "rotation:0.9"}, Case{"disk", "reflection"},
          Case{"annulus", "rotation:0.7853981633974483"}, Case{"annulus", "reflection"},
          Case{"annulus", "swap:0.7853981633974483"}, Case{"interval", "identity"},
          Case{"interval", "swap"}, Case{"solid_torus", "meridian-reflection:1.0471975511965976"},
          Case{"solid_torus", "longitude-reflection:1.0471975511965976"},
          Case{"solid_torus", "torus-rotation:0.5:0.9"}}) {
        auto m = catalog::build_model(model_name, model_name[0] == 's' ? 4 : 8,
                                      model_name[0] == 'i' ? 0.2 : 0.1);
        BoundaryIsometry b = BoundaryIsometry::parse(bname);
        KSplit ks = compute_k_split(m);
        std::vector<HarmonicForm> all = ks.k_basis;
        all.insert(all.end(), ks.star_k_basis.begin(), ks.star_k_basis.end());
        auto mat = b_star_matrix(m.boundary, b, all);
        const std::size_t d = ks.k_basis.size();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = d; j < 2 * d; ++j) {
                CHECK(std::abs(mat[i][j]) < 1e-12);
                CHECK(std::abs(mat[j][i]) < 1e-12);
            }
    }
}

TEST_CASE("K0 values over the catalog") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    CHECK(compute_k0(disk, BoundaryIsometry::parse("rotation:0.9")) == doctest::Approx(0.0));
    CHECK(compute_k0(disk, BoundaryIsometry::parse("reflection")) == doctest::Approx(1.0));

    auto annulus = catalog::build_model("annulus", 8, 0.1);
    CHECK(compute_k0(annulus, BoundaryIsometry::parse("swap:0.7853981633974483")) ==
          doctest::Approx(2.0));
    CHECK(compute_k0(annulus, BoundaryIsometry::parse("rotation:0.7853981633974483")) ==
          doctest::Approx(0.0));
    CHECK(compute_k0(annulus, BoundaryIsometry::parse("reflection")) == doctest::Approx(0.0));

    auto interval = catalog::build_model("interval", 8, 0.2);
    CHECK(compute_k0(interval, BoundaryIsometry::parse("identity")) == doctest::Approx(0.0));
    CHECK(compute_k0(interval, BoundaryIsometry::parse("swap")) == doctest::Approx(1.0));

    auto torus = catalog::build_model("solid_torus", 4, 0.1);
    CHECK(compute_k0(torus, BoundaryIsometry::parse("meridian-reflection:1.0471975511965976")) ==
          doctest::Approx(2.0));
    CHECK(compute_k0(torus, BoundaryIsometry::parse("longitude-reflection:1.0471975511965976")) ==
          doctest::Approx(0.0));
}

TEST_CASE("orientation signs") {
    auto annulus = catalog::build_model("annulus", 8, 0.1);
    CHECK(orientation_sign(annulus.boundary,
                           BoundaryIsometry::parse("rotation:0.7853981633974483")) == 1);
    CHECK(orientation_sign(annulus.boundary, BoundaryIsometry::parse("reflection")) == -1);
    CHECK(orientation_sign(annulus.boundary,
                           BoundaryIsometry::parse("swap:0.7853981633974483")) == -1);
    auto interval = catalog::build_model("interval", 8, 0.2);
    CHECK(orientation_sign(interval.boundary, BoundaryIsometry::parse("identity")) == 1);
    CHECK(orientation_sign(interval.boundary, BoundaryIsometry::parse("swap")) == -1);
}

TEST_CASE("equivariant trace against the direct Fourier oracle") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    SpectralBasis sb(disk, 2000.0);
    BoundaryIsometry rot = BoundaryIsometry::parse("rotation:1.0471975511965976");
    for (double t : {0.5, 0.2, 0.1}) {
        double got = sb.equivariant_trace(rot, 0, Restriction::all, t);
        double want = circle_rotation_trace_oracle(rot.alpha, t, 60);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
    // reflection: only k = 0 survives in degree 0; dtheta flips in degree 1
    BoundaryIsometry refl = BoundaryIsometry::parse("reflection");
    for (double t : {0.7, 0.1}) {
        CHECK(sb.equivariant_trace(refl, 0, Restriction::all, t) == doctest::Approx(1.0));
        CHECK(sb.equivariant_trace(refl, 1, Restriction::all, t) == doctest::Approx(-1.0));
    }
}

TEST_CASE("parity completeness: minus + plus = all, degree-wise") {
    auto annulus = catalog::build_model("annulus", 8, 0.1);
    SpectralBasis sb(annulus, 800.0);
    BoundaryIsometry b = BoundaryIsometry::parse("rotation:0.7853981633974483");
    for (int q = 0; q <= 1; ++q) {
        for (double t : {0.3, 0.1}) {
            double minus = sb.equivariant_trace(b, q, Restriction::minus, t);
            double plus = sb.equivariant_trace(b, q, Restriction::plus, t);
            double all = sb.equivariant_trace(b, q, Restriction::all, t);
            CHECK(minus + plus == doctest::Approx(all).epsilon(1e-12));
        }
    }
    // ... and the line count matches degree-wise
    std::map<int, int> n_all, n_split;
    for (const auto& ln : sb.lines()) {
        ++n_all[ln.degree];
        ++n_split[ln.degree];
    }
    CHECK(n_all == n_split);
}

TEST_CASE("McKean-Singer: alternating equivariant trace is constant in t") {
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
        SpectralBasis sb(m, 2000.0);
        BoundaryIsometry b = BoundaryIsometry::parse(bname);
        double reference = 0.0;
        double max_dev = 0.0;
        for (int i = 0; i <= 20; ++i) {
            double t = 0.05 + (2.0 - 0.05) * i / 20.0;
            double super = 0.0;
            for (int q = 0; q <= m.boundary.dim; ++q)
                super += (q % 2 == 0 ? 1.0 : -1.0) *
                         sb.equivariant_trace(b, q, Restriction::all, t);
            if (i == 0) reference = super;
            max_dev = std::max(max_dev, std::abs(super - reference));
        }
        CHECK(max_dev < 1e-10);
        CHECK(reference == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("tail certification rejects undersized cutoffs") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    SpectralBasis small(disk, 30.0);
    BoundaryIsometry rot = BoundaryIsometry::parse("rotation:0.5");
    CHECK_THROWS(small.equivariant_trace(rot, 0, Restriction::all, 0.01));
    SpectralBasis big(disk, 5000.0);
    CHECK_NOTHROW(big.equivariant_trace(rot, 0, Restriction::all, 0.01));
}

TEST_CASE("eigenform orthonormality on a sampled Gram matrix") {
    auto disk = catalog::build_model("disk", 8, 0.1);
    SpectralBasis sb(disk, 20.0);
    // numerically integrate <phi_i, phi_j> over the circle for a small subset
    std::vector<const SpectralLine*> subset;
    for (const auto& ln : sb.lines())
        if (ln.degree == 0 && subset.size() < 8) subset.push_back(&ln);
    const int N = 512;
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i; j < subset.size(); ++j) {
            double acc = 0;
            for (int n = 0; n < N; ++n) {
                selfmap::BoundaryPoint y{0, {2 * num::kPi * n / N}};
                acc += sb.eval_line(*subset[i], y)[0] * sb.eval_line(*subset[j], y)[0] *
                       (2 * num::kPi / N);
            }
            CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(5e-12));
        }
}

TEST_CASE("torus spectral traces: meridian reflection") {
    auto torus = catalog::build_model("solid_torus", 4, 0.1);
    SpectralBasis sb(torus, 1500.0);
    BoundaryIsometry b = BoundaryIsometry::parse("meridian-reflection:1.0471975511965976");
    // oracle: modes (0, l) survive theta-reflection; function trace is
    // sum_l e^{-t l^2} 2 cos(l beta) + 1 (l = 0)
    for (double t : {0.3, 0.1}) {
        double want = 1.0;
        for (int l = 1; l <= 38; ++l) want += 2.0 * std::cos(l * b.beta) * std::exp(-t * l * l);
        double got = sb.equivariant_trace(b, 0, Restriction::all, t);
        CHECK(got == doctest::Approx(want).epsilon(1e-11));
    }
    // McKean-Singer for the torus isometry: Lefschetz number of B on T^2 = 0
    for (double t : {0.5, 0.1}) {
        double super = 0;
        for (int q = 0; q <= 2; ++q)
            super += (q % 2 == 0 ? 1.0 : -1.0) * sb.equivariant_trace(b, q, Restriction::all, t);
        CHECK(super == doctest::Approx(0.0).epsilon(1e-10));
    }
}
