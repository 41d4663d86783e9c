#include <doctest.h>

#include <cmath>

#include "leflab/numerics.hpp"

using namespace leflab;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    auto r = num::gauss_legendre(6);
    double wsum = 0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // degree-11 polynomial is exact for n = 6
    double v = num::integrate_gl([](double x) { return std::pow(x, 11) + x * x; }, 0.0, 1.0, 6);
    CHECK(v == doctest::Approx(1.0 / 12 + 1.0 / 3).epsilon(1e-13));
}

TEST_CASE("adaptive simpson reaches requested tolerance") {
    double v = num::adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 6.0, 1e-12);
    CHECK(v == doctest::Approx(std::sqrt(num::kPi) / 2.0).epsilon(1e-10));
}

TEST_CASE("extrapolation recovers polynomial limits") {
    std::vector<double> xs = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(3.0 - 2.0 * x + 7.0 * x * x);
    auto [v, resid] = num::extrapolate_to_zero(xs, ys);
    CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(resid < 1e-10);
}

TEST_CASE("linear fit statistics") {
    std::vector<double> xs = {1, 2, 3, 4}, ys;
    for (double x : xs) ys.push_back(2.5 - 0.75 * x);
    auto fit = num::linear_fit(xs, ys);
    CHECK(fit.slope == doctest::Approx(-0.75));
    CHECK(fit.intercept == doctest::Approx(2.5));
    CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("angle wrap lands in (-pi, pi]") {
    CHECK(num::wrap_angle(3 * num::kPi) == doctest::Approx(num::kPi));
    CHECK(num::wrap_angle(-num::kPi) == doctest::Approx(num::kPi));
    CHECK(num::wrap_angle(0.3) == doctest::Approx(0.3));
}
