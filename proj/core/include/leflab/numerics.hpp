// Shared numeric helpers: quadrature, extrapolation, line fits.
#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace leflab::num {

inline constexpr double kPi = 3.14159265358979323846;

struct QuadRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule with n points, computed by Newton on P_n.
QuadRule gauss_legendre(int n);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive Simpson to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

// Neville polynomial extrapolation of (x_i, y_i) to x = 0.
// Returns {value, residual}, residual = |last diagonal correction|.
std::pair<double, double> extrapolate_to_zero(const std::vector<double>& xs,
                                              const std::vector<double>& ys);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Wrap to (-pi, pi].
double wrap_angle(double a);

// Nearest integer, with the distance to it (used to assert "integer-valued"
// analytic results before freezing them into reports).
std::pair<long, double> nearest_integer(double x);

}  // namespace leflab::num
