// Small fixed-capacity vectors/matrices for chart computations (dim <= 3),
// plus exterior powers of linear maps on form bases.
#pragma once

#include <array>
#include <vector>

namespace leflab::geo {

struct Vec {
    int dim = 0;
    std::array<double, 3> v{0.0, 0.0, 0.0};

    Vec() = default;
    Vec(double x) : dim(1), v{x, 0, 0} {}
    Vec(double x, double y) : dim(2), v{x, y, 0} {}
    Vec(double x, double y, double z) : dim(3), v{x, y, z} {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
double norm(const Vec& a);
double dist(const Vec& a, const Vec& b);

struct Mat {
    int dim = 0;
    std::array<std::array<double, 3>, 3> a{};

    static Mat identity(int n);
    static Mat zero(int n);
    double& operator()(int i, int j) { return a[i][j]; }
    double operator()(int i, int j) const { return a[i][j]; }
};

Mat operator*(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Vec apply(const Mat& m, const Vec& x);
Mat transpose(const Mat& m);
double det(const Mat& m);

// Solve m x = b (dim <= 3), by direct formulas / partial-pivot elimination.
Vec solve(const Mat& m, const Vec& b);

// Basis-ordered q-th exterior power of m: rows/cols indexed by the
// lexicographically ordered q-subsets of {0..dim-1}. Entries are the
// corresponding q x q minors.
std::vector<std::vector<double>> exterior_power(const Mat& m, int q);

// Trace of the q-th exterior power (sum of principal q x q minors).
double exterior_trace(const Mat& m, int q);

// The q-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int q);

}  // namespace leflab::geo
