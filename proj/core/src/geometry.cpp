#include "leflab/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace leflab::geo {

Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.v[i] += b.v[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.v[i] -= b.v[i];
    return r;
}

Vec operator*(double s, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.v[i] *= s;
    return r;
}

double norm(const Vec& a) {
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += a.v[i] * a.v[i];
    return std::sqrt(s);
}

double dist(const Vec& a, const Vec& b) { return norm(a - b); }

Mat Mat::identity(int n) {
    Mat m;
    m.dim = n;
    for (int i = 0; i < n; ++i) m.a[i][i] = 1.0;
    return m;
}

Mat Mat::zero(int n) {
    Mat m;
    m.dim = n;
    return m;
}

Mat operator*(const Mat& x, const Mat& y) {
    Mat r = Mat::zero(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j)
            for (int k = 0; k < x.dim; ++k) r.a[i][j] += x.a[i][k] * y.a[k][j];
    return r;
}

Mat operator-(const Mat& x, const Mat& y) {
    Mat r = x;
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j) r.a[i][j] -= y.a[i][j];
    return r;
}

Vec apply(const Mat& m, const Vec& x) {
    Vec r;
    r.dim = m.dim;
    for (int i = 0; i < m.dim; ++i) {
        double s = 0;
        for (int j = 0; j < m.dim; ++j) s += m.a[i][j] * x.v[j];
        r.v[i] = s;
    }
    return r;
}

Mat transpose(const Mat& m) {
    Mat r = Mat::zero(m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) r.a[i][j] = m.a[j][i];
    return r;
}

double det(const Mat& m) {
    switch (m.dim) {
        case 1:
            return m.a[0][0];
        case 2:
            return m.a[0][0] * m.a[1][1] - m.a[0][1] * m.a[1][0];
        case 3:
            return m.a[0][0] * (m.a[1][1] * m.a[2][2] - m.a[1][2] * m.a[2][1]) -
                   m.a[0][1] * (m.a[1][0] * m.a[2][2] - m.a[1][2] * m.a[2][0]) +
                   m.a[0][2] * (m.a[1][0] * m.a[2][1] - m.a[1][1] * m.a[2][0]);
        default:
            throw std::invalid_argument("det: unsupported dimension");
    }
}

Vec solve(const Mat& m, const Vec& b) {
    // Partial-pivot Gaussian elimination on a local copy.
    const int n = m.dim;
    double a[3][4];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = m.a[i][j];
        a[i][n] = b.v[i];
    }
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (std::abs(a[p][c]) < 1e-300) throw std::runtime_error("solve: singular matrix");
        for (int j = 0; j <= n; ++j) std::swap(a[c][j], a[p][j]);
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    Vec x;
    x.dim = n;
    for (int i = 0; i < n; ++i) x.v[i] = a[i][n] / a[i][i];
    return x;
}

std::vector<std::vector<int>> subsets(int n, int q) {
    std::vector<std::vector<int>> out;
    if (q < 0 || q > n) return out;
    std::vector<int> idx(q);
    for (int i = 0; i < q; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        int i = q - 1;
        while (i >= 0 && idx[i] == n - q + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (q == 0) out = {{}};
    return out;
}

std::vector<std::vector<double>> exterior_power(const Mat& m, int q) {
    auto subs = subsets(m.dim, q);
    const int k = static_cast<int>(subs.size());
    std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            // minor with rows subs[r], cols subs[c]
            Mat sub = Mat::zero(q == 0 ? 1 : q);
            if (q == 0) {
                out[r][c] = 1.0;
                continue;
            }
            sub.dim = q;
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) sub.a[i][j] = m.a[subs[r][i]][subs[c][j]];
            out[r][c] = det(sub);
        }
    }
    return out;
}

double exterior_trace(const Mat& m, int q) {
    auto lam = exterior_power(m, q);
    double s = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) s += lam[i][i];
    return s;
}

}  // namespace leflab::geo
