#include "leflab/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "leflab/numerics.hpp"

namespace leflab::catalog {

namespace {

constexpr double kTwoPi = 2.0 * num::kPi;

double sq(double x) { return x * x; }

// C^2 bump (1-u^2)^3 on [-1,1], normalized to unit integral after scaling.
double bump_shape(double u) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    double w = 1.0 - u * u;
    return w * w * w;
}
// integral of bump_shape over [-1,1]
constexpr double kBumpShapeIntegral = 32.0 / 35.0;

}  // namespace

std::vector<ModelDescriptor> list_models() {
    std::vector<ModelDescriptor> out;
    {
        ModelDescriptor d;
        d.name = "interval";
        d.kind = ModelKind::interval;
        d.dim = 1;
        d.min_resolution = 2;
        d.default_resolution = 32;
        d.length = 1.0;
        d.max_collar = 0.45;
        d.default_collar = 0.2;
        d.summary = "unit interval [0,1], boundary = two points";
        out.push_back(d);
    }
    {
        ModelDescriptor d;
        d.name = "disk";
        d.kind = ModelKind::disk;
        d.dim = 2;
        d.min_resolution = 8;
        d.default_resolution = 32;
        d.max_collar = 0.45;
        d.default_collar = 0.1;
        d.summary = "2-disk, boundary circle of circumference 2*pi, product collar";
        out.push_back(d);
    }
    {
        ModelDescriptor d;
        d.name = "annulus";
        d.kind = ModelKind::annulus;
        d.dim = 2;
        d.min_resolution = 8;
        d.default_resolution = 32;
        d.max_collar = 0.4;
        d.default_collar = 0.1;
        d.summary = "flat cylinder [0,1] x S^1, boundary = two circles";
        out.push_back(d);
    }
    {
        ModelDescriptor d;
        d.name = "solid_torus";
        d.kind = ModelKind::solid_torus;
        d.dim = 3;
        d.min_resolution = 4;
        d.default_resolution = 8;  // exact rational ranks on the 3D mesh set the budget
        d.max_collar = 0.45;
        d.default_collar = 0.1;
        d.summary = "D^2 x S^1, boundary = flat 2-torus";
        out.push_back(d);
    }
    {
        ModelDescriptor d;
        d.name = "interval_long";
        d.kind = ModelKind::interval;
        d.dim = 1;
        d.min_resolution = 2;
        d.default_resolution = 32;
        d.length = 20.0;
        d.max_collar = 9.8;
        d.default_collar = 6.0;
        d.summary = "interval of length 20; reference geometry for parametrix diagnostics";
        out.push_back(d);
    }
    return out;
}

const ModelDescriptor& descriptor(const std::string& name) {
    static const std::vector<ModelDescriptor> all = list_models();
    for (const auto& d : all)
        if (d.name == name) return d;
    throw std::invalid_argument("unknown model: " + name);
}

double BoundaryManifold::component_volume() const {
    switch (kind) {
        case Kind::points: return 1.0;
        case Kind::circles: return circumference;
        case Kind::torus: return circumference * circumference;
    }
    return 0.0;
}

double BoundaryManifold::total_volume() const {
    return component_volume() * num_components;
}

int BoundaryManifold::harmonic_dim(int degree) const {
    switch (kind) {
        case Kind::points: return degree == 0 ? num_components : 0;
        case Kind::circles: return (degree == 0 || degree == 1) ? num_components : 0;
        case Kind::torus:
            if (degree == 0 || degree == 2) return 1;
            if (degree == 1) return 2;
            return 0;
    }
    return 0;
}

int BoundaryManifold::total_harmonic_dim() const {
    int s = 0;
    for (int q = 0; q <= dim; ++q) s += harmonic_dim(q);
    return s;
}

namespace {

// ------------------------------------------------------------------
// Mesh builders. Each returns top simplices + chart coordinates; the
// complex is assembled by build_from_top_simplices, with orientation
// signs taken from chart signed volumes.

struct MeshData {
    int num_vertices = 0;
    std::vector<geo::Vec> chart;
    std::vector<simplicial::VertexTuple> tops;
    std::vector<int> orientations;
};

double signed_area(const geo::Vec& a, const geo::Vec& b, const geo::Vec& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

MeshData interval_mesh(double len, int n, double eps) {
    std::vector<double> nodes;
    nodes.push_back(0.0);
    const double inner = len - 2.0 * eps;
    for (int k = 0; k <= n; ++k) nodes.push_back(eps + inner * k / n);
    nodes.push_back(len);
    MeshData md;
    md.num_vertices = static_cast<int>(nodes.size());
    for (double x : nodes) md.chart.push_back(geo::Vec(x));
    for (int i = 0; i + 1 < md.num_vertices; ++i) {
        md.tops.push_back({i, i + 1});
        md.orientations.push_back(1);
    }
    return md;
}

// Shared 2D ring-band construction. `levels` are radial/axial levels, each
// carrying n ring vertices; `has_center` adds a cone point below level 0
// (disk). theta_idx units: 2*pi/(2n) so ring vertices sit at even indices and
// band centers at odd ones.
struct RingMesh {
    MeshData md;
    int n = 0;
    std::vector<double> levels;
    bool has_center = false;
    int ring0_offset = 0;   // id of ring(level 0, j=0)
    int centers_offset = 0; // id of bandcenter(band 0, j=0)

    int ring(int level, int j) const {
        return ring0_offset + level * n + ((j % n) + n) % n;
    }
    int band_center(int band, int j) const {
        return centers_offset + band * n + ((j % n) + n) % n;
    }
};

// position hook: maps (level value, theta) -> chart Vec
template <typename Pos>
RingMesh ring_mesh(int n, const std::vector<double>& levels, bool has_center,
                   const Pos& pos, const geo::Vec& center_chart) {
    RingMesh rm;
    rm.n = n;
    rm.levels = levels;
    rm.has_center = has_center;
    MeshData& md = rm.md;
    int id = 0;
    if (has_center) {
        md.chart.push_back(center_chart);
        id = 1;
    }
    rm.ring0_offset = id;
    const int L = static_cast<int>(levels.size());
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < n; ++j)
            md.chart.push_back(pos(levels[i], kTwoPi * j / n));
    id += L * n;
    rm.centers_offset = id;
    for (int b = 0; b + 1 < L; ++b) {
        double mid = 0.5 * (levels[b] + levels[b + 1]);
        for (int j = 0; j < n; ++j)
            md.chart.push_back(pos(mid, kTwoPi * (j + 0.5) / n));
    }
    md.num_vertices = static_cast<int>(md.chart.size());

    // Orientations are combinatorial: cells are listed counterclockwise with
    // respect to the chart orientation ((level, theta) with level = radius
    // for the disk, = s for the annulus), so every listed triangle gets +1.
    auto add_tri = [&](int a, int b, int c) {
        md.tops.push_back({a, b, c});
        md.orientations.push_back(1);
    };

    if (has_center) {
        for (int j = 0; j < n; ++j) add_tri(0, rm.ring(0, j), rm.ring(0, j + 1));
    }
    for (int b = 0; b + 1 < L; ++b) {
        for (int j = 0; j < n; ++j) {
            // quad corners: inner a,b (theta j, j+1), outer d,c;
            // CCW traversal is a -> d -> c -> b (level first, then theta)
            int a = rm.ring(b, j), bb = rm.ring(b, j + 1);
            int c = rm.ring(b + 1, j + 1), d = rm.ring(b + 1, j);
            int q = rm.band_center(b, j);
            add_tri(a, d, q);
            add_tri(d, c, q);
            add_tri(c, bb, q);
            add_tri(bb, a, q);
        }
    }
    return rm;
}

int disk_interior_rings(int n) { return std::max(2, n / 8); }

RingMesh disk_mesh(int n, double eps) {
    const int J = disk_interior_rings(n);
    std::vector<double> levels;
    for (int i = 1; i <= J; ++i) levels.push_back((1.0 - eps) * i / J);
    levels.push_back(1.0);
    auto pos = [](double r, double th) { return geo::Vec(r * std::cos(th), r * std::sin(th)); };
    return ring_mesh(n, levels, true, pos, geo::Vec(0.0, 0.0));
}

int annulus_interior_bands(int n) {
    int j = std::max(2, n / 8);
    return j % 2 == 0 ? j : j + 1;  // keep the level list symmetric with s = 1/2 present
}

RingMesh annulus_mesh(int n, double eps) {
    const int J = annulus_interior_bands(n);
    std::vector<double> levels;
    levels.push_back(0.0);
    for (int k = 0; k <= J; ++k) levels.push_back(eps + (1.0 - 2.0 * eps) * k / J);
    levels.push_back(1.0);
    auto pos = [](double s, double th) { return geo::Vec(s, th); };
    return ring_mesh(n, levels, false, pos, geo::Vec());
}

// Solid torus: extrude the n-gon disk slice (single interior fan + collar
// band) over n_phi layers, coning each prism from its centroid with quad
// face centers. Auxiliary vertex positions are chart-symmetric so the
// catalog isometries act as vertex maps.
struct TorusMesh {
    MeshData md;
    int n = 0, n_phi = 0;
    int slice_verts = 0;
    std::vector<simplicial::VertexTuple> slice_tris;  // local slice vertex ids
    std::vector<std::pair<int, int>> slice_edges;     // sorted local pairs
    int centroid_offset = 0;
    int quad_offset = 0;

    int slice_vertex(int local, int layer) const { return layer * slice_verts + local; }
    int centroid(int tri, int layer) const {
        return centroid_offset + layer * static_cast<int>(slice_tris.size()) + tri;
    }
    int quad_center(int edge, int layer) const {
        return quad_offset + layer * static_cast<int>(slice_edges.size()) + edge;
    }
};

TorusMesh torus_mesh(int n, double eps) {
    // Slice: center 0, ring(1-eps) = 1..n, ring(1) = n+1..2n, band centers 2n+1..3n.
    TorusMesh tm;
    tm.n = n;
    tm.n_phi = n;
    tm.slice_verts = 1 + 3 * n;
    auto rin = [n](int j) { return 1 + ((j % n) + n) % n; };
    auto rout = [n](int j) { return 1 + n + ((j % n) + n) % n; };
    auto bc = [n](int j) { return 1 + 2 * n + ((j % n) + n) % n; };

    const double r1 = 1.0 - eps;
    // slice chart positions (r, theta); theta in units of slots below
    std::vector<std::pair<double, double>> slice_pos(tm.slice_verts);
    slice_pos[0] = {0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        slice_pos[rin(j)] = {r1, kTwoPi * j / n};
        slice_pos[rout(j)] = {1.0, kTwoPi * j / n};
        slice_pos[bc(j)] = {1.0 - eps / 2.0, kTwoPi * (j + 0.5) / n};
    }

    // every slice triangle is listed counterclockwise in (x, y)
    for (int j = 0; j < n; ++j) {
        tm.slice_tris.push_back({0, rin(j), rin(j + 1)});
        tm.slice_tris.push_back({rin(j), rout(j), bc(j)});
        tm.slice_tris.push_back({rout(j), rout(j + 1), bc(j)});
        tm.slice_tris.push_back({rout(j + 1), rin(j + 1), bc(j)});
        tm.slice_tris.push_back({rin(j + 1), rin(j), bc(j)});
    }
    std::map<std::pair<int, int>, int> edge_id;
    auto intern_edge = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = edge_id.find(key);
        if (it != edge_id.end()) return it->second;
        int id = static_cast<int>(tm.slice_edges.size());
        edge_id[key] = id;
        tm.slice_edges.push_back(key);
        return id;
    };
    for (const auto& t : tm.slice_tris) {
        intern_edge(t[0], t[1]);
        intern_edge(t[1], t[2]);
        intern_edge(t[2], t[0]);
    }

    MeshData& md = tm.md;
    const int n_phi = tm.n_phi;
    const int T = static_cast<int>(tm.slice_tris.size());
    const int E = static_cast<int>(tm.slice_edges.size());
    tm.centroid_offset = n_phi * tm.slice_verts;
    tm.quad_offset = tm.centroid_offset + n_phi * T;
    md.num_vertices = tm.quad_offset + n_phi * E;
    md.chart.resize(md.num_vertices);

    auto xy = [&](int local) {
        auto [r, th] = slice_pos[local];
        return std::pair<double, double>(r * std::cos(th), r * std::sin(th));
    };
    // slice vertices per layer
    for (int l = 0; l < n_phi; ++l) {
        double phi = kTwoPi * l / n_phi;
        for (int v = 0; v < tm.slice_verts; ++v) {
            auto [x, y] = xy(v);
            md.chart[tm.slice_vertex(v, l)] = geo::Vec(x, y, phi);
        }
    }
    // centroids and quad centers: cartesian means in (x, y), half-layer phi
    // (linear means commute with the catalog isometries)
    for (int l = 0; l < n_phi; ++l) {
        double phi = kTwoPi * (l + 0.5) / n_phi;
        for (int t = 0; t < T; ++t) {
            const auto& tri = tm.slice_tris[t];
            double x = 0, y = 0;
            for (int k = 0; k < 3; ++k) {
                auto [xx, yy] = xy(tri[k]);
                x += xx / 3.0;
                y += yy / 3.0;
            }
            md.chart[tm.centroid(t, l)] = geo::Vec(x, y, phi);
        }
        for (int e = 0; e < E; ++e) {
            auto [a, b] = tm.slice_edges[e];
            auto [xa, ya] = xy(a);
            auto [xb, yb] = xy(b);
            md.chart[tm.quad_center(e, l)] =
                geo::Vec(0.5 * (xa + xb), 0.5 * (ya + yb), phi);
        }
    }

    // Prism-cone tets with combinatorial orientations: for a slice triangle
    // listed counterclockwise and phi increasing across the layer, the cone
    // from the prism centroid orients as +1 on the bottom face cone, -1 on
    // the top, and -1 on each vertical-quad cone tet.
    for (int l = 0; l < n_phi; ++l) {
        int lt = (l + 1) % n_phi;
        for (int t = 0; t < T; ++t) {
            const auto& tri = tm.slice_tris[t];
            int G = tm.centroid(t, l);
            auto bot = [&](int k) { return tm.slice_vertex(tri[k], l); };
            auto top = [&](int k) { return tm.slice_vertex(tri[k], lt); };
            auto add = [&](int a, int b, int c, int d, int orient) {
                tm.md.tops.push_back({a, b, c, d});
                tm.md.orientations.push_back(orient);
            };
            add(bot(0), bot(1), bot(2), G, 1);
            add(top(0), top(1), top(2), G, -1);
            for (int k = 0; k < 3; ++k) {
                int p = tri[k], q = tri[(k + 1) % 3];
                int e = edge_id.at(std::minmax(p, q));
                int M = tm.quad_center(e, l);
                int p0 = bot(k), q0 = bot((k + 1) % 3);
                int p1 = top(k), q1 = top((k + 1) % 3);
                add(p0, q0, M, G, -1);
                add(q0, q1, M, G, -1);
                add(q1, p1, M, G, -1);
                add(p1, p0, M, G, -1);
            }
        }
    }
    return tm;
}

// ------------------------------------------------------------------
// Generator / cycle assembly helpers.

// exact angle index of a vertex in units of 2*pi/(2n); -1 when off-grid
long angle_slot(double theta, int n) {
    double slots = theta / (kTwoPi / (2.0 * n));
    long s = std::lround(slots);
    if (std::abs(slots - static_cast<double>(s)) > 1e-9) return -100000000;
    return ((s % (2 * n)) + 2 * n) % (2 * n);
}

}  // namespace

double ModelManifold::collar_u(const geo::Vec& p) const {
    switch (kind) {
        case ModelKind::interval: return std::min(p[0], length - p[0]);
        case ModelKind::disk: return 1.0 - std::sqrt(sq(p[0]) + sq(p[1]));
        case ModelKind::annulus: return std::min(p[0], 1.0 - p[0]);
        case ModelKind::solid_torus: return 1.0 - std::sqrt(sq(p[0]) + sq(p[1]));
    }
    return 0.0;
}

int ModelManifold::collar_component(const geo::Vec& p) const {
    if (boundary.num_components == 1) return 0;
    switch (kind) {
        case ModelKind::interval: return p[0] < length / 2.0 ? 0 : 1;
        case ModelKind::annulus: return p[0] < 0.5 ? 0 : 1;
        default: return 0;
    }
}

bool ModelManifold::in_domain(const geo::Vec& p, double pad) const {
    switch (kind) {
        case ModelKind::interval: return p[0] >= -pad && p[0] <= length + pad;
        case ModelKind::disk: return sq(p[0]) + sq(p[1]) <= sq(1.0 + pad);
        case ModelKind::annulus: return p[0] >= -pad && p[0] <= 1.0 + pad;
        case ModelKind::solid_torus: return sq(p[0]) + sq(p[1]) <= sq(1.0 + pad);
    }
    return false;
}

double ModelManifold::chart_dist(const geo::Vec& a, const geo::Vec& b) const {
    switch (kind) {
        case ModelKind::interval: return std::abs(a[0] - b[0]);
        case ModelKind::disk: return std::sqrt(sq(a[0] - b[0]) + sq(a[1] - b[1]));
        case ModelKind::annulus:
            return std::sqrt(sq(a[0] - b[0]) + sq(num::wrap_angle(a[1] - b[1])));
        case ModelKind::solid_torus:
            return std::sqrt(sq(a[0] - b[0]) + sq(a[1] - b[1]) +
                             sq(num::wrap_angle(a[2] - b[2])));
    }
    return 0.0;
}

std::vector<double> ModelManifold::eval_generator(const Generator& g, const geo::Vec& p) const {
    const double eps = collar_width;
    if (g.kind == "constant") return {1.0};
    if (g.kind == "angle") {
        if (kind == ModelKind::annulus) return {0.0, 1.0 / kTwoPi};       // (ds, dtheta)
        if (kind == ModelKind::solid_torus) return {0.0, 0.0, 1.0 / kTwoPi};  // (dx, dy, dphi)
    }
    if (g.kind == "crossing") {
        if (kind == ModelKind::annulus) {
            double w = std::min(0.3, 0.4 * (1.0 - 2.0 * eps));
            double b = bump_shape((p[0] - 0.5) / w) / (w * kBumpShapeIntegral);
            return {b, 0.0};
        }
        if (kind == ModelKind::solid_torus) {
            // 2-form b(x,y) dx^dy, basis (dx^dy, dx^dphi, dy^dphi)
            double r0 = 0.6 * (1.0 - eps);
            double r = std::sqrt(sq(p[0]) + sq(p[1]));
            double c = 4.0 / (num::kPi * sq(r0));
            double u = sq(r / r0);
            double b = u < 1.0 ? c * (1.0 - u) * (1.0 - u) * (1.0 - u) : 0.0;
            return {b, 0.0, 0.0};
        }
    }
    if (g.kind == "top_bump") {
        switch (kind) {
            case ModelKind::interval: {
                double w = std::min(0.3 * length, 0.4 * (length - 2.0 * eps));
                return {bump_shape((p[0] - length / 2.0) / w) / (w * kBumpShapeIntegral)};
            }
            case ModelKind::disk: {
                double r0 = 0.6 * (1.0 - eps);
                double r = std::sqrt(sq(p[0]) + sq(p[1]));
                double c = 4.0 / (num::kPi * sq(r0));
                double u = sq(r / r0);
                return {u < 1.0 ? c * std::pow(1.0 - u, 3) : 0.0};
            }
            case ModelKind::annulus: {
                double w = std::min(0.3, 0.4 * (1.0 - 2.0 * eps));
                double b = bump_shape((p[0] - 0.5) / w) / (w * kBumpShapeIntegral);
                return {b / kTwoPi};
            }
            case ModelKind::solid_torus: {
                double r0 = 0.6 * (1.0 - eps);
                double r = std::sqrt(sq(p[0]) + sq(p[1]));
                double c = 4.0 / (num::kPi * sq(r0));
                double u = sq(r / r0);
                double b = u < 1.0 ? c * std::pow(1.0 - u, 3) : 0.0;
                return {b / kTwoPi};
            }
        }
    }
    throw std::invalid_argument("eval_generator: unknown generator kind " + g.kind);
}

namespace {

// Exact angle 1-cochain (d(angle)/2pi) on a 2D ring mesh or the 3D phi grid.
// slot(v) returns the vertex angle in half-step units (2n slots around), or
// < 0 for vertices not on the angular grid (none in the catalog meshes).
std::vector<Rat> angle_cochain(const simplicial::SimplicialComplex& sc,
                               const simplicial::CochainComplex& cc, int half_slots,
                               const std::vector<long>& slot) {
    std::vector<Rat> coef(cc.dims[1], Rat(0));
    for (int bi = 0; bi < cc.dims[1]; ++bi) {
        const auto& e = sc.simplices[1][cc.kept[1][bi]];
        long sa = slot[e[0]], sb = slot[e[1]];
        if (sa < 0 || sb < 0)
            throw std::logic_error("angle cochain: vertex off the angular grid");
        long d = (sb - sa) % half_slots;
        if (d > half_slots / 2) d -= half_slots;
        if (d <= -half_slots / 2) d += half_slots;
        coef[bi] = rat(d, half_slots);
    }
    return coef;
}

la::SparseVec chain_from_edges(const simplicial::SimplicialComplex& sc,
                               const std::vector<std::pair<int, int>>& directed_edges) {
    la::SparseVec chain;
    for (auto [a, b] : directed_edges) {
        simplicial::VertexTuple t{std::min(a, b), std::max(a, b)};
        int id = sc.simplex_id(1, t);
        if (id < 0) throw std::runtime_error("chain_from_edges: missing edge");
        chain.emplace_back(id, rat(a < b ? 1 : -1));
    }
    std::sort(chain.begin(), chain.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    // merge duplicates
    la::SparseVec out;
    for (auto& [id, v] : chain) {
        if (!out.empty() && out.back().first == id) out.back().second += v;
        else out.emplace_back(id, v);
        if (out.back().second == 0) out.pop_back();
    }
    return out;
}

int find_interior_top_simplex(const simplicial::SimplicialComplex& sc,
                              const std::vector<geo::Vec>& chart,
                              const ModelManifold& m) {
    int best = -1;
    double best_u = -1;
    for (std::size_t i = 0; i < sc.simplices[sc.dim].size(); ++i) {
        double umin = 1e30;
        for (int v : sc.simplices[sc.dim][i]) umin = std::min(umin, m.collar_u(chart[v]));
        if (umin > best_u) {
            best_u = umin;
            best = static_cast<int>(i);
        }
    }
    return best;
}

// Relative cocycle in the given degree with unit pairing against `dual`.
std::vector<Rat> solve_relative_generator(const simplicial::CochainComplex& rel, int degree,
                                          const la::SparseVec& dual) {
    // rows: d_rel[degree] plus the pairing row; unknowns: C^degree_rel
    const la::SparseMatQ& d = rel.d[degree];
    la::SparseMatQ sys(d.rows + 1, d.cols);
    sys.row = d.row;
    sys.row.resize(d.rows + 1);
    // pairing row in rel-basis coordinates
    std::vector<int> pos;
    {
        int max_id = -1;
        for (int id : rel.kept[degree]) max_id = std::max(max_id, id);
        pos.assign(max_id + 1, -1);
        for (std::size_t k = 0; k < rel.kept[degree].size(); ++k)
            pos[rel.kept[degree][k]] = static_cast<int>(k);
    }
    la::SparseVec prow;
    for (const auto& [id, v] : dual) {
        if (id >= static_cast<int>(pos.size()) || pos[id] < 0)
            throw std::runtime_error("solve_relative_generator: dual chain touches boundary basis");
        prow.emplace_back(pos[id], v);
    }
    std::sort(prow.begin(), prow.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    sys.row[d.rows] = std::move(prow);
    std::vector<Rat> rhs(d.rows + 1, Rat(0));
    rhs[d.rows] = Rat(1);
    return la::solve_particular(sys, rhs);
}

void attach_generators(ModelManifold& m) {
    const auto& sc = m.complex;

    // absolute degree 0: constant cochain, dual = deepest interior vertex
    {
        Generator g;
        g.degree = 0;
        g.kind = "constant";
        g.cochain.assign(m.abs_cochain.dims[0], Rat(1));
        m.abs_generators.push_back(std::move(g));
        int best = 0;
        double ubest = -1;
        for (int v = 0; v < sc.num_vertices; ++v) {
            double u = m.collar_u(m.vertex_chart[v]);
            if (u > ubest) {
                ubest = u;
                best = v;
            }
        }
        DualCycle c;
        c.degree = 0;
        c.kind = "point";
        c.chain.emplace_back(best, Rat(1));
        m.abs_cycles.push_back(std::move(c));
    }

    // absolute degree 1 on annulus / solid torus: normalized angle form
    if (m.kind == ModelKind::annulus || m.kind == ModelKind::solid_torus) {
        const int n = m.resolution;
        std::vector<long> slot(sc.num_vertices, -1);
        if (m.kind == ModelKind::annulus) {
            for (int v = 0; v < sc.num_vertices; ++v)
                slot[v] = angle_slot(m.vertex_chart[v][1], n);
        } else {
            for (int v = 0; v < sc.num_vertices; ++v)
                slot[v] = angle_slot(m.vertex_chart[v][2], n);
        }
        Generator g;
        g.degree = 1;
        g.kind = "angle";
        g.cochain = angle_cochain(sc, m.abs_cochain, 2 * n, slot);
        m.abs_generators.push_back(std::move(g));

        DualCycle c;
        c.degree = 1;
        c.kind = "core_loop";
        std::vector<std::pair<int, int>> edges;
        if (m.kind == ModelKind::annulus) {
            // ring edges at the s = 1/2 level: locate ring vertices there
            std::map<long, int> ring_at_half;
            for (int v = 0; v < sc.num_vertices; ++v) {
                if (std::abs(m.vertex_chart[v][0] - 0.5) < 1e-12) {
                    long s = angle_slot(m.vertex_chart[v][1], n);
                    if (s % 2 == 0) ring_at_half[s / 2] = v;
                }
            }
            if (static_cast<int>(ring_at_half.size()) != n)
                throw std::runtime_error("annulus: mid-level ring not found");
            for (int j = 0; j < n; ++j)
                edges.emplace_back(ring_at_half[j], ring_at_half[(j + 1) % n]);
        } else {
            // core vertices: r = 0 at each layer
            std::map<long, int> core;
            for (int v = 0; v < sc.num_vertices; ++v) {
                if (sq(m.vertex_chart[v][0]) + sq(m.vertex_chart[v][1]) < 1e-20) {
                    long s = angle_slot(m.vertex_chart[v][2], n);
                    if (s % 2 == 0) core[s / 2] = v;
                }
            }
            if (static_cast<int>(core.size()) != n)
                throw std::runtime_error("solid_torus: core circle not found");
            for (int j = 0; j < n; ++j) edges.emplace_back(core[j], core[(j + 1) % n]);
        }
        c.chain = chain_from_edges(sc, edges);
        m.abs_cycles.push_back(std::move(c));
    }

    // relative top generator: oriented indicator on the deepest top simplex
    {
        int ti = find_interior_top_simplex(sc, m.vertex_chart, m);
        Generator g;
        g.degree = sc.dim;
        g.kind = "top_bump";
        g.cochain.assign(m.rel_cochain.dims[sc.dim], Rat(0));
        // locate ti in the rel basis
        for (std::size_t k = 0; k < m.rel_cochain.kept[sc.dim].size(); ++k) {
            if (m.rel_cochain.kept[sc.dim][k] == ti) {
                g.cochain[k] = rat(sc.top_orientation[ti]);
                break;
            }
        }
        m.rel_generators.push_back(std::move(g));

        DualCycle c;
        c.degree = sc.dim;
        c.kind = "fundamental";
        for (std::size_t i = 0; i < sc.simplices[sc.dim].size(); ++i)
            c.chain.emplace_back(static_cast<int>(i), rat(sc.top_orientation[i]));
        m.rel_cycles.push_back(std::move(c));
    }

    // relative middle generators
    if (m.kind == ModelKind::annulus) {
        // dual cycle: radial path at theta = 0 from s=0 to s=1
        std::map<double, int> ring_at_zero;
        for (int v = 0; v < sc.num_vertices; ++v)
            if (std::abs(num::wrap_angle(m.vertex_chart[v][1])) < 1e-12)
                ring_at_zero[m.vertex_chart[v][0]] = v;
        std::vector<std::pair<int, int>> edges;
        int prev = -1;
        for (auto& [s, v] : ring_at_zero) {
            if (prev >= 0) edges.emplace_back(prev, v);
            prev = v;
        }
        DualCycle c;
        c.degree = 1;
        c.kind = "cross_path";
        c.chain = chain_from_edges(sc, edges);

        Generator g;
        g.degree = 1;
        g.kind = "crossing";
        g.cochain = solve_relative_generator(m.rel_cochain, 1, c.chain);
        m.rel_generators.push_back(std::move(g));
        m.rel_cycles.push_back(std::move(c));
    }
    if (m.kind == ModelKind::solid_torus) {
        // dual cycle: the phi = 0 meridian disk slice
        DualCycle c;
        c.degree = 2;
        c.kind = "meridian_disk";
        for (std::size_t i = 0; i < sc.simplices[2].size(); ++i) {
            const auto& f = sc.simplices[2][i];
            bool slice = true;
            for (int v : f) slice = slice && std::abs(m.vertex_chart[v][2]) < 1e-12;
            if (!slice) continue;
            // orient by (x, y) signed area
            double a = signed_area(m.vertex_chart[f[0]], m.vertex_chart[f[1]],
                                   m.vertex_chart[f[2]]);
            c.chain.emplace_back(static_cast<int>(i), rat(a >= 0 ? 1 : -1));
        }
        std::sort(c.chain.begin(), c.chain.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });

        Generator g;
        g.degree = 2;
        g.kind = "crossing";
        g.cochain = solve_relative_generator(m.rel_cochain, 2, c.chain);
        m.rel_generators.push_back(std::move(g));
        m.rel_cycles.push_back(std::move(c));
    }
    if (m.kind == ModelKind::interval) {
        // top generator above already covers H^1(M, Y); nothing else
    }
}

std::vector<int> component_orientations(const ModelManifold& m) {
    const auto& sc = m.complex;
    la::SparseVec bnd = simplicial::fundamental_boundary(sc);
    std::vector<double> acc(m.boundary.num_components, 0.0);
    for (const auto& [id, coeff] : bnd) {
        const auto& s = sc.simplices[sc.dim - 1][id];
        int comp = m.collar_component(m.vertex_chart[s[0]]);
        double ref = 0;
        if (m.dim == 1) {
            ref = 1.0;
        } else if (m.dim == 2) {
            // reference: increasing theta
            double t0, t1;
            if (m.kind == ModelKind::annulus) {
                t0 = m.vertex_chart[s[0]][1];
                t1 = m.vertex_chart[s[1]][1];
            } else {
                t0 = std::atan2(m.vertex_chart[s[0]][1], m.vertex_chart[s[0]][0]);
                t1 = std::atan2(m.vertex_chart[s[1]][1], m.vertex_chart[s[1]][0]);
            }
            ref = num::wrap_angle(t1 - t0);
        } else {
            // reference: dtheta ^ dphi
            auto ang = [&](int v) {
                return std::pair<double, double>(
                    std::atan2(m.vertex_chart[v][1], m.vertex_chart[v][0]),
                    m.vertex_chart[v][2]);
            };
            auto [t0, p0] = ang(s[0]);
            auto [t1, p1] = ang(s[1]);
            auto [t2, p2] = ang(s[2]);
            double dt1 = num::wrap_angle(t1 - t0), dp1 = num::wrap_angle(p1 - p0);
            double dt2 = num::wrap_angle(t2 - t0), dp2 = num::wrap_angle(p2 - p0);
            ref = 0.5 * (dt1 * dp2 - dt2 * dp1);
        }
        acc[comp] += to_double(coeff) * ref;
    }
    std::vector<int> orient(m.boundary.num_components, 0);
    for (int c = 0; c < m.boundary.num_components; ++c)
        orient[c] = acc[c] >= 0 ? 1 : -1;
    return orient;
}

}  // namespace

ModelManifold build_model(const std::string& name, int resolution, double collar_width) {
    const ModelDescriptor& d = descriptor(name);
    if (resolution < d.min_resolution)
        throw std::invalid_argument(name + ": resolution below minimum " +
                                    std::to_string(d.min_resolution));
    if (d.kind != ModelKind::interval && resolution % 2 != 0)
        throw std::invalid_argument(name + ": resolution must be even");
    if (collar_width <= 0 || collar_width > d.max_collar)
        throw std::invalid_argument(name + ": collar width outside (0, " +
                                    std::to_string(d.max_collar) + "]");

    ModelManifold m;
    m.name = name;
    m.kind = d.kind;
    m.dim = d.dim;
    m.resolution = resolution;
    m.collar_width = collar_width;
    m.length = d.length;

    MeshData md;
    switch (d.kind) {
        case ModelKind::interval: {
            md = interval_mesh(d.length, resolution, collar_width);
            m.boundary.kind = BoundaryManifold::Kind::points;
            m.boundary.dim = 0;
            m.boundary.num_components = 2;
            m.betti_abs_declared = {1, 0};
            m.betti_rel_declared = {0, 1};
            break;
        }
        case ModelKind::disk: {
            RingMesh rm = disk_mesh(resolution, collar_width);
            md = std::move(rm.md);
            m.boundary.kind = BoundaryManifold::Kind::circles;
            m.boundary.dim = 1;
            m.boundary.num_components = 1;
            m.betti_abs_declared = {1, 0, 0};
            m.betti_rel_declared = {0, 0, 1};
            break;
        }
        case ModelKind::annulus: {
            RingMesh rm = annulus_mesh(resolution, collar_width);
            md = std::move(rm.md);
            m.boundary.kind = BoundaryManifold::Kind::circles;
            m.boundary.dim = 1;
            m.boundary.num_components = 2;
            m.betti_abs_declared = {1, 1, 0};
            m.betti_rel_declared = {0, 1, 1};
            break;
        }
        case ModelKind::solid_torus: {
            TorusMesh tmesh = torus_mesh(resolution, collar_width);
            md = std::move(tmesh.md);
            m.boundary.kind = BoundaryManifold::Kind::torus;
            m.boundary.dim = 2;
            m.boundary.num_components = 1;
            m.betti_abs_declared = {1, 1, 0, 0};
            m.betti_rel_declared = {0, 0, 1, 1};
            break;
        }
    }
    m.complex = simplicial::build_from_top_simplices(md.num_vertices, md.tops, md.orientations);
    m.vertex_chart = std::move(md.chart);
    m.abs_cochain = simplicial::build_cochain_complex(m.complex, simplicial::Flavor::absolute);
    m.rel_cochain = simplicial::build_cochain_complex(m.complex, simplicial::Flavor::relative);
    m.boundary.orientation = component_orientations(m);
    attach_generators(m);
    return m;
}

ModelManifold build_model(const std::string& name) {
    const ModelDescriptor& d = descriptor(name);
    return build_model(name, d.default_resolution, d.default_collar);
}

BoundaryManifold boundary_of(const ModelManifold& m) { return m.boundary; }

std::string serialize_catalog_entry(const ModelManifold& m) {
    std::ostringstream os;
    os.precision(17);
    os << "model " << m.name << "\n";
    os << "  kind ";
    switch (m.kind) {
        case ModelKind::interval: os << "interval"; break;
        case ModelKind::disk: os << "disk"; break;
        case ModelKind::annulus: os << "annulus"; break;
        case ModelKind::solid_torus: os << "solid_torus"; break;
    }
    os << "\n  dim " << m.dim << "\n  resolution " << m.resolution
       << "\n  collar_width " << m.collar_width << "\n  length " << m.length << "\n";
    os << "  boundary ";
    switch (m.boundary.kind) {
        case BoundaryManifold::Kind::points: os << "points"; break;
        case BoundaryManifold::Kind::circles: os << "circles"; break;
        case BoundaryManifold::Kind::torus: os << "torus"; break;
    }
    os << " components=" << m.boundary.num_components << " circumference="
       << m.boundary.circumference << " orientations=";
    for (int i = 0; i < m.boundary.num_components; ++i)
        os << (i ? "," : "") << (m.boundary.orientation[i] > 0 ? "+1" : "-1");
    os << "\n  simplices ";
    auto counts = m.complex.count_per_dim();
    for (std::size_t i = 0; i < counts.size(); ++i) os << (i ? "," : "") << counts[i];
    os << "\n  betti_abs ";
    for (std::size_t i = 0; i < m.betti_abs_declared.size(); ++i)
        os << (i ? "," : "") << m.betti_abs_declared[i];
    os << "\n  betti_rel ";
    for (std::size_t i = 0; i < m.betti_rel_declared.size(); ++i)
        os << (i ? "," : "") << m.betti_rel_declared[i];
    os << "\n";
    for (const auto& g : m.abs_generators)
        os << "  generator absolute degree=" << g.degree << " kind=" << g.kind << "\n";
    for (const auto& g : m.rel_generators)
        os << "  generator relative degree=" << g.degree << " kind=" << g.kind << "\n";
    os << "end\n";
    return os.str();
}

std::string export_off(const ModelManifold& m) {
    std::ostringstream os;
    os.precision(12);
    const auto& sc = m.complex;
    // embed charts in R^3 for inspection
    auto embed = [&](const geo::Vec& p) {
        switch (m.kind) {
            case ModelKind::interval: return geo::Vec(p[0], 0.0, 0.0);
            case ModelKind::disk: return geo::Vec(p[0], p[1], 0.0);
            case ModelKind::annulus:
                return geo::Vec(std::cos(p[1]), std::sin(p[1]), p[0]);
            case ModelKind::solid_torus: {
                double r = std::sqrt(sq(p[0]) + sq(p[1]));
                double th = std::atan2(p[1], p[0]);
                double R = 2.0;
                return geo::Vec((R + r * std::cos(th)) * std::cos(p[2]),
                                (R + r * std::cos(th)) * std::sin(p[2]), r * std::sin(th));
            }
        }
        return geo::Vec(0.0, 0.0, 0.0);
    };
    int nfaces = m.dim >= 2 ? static_cast<int>(sc.simplices[2].size())
                            : static_cast<int>(sc.simplices[1].size());
    os << "OFF\n" << sc.num_vertices << " " << nfaces << " 0\n";
    for (int v = 0; v < sc.num_vertices; ++v) {
        geo::Vec e = embed(m.vertex_chart[v]);
        os << e[0] << " " << e[1] << " " << e[2] << "\n";
    }
    if (m.dim >= 2) {
        for (const auto& t : sc.simplices[2])
            os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    } else {
        for (const auto& t : sc.simplices[1]) os << "2 " << t[0] << " " << t[1] << "\n";
    }
    return os.str();
}

ValidationReport validate_model(const ModelManifold& m) {
    ValidationReport rep;
    auto check = [&rep](bool ok, const std::string& name) {
        rep.checks.push_back(name + (ok ? ": ok" : ": FAIL"));
        if (!ok) {
            rep.ok = false;
            rep.failures.push_back(name);
        }
    };
    const auto& sc = m.complex;

    // del o del = 0 exactly
    for (int q = sc.dim; q >= 2; --q) {
        auto prod = la::multiply(sc.boundary_matrix(q - 1), sc.boundary_matrix(q));
        check(la::is_zero(prod), "boundary^2 = 0 at q=" + std::to_string(q));
    }
    // d o d = 0 exactly for both flavors
    for (const auto* cc : {&m.abs_cochain, &m.rel_cochain}) {
        for (int q = 0; q + 1 < sc.dim; ++q) {
            auto prod = la::multiply(cc->d[q + 1], cc->d[q]);
            check(la::is_zero(prod),
                  std::string(cc->flavor == simplicial::Flavor::absolute ? "abs" : "rel") +
                      " d^2 = 0 at q=" + std::to_string(q));
        }
    }

    // betti numbers vs declared + rank-nullity bookkeeping
    auto babs = m.abs_cochain.betti();
    auto brel = m.rel_cochain.betti();
    check(babs == m.betti_abs_declared, "absolute betti match");
    check(brel == m.betti_rel_declared, "relative betti match");
    {
        la::Rref r0 = la::rref(m.abs_cochain.d[0]);
        check(static_cast<int>(r0.free_cols.size()) + r0.rank() == m.abs_cochain.dims[0],
              "rank-nullity bookkeeping");
    }

    // Lefschetz duality count
    bool dual = true;
    for (int q = 0; q <= m.dim; ++q) dual = dual && brel[q] == babs[m.dim - q];
    check(dual, "duality dim H^q(M,Y) = dim H^{m-q}(M)");

    // fundamental boundary is supported on the boundary subcomplex
    {
        la::SparseVec bnd = simplicial::fundamental_boundary(sc);
        bool ok = true;
        for (const auto& [id, v] : bnd) ok = ok && sc.on_boundary[sc.dim - 1][id];
        check(ok, "fundamental chain boundary lies on the boundary subcomplex");
    }

    // simplicial pairing matrix = identity, per degree and flavor
    auto pairing_ok = [&](const std::vector<Generator>& gens, const std::vector<DualCycle>& cycles,
                          const simplicial::CochainComplex& cc) {
        bool ok = true;
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t j = 0; j < cycles.size(); ++j) {
                if (gens[i].degree != cycles[j].degree) continue;
                Rat p = simplicial::evaluate_cochain(cc, gens[i].degree, gens[i].cochain,
                                                     cycles[j].chain);
                ok = ok && p == (i == j ? Rat(1) : Rat(0));
            }
        return ok;
    };
    check(pairing_ok(m.abs_generators, m.abs_cycles, m.abs_cochain),
          "absolute generator/cycle pairing = identity (exact)");
    check(pairing_ok(m.rel_generators, m.rel_cycles, m.rel_cochain),
          "relative generator/cycle pairing = identity (exact)");

    // generators are cocycles
    {
        bool ok = true;
        for (const auto& g : m.abs_generators) {
            auto img = m.abs_cochain.d[g.degree].apply_dense(g.cochain);
            for (const auto& v : img) ok = ok && v == 0;
        }
        for (const auto& g : m.rel_generators) {
            auto img = m.rel_cochain.d[g.degree].apply_dense(g.cochain);
            for (const auto& v : img) ok = ok && v == 0;
        }
        check(ok, "generator cochains are closed");
    }

    // analytic pairing within 1e-8
    {
        double worst = 0.0;
        auto analytic_pair = [&](const Generator& g, const DualCycle& c) -> double {
            if (g.kind == "constant" && c.kind == "point") return 1.0;
            if (g.kind == "angle" && c.kind == "core_loop") {
                // integrate the pullback of the angle form along the core loop
                auto at = [&](double t) {
                    geo::Vec p = m.kind == ModelKind::annulus ? geo::Vec(0.5, t)
                                                              : geo::Vec(0.0, 0.0, t);
                    auto coeff = m.eval_generator(g, p);
                    return coeff[m.kind == ModelKind::annulus ? 1 : 2];
                };
                return num::integrate_gl(at, 0.0, kTwoPi, 64);
            }
            // the bump profiles are polynomial on their supports, so
            // quadrature over the exact support is Gauss-exact
            const double eps = m.collar_width;
            const double w1d = std::min(0.3, 0.4 * (1.0 - 2.0 * eps));
            const double r0 = 0.6 * (1.0 - eps);
            if (g.kind == "crossing" && c.kind == "cross_path") {
                return num::integrate_gl(
                    [&](double s) { return m.eval_generator(g, geo::Vec(s, 0.0))[0]; },
                    0.5 - w1d, 0.5 + w1d, 32);
            }
            if (g.kind == "crossing" && c.kind == "meridian_disk") {
                // b(x,y) dx dy over the phi=0 slice, radially
                return num::integrate_gl(
                    [&](double r) {
                        return r * kTwoPi * m.eval_generator(g, geo::Vec(r, 0.0, 0.0))[0];
                    },
                    0.0, r0, 32);
            }
            if (g.kind == "top_bump" && c.kind == "fundamental") {
                switch (m.kind) {
                    case ModelKind::interval: {
                        double w = std::min(0.3 * m.length, 0.4 * (m.length - 2.0 * eps));
                        return num::integrate_gl(
                            [&](double x) { return m.eval_generator(g, geo::Vec(x))[0]; },
                            m.length / 2.0 - w, m.length / 2.0 + w, 32);
                    }
                    case ModelKind::disk:
                        return num::integrate_gl(
                            [&](double r) {
                                return r * kTwoPi * m.eval_generator(g, geo::Vec(r, 0.0))[0];
                            },
                            0.0, r0, 32);
                    case ModelKind::annulus:
                        return kTwoPi * num::integrate_gl(
                                            [&](double s) {
                                                return m.eval_generator(g, geo::Vec(s, 0.0))[0];
                                            },
                                            0.5 - w1d, 0.5 + w1d, 32);
                    case ModelKind::solid_torus:
                        return kTwoPi *
                               num::integrate_gl(
                                   [&](double r) {
                                       return r * kTwoPi *
                                              m.eval_generator(g, geo::Vec(r, 0.0, 0.0))[0];
                                   },
                                   0.0, r0, 32);
                }
            }
            return 1.0;  // unreachable pairings are diagonal by construction
        };
        for (std::size_t i = 0; i < m.abs_generators.size(); ++i)
            worst = std::max(worst,
                             std::abs(analytic_pair(m.abs_generators[i], m.abs_cycles[i]) - 1.0));
        for (std::size_t i = 0; i < m.rel_generators.size(); ++i)
            worst = std::max(worst,
                             std::abs(analytic_pair(m.rel_generators[i], m.rel_cycles[i]) - 1.0));
        check(worst < 1e-8, "analytic generator/cycle pairing within 1e-8");
    }

    // collar extrusion: boundary Y-coordinates reappear at the u = eps level
    {
        bool ok = true;
        const double eps = m.collar_width;
        auto ycoord = [&](const geo::Vec& p) -> std::pair<double, double> {
            switch (m.kind) {
                case ModelKind::interval: return {0.0, 0.0};
                case ModelKind::disk: return {std::atan2(p[1], p[0]), 0.0};
                case ModelKind::annulus: return {p[1], 0.0};
                case ModelKind::solid_torus:
                    return {std::atan2(p[1], p[0]), p[2]};
            }
            return {0.0, 0.0};
        };
        for (int comp = 0; comp < m.boundary.num_components; ++comp) {
            std::vector<std::pair<double, double>> at0, atEps;
            for (int v = 0; v < sc.num_vertices; ++v) {
                if (m.collar_component(m.vertex_chart[v]) != comp) continue;
                double u = m.collar_u(m.vertex_chart[v]);
                if (std::abs(u) < 1e-10) at0.push_back(ycoord(m.vertex_chart[v]));
                else if (std::abs(u - eps) < 1e-10) atEps.push_back(ycoord(m.vertex_chart[v]));
            }
            auto canon = [](std::vector<std::pair<double, double>>& v) {
                for (auto& p : v) {
                    p.first = num::wrap_angle(p.first);
                    p.second = num::wrap_angle(p.second);
                }
                std::sort(v.begin(), v.end());
            };
            canon(at0);
            canon(atEps);
            ok = ok && !at0.empty() && at0.size() == atEps.size();
            for (std::size_t i = 0; ok && i < at0.size(); ++i)
                ok = ok && std::abs(at0[i].first - atEps[i].first) < 1e-9 &&
                     std::abs(at0[i].second - atEps[i].second) < 1e-9;
        }
        check(ok, "collar is an extruded product of the boundary mesh");
    }

    // boundary orientation structure
    if (m.kind == ModelKind::annulus || m.kind == ModelKind::interval) {
        check(m.boundary.orientation[0] * m.boundary.orientation[1] == -1,
              "two boundary components carry opposite induced orientations");
    }
    check(m.boundary.total_harmonic_dim() % 2 == 0, "dim H*(Y) is even");

    return rep;
}

}  // namespace leflab::catalog
