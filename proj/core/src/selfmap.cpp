#include "leflab/selfmap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "leflab/numerics.hpp"
#include "leflab/parallel.hpp"

namespace leflab::selfmap {

using catalog::ModelKind;

namespace {

constexpr double kTwoPi = 2.0 * num::kPi;

bool angle_is_zero(double a) { return std::abs(num::wrap_angle(a)) < 1e-12; }

std::string format_point(const geo::Vec& p) {
    std::ostringstream os;
    os.precision(12);
    os << "(";
    for (int i = 0; i < p.dim; ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

}  // namespace

std::string BoundaryIsometry::name() const {
    std::ostringstream os;
    os.precision(12);
    switch (type) {
        case Type::interval_identity: return "identity";
        case Type::interval_swap: return "swap";
        case Type::rotation: os << "rotation:" << alpha; return os.str();
        case Type::reflection: return "reflection";
        case Type::swap_rotation: os << "swap:" << alpha; return os.str();
        case Type::torus_rotation: os << "torus-rotation:" << alpha << ":" << beta; return os.str();
        case Type::meridian_reflection: os << "meridian-reflection:" << beta; return os.str();
        case Type::longitude_reflection: os << "longitude-reflection:" << alpha; return os.str();
    }
    return "?";
}

BoundaryIsometry BoundaryIsometry::parse(const std::string& text) {
    BoundaryIsometry b;
    std::string head = text;
    std::vector<double> args;
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        head = text.substr(0, colon);
        std::string rest = text.substr(colon + 1);
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ':')) args.push_back(std::stod(tok));
    }
    auto arg = [&](std::size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };
    if (head == "identity") b.type = Type::interval_identity;
    else if (head == "swap" && args.empty()) b.type = Type::interval_swap;
    else if (head == "rotation") { b.type = Type::rotation; b.alpha = arg(0, num::kPi / 4); }
    else if (head == "reflection") b.type = Type::reflection;
    else if (head == "swap") { b.type = Type::swap_rotation; b.alpha = arg(0, num::kPi / 4); }
    else if (head == "torus-rotation") {
        b.type = Type::torus_rotation;
        b.alpha = arg(0, num::kPi / 4);
        b.beta = arg(1, num::kPi / 4);
    } else if (head == "meridian-reflection") {
        b.type = Type::meridian_reflection;
        b.beta = arg(0, num::kPi / 3);
    } else if (head == "longitude-reflection") {
        b.type = Type::longitude_reflection;
        b.alpha = arg(0, num::kPi / 3);
    } else {
        throw std::invalid_argument("unknown boundary isometry: " + text);
    }
    return b;
}

// ------------------------------------------------------------------
// Profile

Profile Profile::monotone_through(const std::vector<Anchor>& anchors) {
    if (anchors.size() < 2) throw std::invalid_argument("Profile: need at least two anchors");
    for (std::size_t i = 1; i < anchors.size(); ++i)
        if (!(anchors[i].x > anchors[i - 1].x))
            throw std::invalid_argument("Profile: anchors not increasing in x");

    Profile p;
    auto push = [&p](double x, double d) {
        if (!p.xs_.empty() && x <= p.xs_.back() + 1e-15) return;  // merge coincident
        p.xs_.push_back(x);
        p.ds_.push_back(d);
    };
    p.xs_.push_back(anchors[0].x);
    p.ds_.push_back(anchors[0].d);

    for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
        const Anchor& a = anchors[i];
        const Anchor& b = anchors[i + 1];
        double gap = b.x - a.x;
        double dy = b.y - a.y;
        double mean = dy / gap;
        if (mean == 0.0) throw std::invalid_argument("Profile: flat segment");
        double sgn = mean > 0 ? 1.0 : -1.0;
        if (sgn * a.d <= 0 || sgn * b.d <= 0)
            throw std::invalid_argument("Profile: anchor slope against the segment direction");
        if (std::abs(a.d - mean) < 1e-13 && std::abs(b.d - mean) < 1e-13) {
            // exactly linear segment (collar pieces)
            push(b.x, b.d);
            continue;
        }
        // ramp a.d -> s_m over w, plateau, ramp s_m -> b.d over w; the
        // plateau level comes from the integral constraint
        double w = gap / 4.0;
        double sm = 0.0;
        for (int tries = 0; tries < 60; ++tries) {
            sm = (dy - 0.5 * (a.d + b.d) * w) / (gap - w);
            if (sgn * sm >= 0.05 * std::abs(mean)) break;
            w *= 0.5;
        }
        if (sgn * sm <= 0) throw std::invalid_argument("Profile: segment not realizable");
        push(a.x + w, sm);
        push(b.x - w, sm);
        push(b.x, b.d);
    }

    // integrate the piecewise-linear derivative through the breakpoints
    p.ys_.resize(p.xs_.size());
    p.ys_[0] = anchors[0].y;
    for (std::size_t j = 1; j < p.xs_.size(); ++j) {
        double h = p.xs_[j] - p.xs_[j - 1];
        p.ys_[j] = p.ys_[j - 1] + 0.5 * (p.ds_[j] + p.ds_[j - 1]) * h;
    }
    // anchors are hit exactly up to roundoff
    if (std::abs(p.ys_.back() - anchors.back().y) > 1e-9)
        throw std::logic_error("Profile: integral constraint violated");
    return p;
}

int Profile::segment(double x) const {
    int lo = 0, hi = static_cast<int>(xs_.size()) - 2;
    if (x <= xs_.front()) return 0;
    if (x >= xs_.back()) return hi;
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        if (xs_[mid] <= x) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

namespace {
// derivative ramps follow the quintic smoothstep, so the derivative path is
// C^2 across breakpoints and the profile is C^3; the segment integral still
// equals the trapezoid (the smoothstep has mean 1/2)
double smoothstep5(double t) { return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t); }
double smoothstep5_integral(double t) {
    double t4 = t * t * t * t;
    return t4 * (2.5 - 3.0 * t + t * t);
}
}  // namespace

double Profile::eval(double x) const {
    int s = segment(x);
    double h = xs_[s + 1] - xs_[s];
    double t = (x - xs_[s]) / h;
    return ys_[s] + ds_[s] * h * t + (ds_[s + 1] - ds_[s]) * h * smoothstep5_integral(t);
}

double Profile::deriv(double x) const {
    int s = segment(x);
    double h = xs_[s + 1] - xs_[s];
    double t = (x - xs_[s]) / h;
    return ds_[s] + (ds_[s + 1] - ds_[s]) * smoothstep5(t);
}

bool Profile::monotone_increasing() const {
    for (double d : ds_)
        if (d < 0) return false;
    return true;
}

bool Profile::monotone_decreasing() const {
    for (double d : ds_)
        if (d > 0) return false;
    return true;
}

namespace {

// Count strict sign changes of prof(x) - x over the open check interval.
int diagonal_crossings(const Profile& p, double a, double b) {
    const int N = 4000;
    int changes = 0;
    int prev = 0;
    for (int i = 0; i <= N; ++i) {
        double x = a + (b - a) * i / N;
        double d = p.eval(x) - x;
        int s = d > 1e-13 ? 1 : (d < -1e-13 ? -1 : 0);
        if (s != 0) {
            if (prev != 0 && s != prev) ++changes;
            prev = s;
        }
    }
    return changes;
}

Profile build_profile(const catalog::ModelManifold& model, double c,
                      const BoundaryIsometry& b, const ProfileSpec& spec,
                      bool& decreasing_out) {
    const double eps = model.collar_width;
    std::vector<Profile::Anchor> a;
    bool decreasing = false;

    switch (model.kind) {
        case ModelKind::interval: {
            const double L = model.length;
            if (b.type == BoundaryIsometry::Type::interval_identity) {
                if (c * eps >= L / 2.0)
                    throw std::invalid_argument("collar image overlaps: need c*eps < L/2");
                a = {{0.0, 0.0, c}, {eps, c * eps, c}};
                double xc = spec.crossing * L;
                if (xc > eps * 1.5 && xc < L - eps * 1.5)
                    a.push_back({xc, xc, spec.crossing_slope});
                a.push_back({L - eps, L - c * eps, c});
                a.push_back({L, L, c});
            } else {  // endpoint swap: decreasing profile
                decreasing = true;
                a = {{0.0, L, -c},
                     {eps, L - c * eps, -c},
                     {L / 2.0, L / 2.0, -std::abs(spec.crossing_slope)},
                     {L - eps, c * eps, -c},
                     {L, 0.0, -c}};
            }
            break;
        }
        case ModelKind::disk:
        case ModelKind::solid_torus: {
            // radial profile on [0, 1]; collar piece rho(r) = 1 - c(1-r)
            a = {{0.0, 0.0, spec.interior_slope}};
            if (spec.kind == ProfileSpec::Kind::one_crossing) {
                double rc = spec.crossing;
                if (rc < 0.05 || rc > 1.0 - eps - 0.05)
                    throw std::invalid_argument("profile crossing outside the interior region");
                a.push_back({rc, rc, spec.crossing_slope});
            } else {
                // hold the no-crossing profile strictly below the diagonal
                double rm = 0.5 * (1.0 - eps);
                double vm = c < 1 ? std::min(0.8 * rm, 0.5 * (1.0 - c * eps))
                                  : 0.5 * (1.0 - c * eps) * rm / (1.0 - eps);
                a.push_back({rm, vm, std::max(0.1, vm / rm)});
            }
            a.push_back({1.0 - eps, 1.0 - c * eps, c});
            a.push_back({1.0, 1.0, c});
            break;
        }
        case ModelKind::annulus: {
            if (b.type == BoundaryIsometry::Type::swap_rotation) {
                decreasing = true;
                a = {{0.0, 1.0, -c},
                     {eps, 1.0 - c * eps, -c},
                     {0.5, 0.5, -std::abs(spec.crossing_slope)},
                     {1.0 - eps, c * eps, -c},
                     {1.0, 0.0, -c}};
            } else {
                if (c * eps >= 0.5)
                    throw std::invalid_argument("collar image overlaps: need c*eps < 1/2");
                a = {{0.0, 0.0, c},
                     {eps, c * eps, c},
                     {spec.crossing, spec.crossing, spec.crossing_slope},
                     {1.0 - eps, 1.0 - c * eps, c},
                     {1.0, 1.0, c}};
            }
            break;
        }
    }
    decreasing_out = decreasing;
    return Profile::monotone_through(a);
}

void validate_profile(const catalog::ModelManifold& model, double c,
                      const BoundaryIsometry& b, const ProfileSpec& spec,
                      const Profile& prof, bool decreasing) {
    const double eps = model.collar_width;
    if (decreasing) {
        if (!prof.monotone_decreasing()) throw std::invalid_argument("profile not monotone");
        return;
    }
    if (!prof.monotone_increasing()) throw std::invalid_argument("profile not monotone");
    // crossing pattern in the interior region
    double a, bnd;
    switch (model.kind) {
        case ModelKind::interval: a = eps; bnd = model.length - eps; break;
        case ModelKind::annulus: a = eps; bnd = 1.0 - eps; break;
        default: a = 0.02; bnd = 1.0 - eps; break;
    }
    int crossings = diagonal_crossings(prof, a + 1e-9, bnd - 1e-9);
    int expected;
    if (model.kind == ModelKind::interval || model.kind == ModelKind::annulus) {
        expected = 1;  // forced by the collar values on both ends
    } else {
        expected = spec.kind == ProfileSpec::Kind::one_crossing ? 1 : 0;
    }
    if (crossings != expected)
        throw std::invalid_argument("profile has " + std::to_string(crossings) +
                                    " diagonal crossings, expected " + std::to_string(expected));
}

geo::Mat planar_isometry(const BoundaryIsometry& b) {
    geo::Mat a = geo::Mat::identity(2);
    switch (b.type) {
        case BoundaryIsometry::Type::rotation:
        case BoundaryIsometry::Type::torus_rotation:
        case BoundaryIsometry::Type::longitude_reflection: {
            double al = b.alpha;
            a(0, 0) = std::cos(al);
            a(0, 1) = -std::sin(al);
            a(1, 0) = std::sin(al);
            a(1, 1) = std::cos(al);
            break;
        }
        case BoundaryIsometry::Type::reflection:
        case BoundaryIsometry::Type::meridian_reflection:
            a(1, 1) = -1.0;
            break;
        default:
            break;
    }
    return a;
}

}  // namespace

// ------------------------------------------------------------------
// ConditionAMap

geo::Vec ConditionAMap::apply(const geo::Vec& p) const {
    switch (model->kind) {
        case ModelKind::interval:
            return geo::Vec(profile.eval(p[0]));
        case ModelKind::disk: {
            double r = std::sqrt(p[0] * p[0] + p[1] * p[1]);
            double g = r > 1e-12 ? profile.eval(r) / r : profile.deriv(0.0);
            geo::Vec q = geo::apply(planar_isometry(b), p);
            return geo::Vec(g * q[0], g * q[1]);
        }
        case ModelKind::annulus: {
            double theta = b.type == BoundaryIsometry::Type::reflection ? -p[1] : p[1] + b.alpha;
            return geo::Vec(profile.eval(p[0]), num::wrap_angle(theta));
        }
        case ModelKind::solid_torus: {
            double r = std::sqrt(p[0] * p[0] + p[1] * p[1]);
            double g = r > 1e-12 ? profile.eval(r) / r : profile.deriv(0.0);
            geo::Vec xy(p[0], p[1]);
            geo::Vec q = geo::apply(planar_isometry(b), xy);
            double phi;
            switch (b.type) {
                case BoundaryIsometry::Type::torus_rotation: phi = p[2] + b.beta; break;
                case BoundaryIsometry::Type::meridian_reflection: phi = p[2] + b.beta; break;
                case BoundaryIsometry::Type::longitude_reflection: phi = -p[2]; break;
                default: phi = p[2]; break;
            }
            return geo::Vec(g * q[0], g * q[1], num::wrap_angle(phi));
        }
    }
    return p;
}

geo::Mat ConditionAMap::jacobian(const geo::Vec& p) const {
    switch (model->kind) {
        case ModelKind::interval: {
            geo::Mat j = geo::Mat::zero(1);
            j(0, 0) = profile.deriv(p[0]);
            return j;
        }
        case ModelKind::annulus: {
            geo::Mat j = geo::Mat::zero(2);
            j(0, 0) = profile.deriv(p[0]);
            j(1, 1) = b.type == BoundaryIsometry::Type::reflection ? -1.0 : 1.0;
            return j;
        }
        case ModelKind::disk:
        case ModelKind::solid_torus: {
            const int m = model->dim;
            double r = std::sqrt(p[0] * p[0] + p[1] * p[1]);
            geo::Mat a = planar_isometry(b);
            geo::Mat j = geo::Mat::zero(m);
            double g, gp;
            if (r > 1e-9) {
                g = profile.eval(r) / r;
                gp = (profile.deriv(r) * r - profile.eval(r)) / (r * r);
            } else {
                g = profile.deriv(0.0);
                gp = 0.0;  // the gp term enters as gp * O(r); negligible here
            }
            geo::Vec xy(p[0], p[1]);
            geo::Vec aq = geo::apply(a, xy);
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k)
                    j(i, k) = g * a(i, k) + (r > 1e-9 ? gp * aq[i] * p[k] / r : 0.0);
            if (m == 3) {
                j(2, 2) = b.type == BoundaryIsometry::Type::longitude_reflection ? -1.0 : 1.0;
            }
            return j;
        }
    }
    return geo::Mat::identity(model->dim);
}

BoundaryPoint ConditionAMap::apply_boundary(const BoundaryPoint& y) const {
    BoundaryPoint r = y;
    switch (b.type) {
        case BoundaryIsometry::Type::interval_identity: break;
        case BoundaryIsometry::Type::interval_swap: r.component = 1 - y.component; break;
        case BoundaryIsometry::Type::rotation: r.y[0] = num::wrap_angle(y.y[0] + b.alpha); break;
        case BoundaryIsometry::Type::reflection: r.y[0] = num::wrap_angle(-y.y[0]); break;
        case BoundaryIsometry::Type::swap_rotation:
            r.component = 1 - y.component;
            r.y[0] = num::wrap_angle(y.y[0] + b.alpha);
            break;
        case BoundaryIsometry::Type::torus_rotation:
            r.y[0] = num::wrap_angle(y.y[0] + b.alpha);
            r.y[1] = num::wrap_angle(y.y[1] + b.beta);
            break;
        case BoundaryIsometry::Type::meridian_reflection:
            r.y[0] = num::wrap_angle(-y.y[0]);
            r.y[1] = num::wrap_angle(y.y[1] + b.beta);
            break;
        case BoundaryIsometry::Type::longitude_reflection:
            r.y[0] = num::wrap_angle(y.y[0] + b.alpha);
            r.y[1] = num::wrap_angle(-y.y[1]);
            break;
    }
    return r;
}

std::vector<BoundaryPoint> ConditionAMap::boundary_fixed_points() const {
    std::vector<BoundaryPoint> out;
    const int ncomp = model->boundary.num_components;
    switch (b.type) {
        case BoundaryIsometry::Type::interval_identity:
            for (int c0 = 0; c0 < ncomp; ++c0) out.push_back({c0, {}});
            break;
        case BoundaryIsometry::Type::interval_swap:
            break;
        case BoundaryIsometry::Type::rotation:
            if (angle_is_zero(b.alpha))
                throw NotSimpleError("rotation by 0 fixes a whole boundary circle");
            break;
        case BoundaryIsometry::Type::reflection:
            for (int c0 = 0; c0 < ncomp; ++c0) {
                out.push_back({c0, {0.0}});
                out.push_back({c0, {num::kPi}});
            }
            break;
        case BoundaryIsometry::Type::swap_rotation:
            break;
        case BoundaryIsometry::Type::torus_rotation:
            if (angle_is_zero(b.alpha) && angle_is_zero(b.beta))
                throw NotSimpleError("torus rotation by (0,0) fixes the whole boundary");
            break;
        case BoundaryIsometry::Type::meridian_reflection:
            if (angle_is_zero(b.beta))
                throw NotSimpleError("meridian reflection with beta = 0 fixes boundary circles");
            break;
        case BoundaryIsometry::Type::longitude_reflection:
            if (angle_is_zero(b.alpha))
                throw NotSimpleError("longitude reflection with alpha = 0 fixes boundary circles");
            break;
    }
    return out;
}

geo::Mat ConditionAMap::boundary_differential(const BoundaryPoint& y) const {
    (void)y;
    const int k = model->dim - 1;
    geo::Mat d = geo::Mat::identity(std::max(k, 1));
    d.dim = k;
    switch (b.type) {
        case BoundaryIsometry::Type::reflection:
            d.dim = 1;
            d(0, 0) = -1.0;
            break;
        case BoundaryIsometry::Type::meridian_reflection:
            d.dim = 2;
            d(0, 0) = -1.0;
            d(1, 1) = 1.0;
            break;
        case BoundaryIsometry::Type::longitude_reflection:
            d.dim = 2;
            d(0, 0) = 1.0;
            d(1, 1) = -1.0;
            break;
        default:
            break;
    }
    return d;
}

std::vector<std::vector<double>> ConditionAMap::pullback_operator(const geo::Vec& x,
                                                                  int q) const {
    return geo::exterior_power(geo::transpose(jacobian(x)), q);
}

ConditionAMap make_condition_a_map(const catalog::ModelManifold& model, double c,
                                   const BoundaryIsometry& b, const ProfileSpec& spec) {
    if (c <= 0) throw std::invalid_argument("c must be positive");
    if (std::abs(c - 1.0) < 1e-12) throw std::invalid_argument("c must differ from 1");

    // B compatibility with the model's boundary
    auto bad = [&](const char* why) { throw std::invalid_argument(std::string(why)); };
    switch (b.type) {
        case BoundaryIsometry::Type::interval_identity:
        case BoundaryIsometry::Type::interval_swap:
            if (model.kind != ModelKind::interval) bad("interval isometry on non-interval model");
            break;
        case BoundaryIsometry::Type::rotation:
        case BoundaryIsometry::Type::reflection:
            if (model.kind != ModelKind::disk && model.kind != ModelKind::annulus)
                bad("circle isometry needs a circle boundary");
            break;
        case BoundaryIsometry::Type::swap_rotation:
            if (model.kind != ModelKind::annulus) bad("component swap needs two circles");
            break;
        case BoundaryIsometry::Type::torus_rotation:
        case BoundaryIsometry::Type::meridian_reflection:
        case BoundaryIsometry::Type::longitude_reflection:
            if (model.kind != ModelKind::solid_torus) bad("torus isometry needs a torus boundary");
            break;
    }

    ConditionAMap map;
    map.model = &model;
    map.c = c;
    map.b = b;
    map.profile_spec = spec;
    map.profile = build_profile(model, c, b, spec, map.profile_decreasing);
    validate_profile(model, c, b, spec, map.profile, map.profile_decreasing);

    // sampled self-map containment
    const int N = 500;
    for (int i = 0; i <= N; ++i) {
        geo::Vec p;
        switch (model.kind) {
            case ModelKind::interval: p = geo::Vec(model.length * i / N); break;
            case ModelKind::disk: p = geo::Vec(-1.0 + 2.0 * i / N, 0.1); break;
            case ModelKind::annulus: p = geo::Vec(1.0 * i / N, 0.3); break;
            case ModelKind::solid_torus: p = geo::Vec(-1.0 + 2.0 * i / N, 0.05, 0.7); break;
        }
        if (!model.in_domain(p, 1e-9)) continue;
        if (!model.in_domain(map.apply(p), 1e-9))
            throw std::invalid_argument("map image leaves the model at " + format_point(p));
    }
    return map;
}

ConditionACheck verify_condition_a(const ConditionAMap& map, int sample_count) {
    ConditionACheck out;
    const auto& model = *map.model;
    const double eps = model.collar_width;
    const int per_comp = std::max(1, sample_count / std::max(1, model.boundary.num_components));

    auto chart_of = [&](int comp, double u, double y0, double y1) -> geo::Vec {
        switch (model.kind) {
            case ModelKind::interval: return geo::Vec(comp == 0 ? u : model.length - u);
            case ModelKind::disk: return geo::Vec((1.0 - u) * std::cos(y0), (1.0 - u) * std::sin(y0));
            case ModelKind::annulus: return geo::Vec(comp == 0 ? u : 1.0 - u, y0);
            case ModelKind::solid_torus:
                return geo::Vec((1.0 - u) * std::cos(y0), (1.0 - u) * std::sin(y0), y1);
        }
        return geo::Vec();
    };

    for (int comp = 0; comp < model.boundary.num_components; ++comp) {
        for (int i = 0; i < per_comp; ++i) {
            double u = eps * (i + 0.5) / per_comp;
            double y0 = num::wrap_angle(kTwoPi * ((i * 7) % per_comp + 0.25) / per_comp);
            double y1 = num::wrap_angle(kTwoPi * ((i * 3) % per_comp + 0.5) / per_comp);
            geo::Vec p = chart_of(comp, u, y0, y1);
            geo::Vec fp = map.apply(p);
            BoundaryPoint by;
            by.component = comp;
            if (model.boundary.dim == 1) by.y = {y0};
            if (model.boundary.dim == 2) by.y = {y0, y1};
            BoundaryPoint img = map.apply_boundary(by);
            geo::Vec expect = chart_of(img.component, map.c * u, img.y.empty() ? 0.0 : img.y[0],
                                       img.y.size() > 1 ? img.y[1] : 0.0);
            double resid = model.chart_dist(fp, expect);
            if (resid > out.worst_residual) {
                out.worst_residual = resid;
                out.worst_point = p;
            }
        }
    }
    out.pass = out.worst_residual < 1e-12;
    return out;
}

namespace {

geo::Vec displacement(const ConditionAMap& map, const geo::Vec& p) {
    geo::Vec f = map.apply(p);
    geo::Vec d = f - p;
    const auto& model = *map.model;
    if (model.kind == ModelKind::annulus) d.v[1] = num::wrap_angle(d[1]);
    if (model.kind == ModelKind::solid_torus) d.v[2] = num::wrap_angle(d[2]);
    return d;
}

std::optional<geo::Vec> newton_from(const ConditionAMap& map, geo::Vec p, double tol) {
    const auto& model = *map.model;
    for (int it = 0; it < 80; ++it) {
        geo::Vec d = displacement(map, p);
        if (geo::norm(d) < tol) return p;
        geo::Mat j = map.jacobian(p) - geo::Mat::identity(model.dim);
        geo::Vec step;
        try {
            step = geo::solve(j, d);
        } catch (const std::runtime_error&) {
            return std::nullopt;
        }
        p = p - step;
        if (!model.in_domain(p, 0.05)) return std::nullopt;
        if (model.kind == ModelKind::annulus) p.v[1] = num::wrap_angle(p[1]);
        if (model.kind == ModelKind::solid_torus) p.v[2] = num::wrap_angle(p[2]);
    }
    return std::nullopt;
}

FixedPointRecord make_interior_record(const ConditionAMap& map, const geo::Vec& p) {
    FixedPointRecord rec;
    rec.location = p;
    rec.on_boundary = false;
    rec.jacobian = map.jacobian(p);
    geo::Mat imj = geo::Mat::identity(map.model->dim) - rec.jacobian;
    double d = geo::det(imj);
    if (std::abs(d) < kSimplenessThreshold)
        throw NotSimpleError("fixed point at " + format_point(p) +
                             " is not simple: |det(I - df)| = " + std::to_string(std::abs(d)));
    rec.index = d > 0 ? 1 : -1;
    return rec;
}

FixedPointRecord make_boundary_record(const ConditionAMap& map, const BoundaryPoint& y) {
    const auto& model = *map.model;
    FixedPointRecord rec;
    rec.on_boundary = true;
    rec.a_value = map.c;
    rec.classification = map.c < 1.0 ? "attracting" : "repelling";
    switch (model.kind) {
        case ModelKind::interval:
            rec.location = geo::Vec(y.component == 0 ? 0.0 : model.length);
            break;
        case ModelKind::disk:
            rec.location = geo::Vec(std::cos(y.y[0]), std::sin(y.y[0]));
            break;
        case ModelKind::annulus:
            rec.location = geo::Vec(y.component == 0 ? 0.0 : 1.0, y.y[0]);
            break;
        case ModelKind::solid_torus:
            rec.location = geo::Vec(std::cos(y.y[0]), std::sin(y.y[0]), y.y[1]);
            break;
    }
    // full differential in the (u, y) adapted frame: diag(c, dB_Y)
    geo::Mat db = map.boundary_differential(y);
    geo::Mat full = geo::Mat::zero(model.dim);
    full(0, 0) = map.c;
    for (int i = 0; i < db.dim; ++i)
        for (int k = 0; k < db.dim; ++k) full(i + 1, k + 1) = db(i, k);
    rec.jacobian = full;
    geo::Mat imj = geo::Mat::identity(model.dim) - full;
    double d = geo::det(imj);
    if (std::abs(d) < kSimplenessThreshold)
        throw NotSimpleError("boundary fixed point at " + format_point(rec.location) +
                             " is not simple");
    rec.index = d > 0 ? 1 : -1;
    return rec;
}

}  // namespace

FixedPointSearch find_fixed_points(const ConditionAMap& map, int grid_resolution,
                                   double newton_tol) {
    const auto& model = *map.model;
    FixedPointSearch out;

    // boundary fixed points, symbolically from B
    std::vector<FixedPointRecord> boundary;
    for (const auto& y : map.boundary_fixed_points())
        boundary.push_back(make_boundary_record(map, y));

    // interior search: grid cells with componentwise sign changes seed
    // Newton; cells are scanned in parallel chunks and merged in index order
    std::vector<geo::Vec> seeds;
    const int n = std::max(8, grid_resolution);
    auto add_seed_grid = [&](auto&& coord, int cells_total) {
        const int chunks = std::min(cells_total, 64);
        std::vector<std::vector<geo::Vec>> found(chunks);
        parallel_for(chunks, 0, [&](int chunk) {
            int lo = static_cast<int>(static_cast<long>(cells_total) * chunk / chunks);
            int hi = static_cast<int>(static_cast<long>(cells_total) * (chunk + 1) / chunks);
            for (int cell = lo; cell < hi; ++cell) {
                auto [center, corners] = coord(cell);
                if (!model.in_domain(center, 1e-9)) continue;
                bool all_inside = true;
                for (const auto& cr : corners)
                    all_inside = all_inside && model.in_domain(cr, 0.2);
                if (!all_inside) continue;
                bool candidate = true;
                for (int comp = 0; comp < model.dim && candidate; ++comp) {
                    bool pos = false, neg = false;
                    for (const auto& cr : corners) {
                        double v = displacement(map, cr)[comp];
                        pos = pos || v > -1e-14;
                        neg = neg || v < 1e-14;
                    }
                    candidate = pos && neg;
                }
                if (candidate) found[chunk].push_back(center);
            }
        });
        for (const auto& chunk_seeds : found)
            seeds.insert(seeds.end(), chunk_seeds.begin(), chunk_seeds.end());
    };

    switch (model.kind) {
        case ModelKind::interval: {
            const double L = model.length;
            add_seed_grid(
                [&](int cell) {
                    double x0 = L * cell / n, x1 = L * (cell + 1) / n;
                    return std::pair<geo::Vec, std::vector<geo::Vec>>(
                        geo::Vec(0.5 * (x0 + x1)), {geo::Vec(x0), geo::Vec(x1)});
                },
                n);
            break;
        }
        case ModelKind::disk: {
            add_seed_grid(
                [&](int cell) {
                    int i = cell / n, j = cell % n;
                    double x0 = -1.0 + 2.0 * i / n, x1 = -1.0 + 2.0 * (i + 1) / n;
                    double y0 = -1.0 + 2.0 * j / n, y1 = -1.0 + 2.0 * (j + 1) / n;
                    std::vector<geo::Vec> corners = {geo::Vec(x0, y0), geo::Vec(x1, y0),
                                                     geo::Vec(x0, y1), geo::Vec(x1, y1)};
                    return std::pair<geo::Vec, std::vector<geo::Vec>>(
                        geo::Vec(0.5 * (x0 + x1), 0.5 * (y0 + y1)), corners);
                },
                n * n);
            break;
        }
        case ModelKind::annulus: {
            add_seed_grid(
                [&](int cell) {
                    int i = cell / n, j = cell % n;
                    double s0 = 1.0 * i / n, s1 = 1.0 * (i + 1) / n;
                    double t0 = kTwoPi * j / n, t1 = kTwoPi * (j + 1) / n;
                    std::vector<geo::Vec> corners = {geo::Vec(s0, t0), geo::Vec(s1, t0),
                                                     geo::Vec(s0, t1), geo::Vec(s1, t1)};
                    return std::pair<geo::Vec, std::vector<geo::Vec>>(
                        geo::Vec(0.5 * (s0 + s1), 0.5 * (t0 + t1)), corners);
                },
                n * n);
            break;
        }
        case ModelKind::solid_torus: {
            add_seed_grid(
                [&](int cell) {
                    int i = cell / (n * n), rest = cell % (n * n);
                    int j = rest / n, k = rest % n;
                    double x0 = -1.0 + 2.0 * i / n, x1 = -1.0 + 2.0 * (i + 1) / n;
                    double y0 = -1.0 + 2.0 * j / n, y1 = -1.0 + 2.0 * (j + 1) / n;
                    double p0 = kTwoPi * k / n, p1 = kTwoPi * (k + 1) / n;
                    std::vector<geo::Vec> corners;
                    for (double xx : {x0, x1})
                        for (double yy : {y0, y1})
                            for (double pp : {p0, p1}) corners.push_back(geo::Vec(xx, yy, pp));
                    return std::pair<geo::Vec, std::vector<geo::Vec>>(
                        geo::Vec(0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.5 * (p0 + p1)), corners);
                },
                n * n * n);
            break;
        }
    }

    std::vector<geo::Vec> found;
    for (const auto& seed : seeds) {
        auto sol = newton_from(map, seed, newton_tol);
        if (!sol) {
            // only report when the seed really looked like a root basin
            if (geo::norm(displacement(map, seed)) < 0.5)
                out.warnings.push_back("newton did not converge from cell at " +
                                       format_point(seed));
            continue;
        }
        found.push_back(*sol);
    }

    // deterministic dedupe
    std::sort(found.begin(), found.end(), [](const geo::Vec& a, const geo::Vec& b) {
        for (int i = 0; i < a.dim; ++i) {
            if (a[i] < b[i] - 1e-13) return true;
            if (a[i] > b[i] + 1e-13) return false;
        }
        return false;
    });
    std::vector<geo::Vec> unique;
    for (const auto& p : found) {
        bool dup = false;
        for (const auto& q : unique) dup = dup || model.chart_dist(p, q) < kMergeRadius;
        if (!dup) unique.push_back(p);
    }

    out.records = boundary;
    for (const auto& p : unique) {
        double u = model.collar_u(p);
        if (u < 1e-6) {
            // collar fixed points exist only at u = 0; they are the B fixed
            // points already recorded. Match or flag.
            bool matched = false;
            for (const auto& rec : boundary)
                matched = matched || model.chart_dist(p, rec.location) < 1e-4;
            if (!matched)
                out.warnings.push_back("near-boundary root at " + format_point(p) +
                                       " has no matching boundary fixed point");
            continue;
        }
        out.records.push_back(make_interior_record(map, p));
    }

    // stable order: boundary first, then interior sorted by chart coordinates
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const FixedPointRecord& a, const FixedPointRecord& b) {
                         if (a.on_boundary != b.on_boundary) return a.on_boundary;
                         for (int i = 0; i < a.location.dim; ++i) {
                             if (a.location[i] < b.location[i] - 1e-13) return true;
                             if (a.location[i] > b.location[i] + 1e-13) return false;
                         }
                         return false;
                     });
    return out;
}

std::pair<double, std::string> classify_boundary_point(const ConditionAMap& map,
                                                       const BoundaryPoint& y) {
    BoundaryPoint img = map.apply_boundary(y);
    bool fixed = img.component == y.component;
    for (std::size_t i = 0; i < y.y.size() && fixed; ++i)
        fixed = fixed && std::abs(num::wrap_angle(img.y[i] - y.y[i])) < 1e-10;
    if (!fixed) throw std::invalid_argument("point is not a fixed point of B");
    return {map.c, map.c < 1.0 ? "attracting" : "repelling"};
}

int local_index(const ConditionAMap& map, const FixedPointRecord& rec) {
    geo::Mat imj = geo::Mat::identity(map.model->dim) - rec.jacobian;
    double d = geo::det(imj);
    if (std::abs(d) < kSimplenessThreshold)
        throw NotSimpleError("fixed point at " + format_point(rec.location) + " is not simple");
    return d > 0 ? 1 : -1;
}

}  // namespace leflab::selfmap
