#include "leflab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leflab/numerics.hpp"

namespace leflab::spectral {

using catalog::BoundaryManifold;
using catalog::ModelKind;
using selfmap::BoundaryIsometry;

namespace {

constexpr double kTwoPi = 2.0 * num::kPi;

int harmonic_coeff_size(const BoundaryManifold& y, int degree) {
    switch (y.kind) {
        case BoundaryManifold::Kind::points: return degree == 0 ? y.num_components : 0;
        case BoundaryManifold::Kind::circles:
            return (degree == 0 || degree == 1) ? y.num_components : 0;
        case BoundaryManifold::Kind::torus:
            if (degree == 1) return 2;
            return (degree == 0 || degree == 2) ? 1 : 0;
    }
    return 0;
}

// component permutation and per-component reflection signs of an isometry
struct IsometryShape {
    std::vector<int> perm;     // component i maps onto perm[i]
    double sgn_theta = 1.0;    // pullback sign on dtheta
    double sgn_phi = 1.0;      // pullback sign on dphi (torus)
};

IsometryShape isometry_shape(const BoundaryManifold& y, const BoundaryIsometry& b) {
    IsometryShape s;
    s.perm.resize(y.num_components);
    for (int i = 0; i < y.num_components; ++i) s.perm[i] = i;
    switch (b.type) {
        case BoundaryIsometry::Type::interval_swap:
        case BoundaryIsometry::Type::swap_rotation:
            if (y.num_components != 2)
                throw std::invalid_argument("component swap needs two components");
            s.perm = {1, 0};
            break;
        case BoundaryIsometry::Type::reflection:
            s.sgn_theta = -1.0;
            break;
        case BoundaryIsometry::Type::meridian_reflection:
            s.sgn_theta = -1.0;
            break;
        case BoundaryIsometry::Type::longitude_reflection:
            s.sgn_phi = -1.0;
            break;
        default:
            break;
    }
    return s;
}

}  // namespace

double harmonic_inner(const BoundaryManifold& y, const HarmonicForm& a, const HarmonicForm& b) {
    if (a.degree != b.degree) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.coeff.size(); ++i) s += a.coeff[i] * b.coeff[i];
    // the per-component basis forms all have |.|=1 pointwise, so the L^2
    // inner product is the coefficient product times the component volume
    return s * y.component_volume();
}

HarmonicForm hodge_star(const BoundaryManifold& y, const HarmonicForm& a) {
    HarmonicForm r;
    switch (y.kind) {
        case BoundaryManifold::Kind::points: {
            r.degree = 0;
            r.coeff.resize(a.coeff.size());
            for (int i = 0; i < y.num_components; ++i)
                r.coeff[i] = y.orientation[i] * a.coeff[i];
            return r;
        }
        case BoundaryManifold::Kind::circles: {
            r.degree = 1 - a.degree;
            r.coeff.resize(a.coeff.size());
            for (int i = 0; i < y.num_components; ++i)
                r.coeff[i] = y.orientation[i] * a.coeff[i];
            return r;
        }
        case BoundaryManifold::Kind::torus: {
            int orient = y.orientation[0];
            if (a.degree == 0) {
                r.degree = 2;
                r.coeff = {orient * a.coeff[0]};
            } else if (a.degree == 2) {
                r.degree = 0;
                r.coeff = {orient * a.coeff[0]};
            } else {
                // star dtheta = or * dphi, star dphi = -or * dtheta
                r.degree = 1;
                r.coeff = {-orient * a.coeff[1], orient * a.coeff[0]};
            }
            return r;
        }
    }
    return r;
}

HarmonicForm pullback_harmonic(const BoundaryManifold& y, const BoundaryIsometry& b,
                               const HarmonicForm& a) {
    IsometryShape s = isometry_shape(y, b);
    HarmonicForm r;
    r.degree = a.degree;
    r.coeff.assign(a.coeff.size(), 0.0);
    if (y.kind == BoundaryManifold::Kind::torus) {
        if (a.degree == 0) r.coeff[0] = a.coeff[0];
        else if (a.degree == 1) {
            r.coeff[0] = s.sgn_theta * a.coeff[0];
            r.coeff[1] = s.sgn_phi * a.coeff[1];
        } else {
            r.coeff[0] = s.sgn_theta * s.sgn_phi * a.coeff[0];
        }
        return r;
    }
    // component-indexed coefficients: (B^* a)|_i = sign * a|_{perm[i]}
    double sgn = a.degree == 1 ? s.sgn_theta : 1.0;
    for (int i = 0; i < y.num_components; ++i) r.coeff[i] = sgn * a.coeff[s.perm[i]];
    return r;
}

std::vector<HarmonicForm> KSplit::k_in_degree(int q) const {
    std::vector<HarmonicForm> out;
    for (const auto& h : k_basis)
        if (h.degree == q) out.push_back(h);
    return out;
}

std::vector<HarmonicForm> KSplit::star_k_in_degree(int q) const {
    std::vector<HarmonicForm> out;
    for (const auto& h : star_k_basis)
        if (h.degree == q) out.push_back(h);
    return out;
}

KSplit compute_k_split(const catalog::ModelManifold& model) {
    const BoundaryManifold& y = model.boundary;
    KSplit ks;

    // restrictions of absolute generators; the catalog's closed forms
    // restrict to harmonic representatives directly
    std::vector<HarmonicForm> raw;
    for (const auto& g : model.abs_generators) {
        HarmonicForm h;
        h.degree = g.degree;
        h.coeff.assign(harmonic_coeff_size(y, g.degree), 0.0);
        if (g.kind == "constant") {
            for (auto& c : h.coeff) c = 1.0;
        } else if (g.kind == "angle") {
            // annulus: dtheta/2pi restricts to dtheta/2pi on each circle;
            // solid torus: dphi/2pi restricts to dphi/2pi
            if (y.kind == BoundaryManifold::Kind::circles)
                for (auto& c : h.coeff) c = 1.0 / kTwoPi;
            else
                h.coeff = {0.0, 1.0 / kTwoPi};
        } else {
            continue;
        }
        raw.push_back(std::move(h));
    }

    // Gram-Schmidt (the raw list is already orthogonal per degree here)
    for (auto& h : raw) {
        HarmonicForm v = h;
        for (const auto& u : ks.k_basis) {
            double proj = harmonic_inner(y, v, u);
            if (u.degree != v.degree) continue;
            for (std::size_t i = 0; i < v.coeff.size(); ++i) v.coeff[i] -= proj * u.coeff[i];
        }
        double nrm = std::sqrt(harmonic_inner(y, v, v));
        if (nrm < 1e-8)
            throw std::runtime_error("harmonic projection produced a degenerate K vector");
        for (auto& c : v.coeff) c /= nrm;
        ks.k_basis.push_back(std::move(v));
    }
    for (const auto& u : ks.k_basis) {
        HarmonicForm sv = hodge_star(y, u);
        double nrm = std::sqrt(harmonic_inner(y, sv, sv));
        for (auto& c : sv.coeff) c /= nrm;
        ks.star_k_basis.push_back(std::move(sv));
    }

    // splitting invariants: K orthogonal to star K, dimensions add up
    for (const auto& a : ks.k_basis)
        for (const auto& b : ks.star_k_basis)
            if (std::abs(harmonic_inner(y, a, b)) > 1e-12)
                throw std::runtime_error("K and star K are not orthogonal");
    if (2 * ks.dim() != y.total_harmonic_dim())
        throw std::runtime_error("dim K != (1/2) dim H*(Y)");
    return ks;
}

std::vector<std::vector<double>> b_star_matrix(const BoundaryManifold& y,
                                               const BoundaryIsometry& b,
                                               const std::vector<HarmonicForm>& basis) {
    const int n = static_cast<int>(basis.size());
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        HarmonicForm img = pullback_harmonic(y, b, basis[j]);
        // expand in the basis; residual measures invariance violation
        HarmonicForm resid = img;
        for (int i = 0; i < n; ++i) {
            if (basis[i].degree != img.degree) continue;
            double c = harmonic_inner(y, img, basis[i]) / harmonic_inner(y, basis[i], basis[i]);
            m[i][j] = c;
            for (std::size_t t = 0; t < resid.coeff.size(); ++t)
                resid.coeff[t] -= c * basis[i].coeff[t];
        }
        double r2 = harmonic_inner(y, resid, resid);
        if (r2 > 1e-10)
            throw std::runtime_error("subspace is not B*-invariant (residual " +
                                     std::to_string(std::sqrt(r2)) + ")");
    }
    return m;
}

int orientation_sign(const BoundaryManifold& y, const BoundaryIsometry& b) {
    // sigma with B^* (star a) = sigma star (B^* a): the action of B^* on each
    // component's induced volume form, required to carry one common sign.
    // (The sign per component, not the determinant across components, is what
    // conjugates the Hodge star.)
    const int top = y.dim;
    const int n = harmonic_coeff_size(y, top);
    IsometryShape s = isometry_shape(y, b);
    double common = 0.0;
    if (y.kind == BoundaryManifold::Kind::torus) {
        common = s.sgn_theta * s.sgn_phi;
    } else {
        for (int i = 0; i < n; ++i) {
            HarmonicForm vol;
            vol.degree = top;
            vol.coeff.assign(n, 0.0);
            vol.coeff[s.perm[i]] = y.orientation[s.perm[i]];
            HarmonicForm img = pullback_harmonic(y, b, vol);
            double entry = img.coeff[i] / y.orientation[i];
            if (common == 0.0) common = entry;
            else if (std::abs(common - entry) > 1e-12)
                throw std::runtime_error(
                    "isometry has mixed orientation behavior across components");
        }
    }
    if (std::abs(std::abs(common) - 1.0) > 1e-12)
        throw std::runtime_error("orientation sign is not +-1");
    return common > 0 ? 1 : -1;
}

double compute_k0(const catalog::ModelManifold& model, const BoundaryIsometry& b) {
    int sigma = orientation_sign(model.boundary, b);
    KSplit ks = compute_k_split(model);
    auto mk = b_star_matrix(model.boundary, b, ks.k_basis);
    auto msk = b_star_matrix(model.boundary, b, ks.star_k_basis);
    double trk = 0, trsk = 0;
    for (std::size_t i = 0; i < mk.size(); ++i) trk += mk[i][i];
    for (std::size_t i = 0; i < msk.size(); ++i) trsk += msk[i][i];
    if (std::abs(trsk - sigma * trk) > 1e-9)
        throw std::runtime_error("Tr(B*|star K) != sigma Tr(B*|K): inconsistent orientation");
    return sigma == 1 ? 0.0 : trk;
}

double gap_term(const catalog::ModelManifold& model, const BoundaryIsometry& b) {
    KSplit ks = compute_k_split(model);
    auto mk = b_star_matrix(model.boundary, b, ks.k_basis);
    auto msk = b_star_matrix(model.boundary, b, ks.star_k_basis);
    double trk = 0, trsk = 0;
    for (std::size_t i = 0; i < mk.size(); ++i) trk += mk[i][i];
    for (std::size_t i = 0; i < msk.size(); ++i) trsk += msk[i][i];
    return 0.5 * (trsk - trk);
}

// ------------------------------------------------------------------
// SpectralBasis

SpectralBasis::SpectralBasis(const catalog::ModelManifold& model, double cutoff)
    : model_(&model), boundary_(&model.boundary), ksplit_(compute_k_split(model)),
      cutoff_(cutoff) {
    if (cutoff < 0) throw std::invalid_argument("cutoff must include the harmonic forms");
    const BoundaryManifold& y = *boundary_;

    // harmonic lines from the K split
    for (const auto& h : ksplit_.k_basis) {
        SpectralLine ln;
        ln.lambda = 0.0;
        ln.degree = h.degree;
        ln.parity = Parity::minus;
        ln.harmonic = true;
        ln.hform = h;
        lines_.push_back(std::move(ln));
    }
    for (const auto& h : ksplit_.star_k_basis) {
        SpectralLine ln;
        ln.lambda = 0.0;
        ln.degree = h.degree;
        ln.parity = Parity::plus;
        ln.harmonic = true;
        ln.hform = h;
        lines_.push_back(std::move(ln));
    }

    if (y.kind == BoundaryManifold::Kind::circles) {
        const int kmax = static_cast<int>(std::floor(std::sqrt(cutoff)));
        for (int comp = 0; comp < y.num_components; ++comp) {
            for (int k = 1; k <= kmax; ++k) {
                for (int trig = 0; trig < 2; ++trig) {
                    SpectralLine f;
                    f.lambda = static_cast<double>(k) * k;
                    f.degree = 0;
                    f.parity = Parity::plus;  // nonconstant functions are coexact
                    f.component = comp;
                    f.k = k;
                    f.trig = trig;
                    lines_.push_back(f);
                    SpectralLine w = f;
                    w.degree = 1;
                    w.parity = Parity::minus;  // nonharmonic 1-forms are exact
                    lines_.push_back(w);
                }
            }
        }
    } else if (y.kind == BoundaryManifold::Kind::torus) {
        const int kmax = static_cast<int>(std::floor(std::sqrt(cutoff)));
        for (int k = 0; k <= kmax; ++k) {
            for (int l = -kmax; l <= kmax; ++l) {
                if (k == 0 && l <= 0) continue;  // canonical reps: k>0, or k=0 & l>0
                double lam = static_cast<double>(k) * k + static_cast<double>(l) * l;
                if (lam > cutoff || lam == 0.0) continue;
                for (int trig = 0; trig < 2; ++trig) {
                    SpectralLine f;
                    f.lambda = lam;
                    f.k = k;
                    f.l = l;
                    f.trig = trig;
                    f.degree = 0;
                    f.parity = Parity::plus;
                    lines_.push_back(f);
                    SpectralLine ex = f;
                    ex.degree = 1;
                    ex.parity = Parity::minus;
                    ex.direction = 0;  // exact direction (k, l)/n
                    lines_.push_back(ex);
                    SpectralLine co = f;
                    co.degree = 1;
                    co.parity = Parity::plus;
                    co.direction = 1;  // coexact direction (-l, k)/n
                    lines_.push_back(co);
                    SpectralLine v = f;
                    v.degree = 2;
                    v.parity = Parity::minus;  // nonharmonic 2-forms are exact
                    lines_.push_back(v);
                }
            }
        }
    }

    std::stable_sort(lines_.begin(), lines_.end(), [](const SpectralLine& a, const SpectralLine& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.component != b.component) return a.component < b.component;
        if (a.k != b.k) return a.k < b.k;
        if (a.l != b.l) return a.l < b.l;
        if (a.direction != b.direction) return a.direction < b.direction;
        return a.trig < b.trig;
    });
}

int SpectralBasis::fiber_dim(int degree) const {
    switch (boundary_->kind) {
        case BoundaryManifold::Kind::points: return degree == 0 ? 1 : 0;
        case BoundaryManifold::Kind::circles: return degree == 0 || degree == 1 ? 1 : 0;
        case BoundaryManifold::Kind::torus:
            if (degree == 1) return 2;
            return degree == 0 || degree == 2 ? 1 : 0;
    }
    return 0;
}

double SpectralBasis::b_coefficient(const SpectralLine& line, const BoundaryIsometry& b) const {
    const BoundaryManifold& y = *boundary_;
    if (line.harmonic) {
        HarmonicForm img = pullback_harmonic(y, b, line.hform);
        return harmonic_inner(y, img, line.hform);
    }
    IsometryShape s = isometry_shape(y, b);
    if (y.kind == BoundaryManifold::Kind::circles) {
        if (s.perm[line.component] != line.component) return 0.0;  // component moves
        double form_sign = line.degree == 1 ? s.sgn_theta : 1.0;
        if (s.sgn_theta > 0) {
            // rotation by alpha: both trig modes pick up cos(k alpha)
            return form_sign * std::cos(line.k * b.alpha);
        }
        // reflection: cos -> cos, sin -> -sin
        double trig_sign = line.trig == 0 ? 1.0 : -1.0;
        return form_sign * trig_sign;
    }
    if (y.kind == BoundaryManifold::Kind::torus) {
        const double kk = line.k, ll = line.l;
        const double n2 = kk * kk + ll * ll;
        // target mode (sgn_theta*k, sgn_phi*l) must coincide with +-(k, l)
        double tk = s.sgn_theta * kk, tl = s.sgn_phi * ll;
        int sbranch;
        if (tk == kk && tl == ll) sbranch = +1;
        else if (tk == -kk && tl == -ll) sbranch = -1;
        else return 0.0;
        double psi = kk * b.alpha + ll * b.beta;
        // s=+1: both trig modes pick up cos(psi); s=-1: cos -> +cos(psi),
        // sin -> -cos(psi)
        double trig_factor = std::cos(psi);
        if (sbranch == -1 && line.trig == 1) trig_factor = -trig_factor;
        double dir_factor = 1.0;
        if (line.degree == 1) {
            if (line.direction == 0)
                dir_factor = (s.sgn_theta * kk * kk + s.sgn_phi * ll * ll) / n2;
            else
                dir_factor = (s.sgn_theta * ll * ll + s.sgn_phi * kk * kk) / n2;
        } else if (line.degree == 2) {
            dir_factor = s.sgn_theta * s.sgn_phi;
        }
        return trig_factor * dir_factor;
    }
    return 0.0;
}

double SpectralBasis::tail_bound(double t) const {
    const BoundaryManifold& y = *boundary_;
    if (y.kind == BoundaryManifold::Kind::points) return 0.0;
    if (y.kind == BoundaryManifold::Kind::circles) {
        int kmax = static_cast<int>(std::floor(std::sqrt(cutoff_)));
        double x = std::exp(-2.0 * t * kmax);
        double series = std::exp(-t * kmax * kmax) * x / (1.0 - x);
        return 4.0 * y.num_components * series;
    }
    // torus: 8 lines per lattice representative; disk-integral bound with a
    // shifted radius to dominate the lattice sum
    double rad = std::sqrt(cutoff_) - 1.5;
    if (rad < 0) rad = 0;
    double bound = (num::kPi / t + 4.0 * std::sqrt(cutoff_) + 8.0) * std::exp(-t * rad * rad);
    return 8.0 * bound;
}

double SpectralBasis::equivariant_trace(const BoundaryIsometry& b, int degree, Restriction r,
                                        double t) const {
    if (t <= 0) throw std::invalid_argument("equivariant_trace: t must be positive");
    if (tail_bound(t) > 1e-12)
        throw std::runtime_error(
            "equivariant_trace: tail bound exceeds 1e-12 at the configured cutoff");
    double s = 0.0;
    for (const auto& ln : lines_) {
        if (ln.degree != degree) continue;
        if (r == Restriction::minus && ln.parity != Parity::minus) continue;
        if (r == Restriction::plus && ln.parity != Parity::plus) continue;
        double coeff = b_coefficient(ln, b);
        if (coeff != 0.0) s += std::exp(-t * ln.lambda) * coeff;
    }
    return s;
}

std::vector<double> SpectralBasis::eval_line(const SpectralLine& line,
                                             const selfmap::BoundaryPoint& y) const {
    const BoundaryManifold& bd = *boundary_;
    const int fd = fiber_dim(line.degree);
    std::vector<double> out(fd, 0.0);
    if (line.harmonic) {
        switch (bd.kind) {
            case BoundaryManifold::Kind::points:
                out[0] = line.hform.coeff[y.component];
                break;
            case BoundaryManifold::Kind::circles:
                out[0] = line.hform.coeff[y.component];
                break;
            case BoundaryManifold::Kind::torus:
                for (int i = 0; i < fd; ++i) out[i] = line.hform.coeff[i];
                break;
        }
        // normalize: hform stored L^2-normalized over coefficients *and*
        // component volume, so pointwise values are the coefficients
        return out;
    }
    if (bd.kind == BoundaryManifold::Kind::circles) {
        if (y.component != line.component) return out;
        double th = y.y[0];
        double v = line.trig == 0 ? std::cos(line.k * th) : std::sin(line.k * th);
        out[0] = v / std::sqrt(num::kPi);
        return out;
    }
    if (bd.kind == BoundaryManifold::Kind::torus) {
        double m = line.k * y.y[0] + line.l * y.y[1];
        double v = line.trig == 0 ? std::cos(m) : std::sin(m);
        double nrm = num::kPi * std::sqrt(2.0);
        double n = std::sqrt(static_cast<double>(line.k) * line.k +
                             static_cast<double>(line.l) * line.l);
        if (line.degree == 0) {
            out[0] = v / nrm;
        } else if (line.degree == 1) {
            double a0, a1;
            if (line.direction == 0) {
                a0 = line.k / n;
                a1 = line.l / n;
            } else {
                a0 = -line.l / n;
                a1 = line.k / n;
            }
            out[0] = v * a0 / nrm;
            out[1] = v * a1 / nrm;
        } else {
            out[0] = v / nrm;
        }
        return out;
    }
    return out;
}

}  // namespace leflab::spectral
