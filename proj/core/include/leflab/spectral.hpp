// Boundary-side spectral structures: harmonic forms, the K / star_Y K
// splitting, the minus/plus parity decomposition of boundary forms, B^*
// actions, equivariant heat traces with certified tails, and the K0
// correction term.
//
// Parity convention: minus spans (Im d^Y ⊕ K) per degree, plus spans
// (Im (d^Y)* ⊕ star_Y K). Harmonic line parities therefore come from the
// model's K-split; nonharmonic parities are exact = minus, coexact = plus.
#pragma once

#include <vector>

#include "leflab/models.hpp"
#include "leflab/selfmap.hpp"

namespace leflab::spectral {

enum class Parity { minus, plus };
enum class Restriction { all, minus, plus };

// Harmonic form on Y as coefficients over the per-component harmonic basis:
//   points  deg 0: one coefficient per component
//   circles deg 0: constants per component; deg 1: dtheta per component
//   torus   deg 0: [1]; deg 1: [dtheta, dphi]; deg 2: [dtheta^dphi]
struct HarmonicForm {
    int degree = 0;
    std::vector<double> coeff;
};

double harmonic_inner(const catalog::BoundaryManifold& y, const HarmonicForm& a,
                      const HarmonicForm& b);

HarmonicForm hodge_star(const catalog::BoundaryManifold& y, const HarmonicForm& a);

HarmonicForm pullback_harmonic(const catalog::BoundaryManifold& y,
                               const selfmap::BoundaryIsometry& b, const HarmonicForm& a);

struct KSplit {
    std::vector<HarmonicForm> k_basis;       // orthonormal, all degrees
    std::vector<HarmonicForm> star_k_basis;  // orthonormal images under star
    std::vector<std::vector<double>> b_on_k; // filled by b_star_matrix on demand

    int dim() const { return static_cast<int>(k_basis.size()); }
    std::vector<HarmonicForm> k_in_degree(int q) const;
    std::vector<HarmonicForm> star_k_in_degree(int q) const;
};

// K^q = harmonic parts of the restrictions of the absolute generators.
KSplit compute_k_split(const catalog::ModelManifold& model);

// Matrix of B^* on the span of `basis` (which must be B^*-invariant within
// 1e-10, else throws std::runtime_error).
std::vector<std::vector<double>> b_star_matrix(const catalog::BoundaryManifold& y,
                                               const selfmap::BoundaryIsometry& b,
                                               const std::vector<HarmonicForm>& basis);

// Sign sigma with B^* ∘ star = sigma · star ∘ B^* on harmonic forms; +1 for
// orientation preserving, -1 for reversing. Throws when B mixes behaviors.
int orientation_sign(const catalog::BoundaryManifold& y, const selfmap::BoundaryIsometry& b);

// K0 of the main identity: 0 when B preserves orientation, else the trace of
// B^* on K (= Im iota^*).
double compute_k0(const catalog::ModelManifold& model, const selfmap::BoundaryIsometry& b);

// (1/2) (Tr B^*|star K - Tr B^*|K): the boundary gap term. Equals -K0.
double gap_term(const catalog::ModelManifold& model, const selfmap::BoundaryIsometry& b);

struct SpectralLine {
    double lambda = 0.0;
    int degree = 0;
    Parity parity = Parity::minus;
    bool harmonic = false;
    int component = 0;  // circles only
    int k = 0, l = 0;   // circle: k; torus: (k, l)
    int trig = 0;       // 0 = cos, 1 = sin (nonharmonic lines)
    int direction = 0;  // 0 scalar / exact-u / volume; 1 coexact-u (see .cpp)
    HarmonicForm hform; // harmonic lines only (normalized)
};

class SpectralBasis {
  public:
    SpectralBasis(const catalog::ModelManifold& model, double cutoff);

    const std::vector<SpectralLine>& lines() const { return lines_; }
    double cutoff() const { return cutoff_; }
    const catalog::BoundaryManifold& boundary() const { return *boundary_; }

    // Diagonal coefficient <B^* phi_j, phi_j>_{L^2(Y)} of one line.
    double b_coefficient(const SpectralLine& line, const selfmap::BoundaryIsometry& b) const;

    // Tr(B^* e^{-t Delta_Y^q}) restricted; truncation tail certified < 1e-12.
    double equivariant_trace(const selfmap::BoundaryIsometry& b, int degree, Restriction r,
                             double t) const;

    // Upper bound for the discarded tail of the trace at time t.
    double tail_bound(double t) const;

    // Eigenform value at a boundary point, as coefficients over the form
    // basis at that point (deg 0: [v]; deg 1 circle: [v_dtheta]; torus
    // deg 1: [v_dtheta, v_dphi]; deg 2 torus: [v_vol]).
    std::vector<double> eval_line(const SpectralLine& line,
                                  const selfmap::BoundaryPoint& y) const;

    // Dimension of the form fiber at a point of Y in the given degree.
    int fiber_dim(int degree) const;

  private:
    const catalog::ModelManifold* model_;
    const catalog::BoundaryManifold* boundary_;
    KSplit ksplit_;
    double cutoff_ = 0.0;
    std::vector<SpectralLine> lines_;
};

}  // namespace leflab::spectral
