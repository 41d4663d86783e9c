// Heat-kernel side of the verification: cylinder kernels on the half-infinite
// collar under the two boundary conditions, Gaussian coefficient factors,
// boundary trace integrals (closed-form and quadrature routes), the glued
// interval parametrix with its exponential error, and localized interior
// fixed-point integrals.
//
// Time conventions. The boundary limit is evaluated in its half-infinite-
// cylinder reduction (Gaussian u-factors saturated); its only t-dependence is
// the equivariant spectral sums, so the Richardson extrapolation over the
// caller's t-grid is trivially stable. The interior integrals localize on a
// Gaussian of width ~ sqrt(2t)/sigma_min(I - df); the integrator maps the
// caller's t-grid linearly onto times where that Gaussian sits inside the
// integration box (a linear map keeps polynomial extrapolation over the
// caller's grid exact), and reports the scale it used.
#pragma once

#include <vector>

#include "leflab/models.hpp"
#include "leflab/selfmap.hpp"
#include "leflab/spectral.hpp"

namespace leflab::heat {

enum class BoundaryCondition { PminusL0, PplusL1 };

const char* to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& name);

enum class GaussianVariant {
    tangential_dirichlet,
    tangential_neumann,
    normal_dirichlet,
    normal_neumann
};

// (1/2)(1/|1-c| -+ 1/(1+c)), times c for the normal variants; the closed form
// of lim (1/sqrt(pi)) int_0^X (e^{-(c-1)^2 x^2} -+ e^{-(c+1)^2 x^2}) dx.
double gaussian_factor(double c, GaussianVariant v);

struct CylinderPoint {
    double u = 0.0;
    selfmap::BoundaryPoint y;
};

// Scalar u-profile of one spectral block:
// (1/sqrt(4 pi t)) (e^{-(u-v)^2/4t} -+ e^{-(u+v)^2/4t}), the sign fixed by the
// boundary condition and the parity of the block.
double block_u_factor(BoundaryCondition bc, spectral::Parity parity, double t, double u,
                      double v);

// Pointwise cylinder heat kernel as a matrix on the fiber basis of the
// q-forms at the two points: tangential components (Lambda^q of T*Y) first,
// then du ^ (Lambda^{q-1}) components. Truncation tail certified < 1e-12.
std::vector<std::vector<double>> cylinder_kernel_eval(const spectral::SpectralBasis& sb,
                                                      BoundaryCondition bc, int q, double t,
                                                      const CylinderPoint& x,
                                                      const CylinderPoint& z);

struct BtiResult {
    double reduced = 0.0;     // erf closed form in u times L^2 spectral sums
    double quadrature = 0.0;  // nested numerical quadrature over (u, y)
};

// int_Y int_0^{eps/7} Tr(T_q(x) E^cyl(t, f(x), x)) du dvol(y), both routes.
BtiResult boundary_trace_integral(const selfmap::ConditionAMap& map,
                                  const spectral::SpectralBasis& sb, BoundaryCondition bc,
                                  int q, double t);

// Saturated (half-infinite cylinder) value of the same integral: the
// Gaussian u-factors at their t->0 limits, spectral sums at time t.
double boundary_trace_saturated(const selfmap::ConditionAMap& map,
                                const spectral::SpectralBasis& sb, BoundaryCondition bc,
                                int q, double t);

struct CombinedBoundaryLimit {
    double extrapolated = 0.0;
    double residual = 0.0;
    std::vector<double> per_t;        // saturated alternating combination
    double closed_form_target = 0.0;  // (1/2) sum_{F_Y} sign det(I-df) + gap term
};

// Alternating even/odd combination of the boundary trace integrals,
// Richardson-extrapolated over t_grid, plus the closed-form target.
CombinedBoundaryLimit combined_boundary_limit(const selfmap::ConditionAMap& map,
                                              const spectral::SpectralBasis& sb,
                                              const std::vector<double>& t_grid);

// Sup over a sample grid of |exact kernel - glued parametrix| on an interval
// model, maximized over form degrees {0, 1}. The exact kernel comes from the
// method of images; the parametrix glues the two-end cylinder kernel and the
// doubled-circle kernel with the eps/7-breakpoint cutoffs.
double parametrix_error(const catalog::ModelManifold& interval_model, BoundaryCondition bc,
                        double t);

// Pointwise |exact - glued| at chart points (x, z), maximized over degrees.
double parametrix_pointwise_error(const catalog::ModelManifold& interval_model,
                                  BoundaryCondition bc, double t, double x, double z);

struct InteriorHeatCheck {
    double extrapolated = 0.0;
    double residual = 0.0;
    std::vector<double> per_t;
    double time_scale = 1.0;  // integration time = time_scale * grid value
    double box_radius = 0.0;
};

// t->0 extrapolation of int_{U_x} sum_q (-1)^q Tr(T_q(x) E~^q(t, f(x), x)) dx
// with the Euclidean kernel as the local model; compares to sign det(I-df).
// clearance_hint: distance to the nearest other fixed point (optional).
InteriorHeatCheck interior_index_heat_check(const selfmap::ConditionAMap& map,
                                            const selfmap::FixedPointRecord& fp,
                                            const std::vector<double>& t_grid,
                                            double clearance_hint = -1.0);

// Sup of the free-kernel Lefschetz integrand over sampled points of the
// region away from fixed points and the collar (the vanishing check), and
// the smallest displacement |f(x) - x| seen there (which sets the time scale
// at which the sup becomes negligible).
double w_region_sup(const selfmap::ConditionAMap& map, double t);
double w_region_min_displacement(const selfmap::ConditionAMap& map);

}  // namespace leflab::heat
