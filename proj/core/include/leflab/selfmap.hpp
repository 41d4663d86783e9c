// Condition-A self-maps on catalog models: collar form (u, y) -> (c*u, B(y))
// with a boundary isometry B, glued to a monotone interior profile. Fixed
// point search, classification, and local indices.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leflab/geometry.hpp"
#include "leflab/models.hpp"

namespace leflab::selfmap {

struct NotSimpleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Boundary isometries available per model family. Angles in radians.
// reflect acts as theta -> -theta (axis through theta = 0).
struct BoundaryIsometry {
    enum class Type {
        interval_identity,    // interval: fix both endpoints
        interval_swap,        // interval: exchange endpoints
        rotation,             // circles: theta -> theta + alpha on every component
        reflection,           // circles: theta -> -theta on every component
        swap_rotation,        // annulus: exchange circles, theta -> theta + alpha
        torus_rotation,       // torus: (theta, phi) -> (theta + alpha, phi + beta)
        meridian_reflection,  // torus: (theta, phi) -> (-theta, phi + beta)
        longitude_reflection  // torus: (theta, phi) -> (theta + alpha, -phi)
    };
    Type type = Type::rotation;
    double alpha = 0.0;
    double beta = 0.0;

    std::string name() const;
    static BoundaryIsometry parse(const std::string& text);
};

// A point of the boundary: component index plus intrinsic coordinates
// (empty for point components, {theta} for circles, {theta, phi} for tori).
struct BoundaryPoint {
    int component = 0;
    std::vector<double> y;
};

struct FixedPointRecord {
    geo::Vec location;           // chart coordinates
    bool on_boundary = false;
    geo::Mat jacobian;           // full m x m differential at the point
    int index = 0;               // sign det(I - df)
    double a_value = 0.0;        // boundary only; equals c under Condition A
    std::string classification;  // "attracting" | "repelling" | "" (interior)
};

// Interior profile shapes, realized as collar-exact linear pieces joined by
// monotone quintic Hermite segments. The crossing controls how many times
// the radial/axial profile meets the diagonal away from the collar.
struct ProfileSpec {
    enum class Kind { one_crossing, no_crossing };
    Kind kind = Kind::one_crossing;
    double interior_slope = 0.4;   // slope at the inner end (r=0 / left seam)
    double crossing = 0.5;         // requested diagonal crossing position
    double crossing_slope = 1.7;   // slope at the crossing (one_crossing only)
};

// Monotone C^1 scalar profile with a continuous piecewise-linear derivative.
// Between anchors (x, y, slope) the derivative ramps to a plateau whose level
// is solved from the integral constraint, so monotonicity holds by
// construction and anchor slopes/values are met exactly; anchor pairs whose
// slopes already match the mean (the collar pieces) stay exactly linear.
class Profile {
  public:
    struct Anchor {
        double x, y, d;
    };
    static Profile monotone_through(const std::vector<Anchor>& anchors);
    double eval(double x) const;
    double deriv(double x) const;
    bool monotone_increasing() const;
    bool monotone_decreasing() const;

  private:
    std::vector<double> xs_, ys_, ds_;  // derivative breakpoints, values, slopes
    int segment(double x) const;
};

struct ConditionAMap {
    const catalog::ModelManifold* model = nullptr;
    double c = 0.5;
    BoundaryIsometry b;
    ProfileSpec profile_spec;
    Profile profile;        // radial/axial profile in the model chart
    bool profile_decreasing = false;  // component-exchanging maps

    geo::Vec apply(const geo::Vec& p) const;
    geo::Mat jacobian(const geo::Vec& p) const;

    // B as a map on boundary points, its differential along Y, and its
    // isolated fixed points. Throws NotSimpleError when B fixes a positive-
    // dimensional set (e.g. a rotation by 0).
    BoundaryPoint apply_boundary(const BoundaryPoint& y) const;
    std::vector<BoundaryPoint> boundary_fixed_points() const;
    geo::Mat boundary_differential(const BoundaryPoint& y) const;  // (dim-1) block

    // Matrix of Lambda^q((df(x))^T) in the lex-ordered form basis.
    std::vector<std::vector<double>> pullback_operator(const geo::Vec& x, int q) const;
};

ConditionAMap make_condition_a_map(const catalog::ModelManifold& model, double c,
                                   const BoundaryIsometry& b, const ProfileSpec& spec);

struct ConditionACheck {
    bool pass = true;
    double worst_residual = 0.0;
    geo::Vec worst_point;
};

// Samples collar points and checks |f(u,y) - (c u, B(y))| < 1e-12.
ConditionACheck verify_condition_a(const ConditionAMap& map, int sample_count);

struct FixedPointSearch {
    std::vector<FixedPointRecord> records;
    std::vector<std::string> warnings;  // non-converged cells etc.
};

FixedPointSearch find_fixed_points(const ConditionAMap& map, int grid_resolution,
                                   double newton_tol);

// a-value and attracting/repelling classification of a boundary fixed point.
std::pair<double, std::string> classify_boundary_point(const ConditionAMap& map,
                                                       const BoundaryPoint& y);

int local_index(const ConditionAMap& map, const FixedPointRecord& rec);

inline constexpr double kSimplenessThreshold = 1e-8;
inline constexpr double kMergeRadius = 1e-6;

}  // namespace leflab::selfmap
