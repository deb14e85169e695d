#ifndef TORSIONLAB_MEASURES_HPP
#define TORSIONLAB_MEASURES_HPP

#include <functional>
#include <utility>
#include <vector>

#include "torsionlab/solver.hpp"

namespace torsionlab {

struct BetaIntegralResult {
    double beta = 0.0;
    double value = 0.0;
    double error_estimate = 0.0;
    // Partial values keyed by corner tag (-1 collects the bulk).
    std::vector<std::pair<int, double>> corner_contributions;
    // Quadrature refinement history: (effective h, value).
    std::vector<std::pair<double, double>> refinement_history;
    int clamped_nodes = 0;
    double skipped_area = 0.0;
    bool tainted = false;
};

// Integral of u_h^{-beta}: 7-point rule on interior triangles, Duffy-type
// treatment (exact radial factor, order-16 transverse rule) on triangles
// touching the zero set.
BetaIntegralResult beta_integral(const ScalarField& field, double beta);

// Same, restricted to triangles whose centroid satisfies `keep` (used for
// truncated integrals near cusps).
BetaIntegralResult beta_integral_over(const ScalarField& field, double beta,
                                      const std::function<bool(const Vec2&)>& keep);

// (integral of u, Dirichlet energy); both exact for the linear interpolant.
std::pair<double, double> torsional_rigidity(const ScalarField& field);

// |{x : u_h(x) < lambda}| computed exactly triangle by triangle.
double sublevel_measure(const ScalarField& field, double lambda);

// Least-squares slope of log |{u < lambda}| against log lambda.
double weak_type_exponent(const ScalarField& field, const std::vector<double>& lambda_grid);

// Right-hand side of the Mellin identity: beta int lambda^{-(beta+1)} |{u<lambda}| dlambda,
// on a geometric lambda grid with analytic head and tail.
double mellin_identity_value(const ScalarField& field, double beta, int grid_points = 400);

struct DistanceProfile {
    double alpha = 0.0;
    std::vector<double> radii;
    std::vector<double> omega_values;  // |{delta < r}| / r^alpha
};

DistanceProfile omega_profile(const Polygon& poly, double alpha,
                              const std::vector<double>& radii);

// Direct integral of delta^{-alpha} over the collar {delta < t}; exact
// (nearest-edge cell decomposition) for convex polygons, grid fallback
// otherwise.
double truncated_distance_integral(const Polygon& poly, double alpha, double t);

// Full integral of delta^{-alpha} over the polygon.
double distance_integral(const Polygon& poly, double alpha);

struct CoareaReport {
    double lhs = 0.0;  // direct integral over the collar
    double rhs = 0.0;  // omega_alpha(t) + alpha int_0^t omega_alpha(r)/r dr
    double gap = 0.0;  // |lhs - rhs| / |lhs|
};

CoareaReport coarea_check(const Polygon& poly, double alpha, double t);

struct AhlforsReport {
    double value = 0.0;      // integral of delta^{-alpha}
    double volume = 0.0;
    double perimeter = 0.0;
    double fitted_constant = 0.0;  // value / (|Omega|^{1-alpha} H^1(bdry)^alpha)
    bool isoperimetric_ok = true;  // |Omega| <= H^1(bdry)^2 / (4 pi), checked at alpha = 0
};

AhlforsReport ahlfors_bound_check(const Polygon& poly, double alpha);

// Exact integral of L(x)^{-p} over a triangle for an affine L with the given
// vertex values (all >= 0, p < 1).  Shared by the coarea path and used as an
// independent oracle for the beta-integral quadrature.
double triangle_linear_power_integral(double v0, double v1, double v2, double area, double p);

} // namespace torsionlab

#endif
