#ifndef TORSIONLAB_BARRIERS_HPP
#define TORSIONLAB_BARRIERS_HPP

#include <utility>

#include "torsionlab/geometry.hpp"
#include "torsionlab/specfun.hpp"

namespace torsionlab {

// Closed-form sub/supersolutions compared against the torsion function via
// the maximum principle, together with their exact beta-integrals.

// Planar sector barrier v_{theta,r} in polar coordinates:
//   ((pi/2theta)^2 - 4)^{-1} r^2 [ (rho/r)^2 - (rho/r)^{pi/(2theta)} ] cos(pi omega / (2 theta))
// with the logarithmic limit rho^2/4 log(r/rho) cos(2 omega) at theta = pi/4.
// Satisfies -Delta v = cos(pi omega / (2 theta)), vanishes on the sector boundary.
double sector_barrier(double theta, double r, double rho, double omega);

// The exact constant C(theta, beta) with
//   integral over S_{theta,r} of v_{theta,r}^{-beta} = C(theta, beta) r^{2(1-beta)}.
double sector_constant(double theta, double beta);
double sector_beta_integral_exact(double theta, double r, double beta);

// n-dimensional cone barrier over the spherical cap of half-angle theta and
// its radial constant c_n(theta, beta); the exact integral adds the cap
// factor  integral over the cap of phi^{-beta}.
double cone_barrier(int n, double theta, double r, double rho, double omega_colatitude);
double cone_constant(int n, double theta, double beta);
double cap_angular_integral(int n, double theta, double beta);
double cone_beta_integral_exact(int n, double theta, double r, double beta);

// Torsion function of the ball B(0, R) in R^n: (R^2 - |x|^2) / (2n).
double disk_solution(int n, double R, double dist_from_center);

// Triangle barrier (1/2) y (x tan(theta) - y) on the wedge {0 < y < x tan theta}.
double triangle_barrier(double theta, double x, double y);

// Slab barrier (1/2)(eps^2 - x_n^2) on the thin rectangle |x_n| < eps, and the
// exact 1-D constant  2^{1+beta} int_0^1 (1-t^2)^{-beta} dt  of its beta-integral
// per unit cross-section.
double slab_barrier(double epsilon, double xn);
double slab_beta_constant(double beta);

// Curvilinear-triangle barrier y (eps x^{1/(2 beta0 - 1)} - y); eps must satisfy
// eps^2 <= (2 beta0 - 1)^2 / (2 (1 - beta0)) so that -Delta v >= 1.
double curvilinear_barrier(double beta0, double epsilon, double x, double y);
double curvilinear_epsilon_bound(double beta0);
// Truncated integral of v^{-beta0} over {x > delta}: eps^{1-2 beta0} B(1-beta0, 1-beta0) log(1/delta).
double curvilinear_truncated_integral(double beta0, double epsilon, double delta);

// Cusp barrier eps^2 F(x_n)^2 - |x'|^2 (upper bound for u in the cusp).
double cusp_barrier(const CuspProfile& profile, const Vec2& x);

// Convex-corner pair: the tangent-ball paraboloid
//   v = (1/4) [ r^2 tan^2 theta - (x1 - r / cos theta)^2 - x2^2 ]
// and the harmonic w = rho^{pi/(2 theta)} cos(pi omega / (2 theta)).
struct CornerPair {
    double v_tangent;
    double w_harmonic;
};
CornerPair convex_corner_pair(double theta, double r, const Vec2& x);

// sup over |omega| < theta of w(r, omega) / v(r, omega), by 1-D maximisation.
double convex_corner_ratio_bound(double theta, double r);

} // namespace torsionlab

#endif
