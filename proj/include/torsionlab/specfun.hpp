#ifndef TORSIONLAB_SPECFUN_HPP
#define TORSIONLAB_SPECFUN_HPP

#include <vector>

namespace torsionlab {

double gamma_fn(double x);
double beta_fn(double x, double y);

// Solution g of Gegenbauer's equation
//   (z^2 - 1) g'' + (2 nu + 1) z g' - alpha (alpha + 2 nu) g = 0
// normalised by g(-1) = 1, g'(-1) = -alpha(alpha + 2 nu)/(2 nu + 1),
// evaluated at z in (-1, 1].  Power series about z = -1 up to order 8,
// stepping in at s0 = 1e-3, then adaptive high-order integration.
double gegenbauer_eval(double alpha, double nu, double z);

// Corner exponent alpha_theta for the spherical cap of half-angle theta in
// S^{n-1}: the unique positive root of alpha (alpha + n - 2) = Lambda_theta,
// equivalently the first positive zero of alpha -> g_alpha^{(n-2)/2}(-cos theta).
struct CornerExponent {
    int n;
    double theta;
    double alpha;
    double lambda;
};

CornerExponent corner_exponent(int n, double theta);

// Same computation with the n = 2 / n = 4 closed forms bypassed (used to
// cross-check the numeric path against pi/(2 theta) and pi/theta - 1).
CornerExponent corner_exponent_numeric(int n, double theta);

// First Dirichlet eigenpair of the Laplace-Beltrami operator on the cap of
// half-angle theta, tabulated on a uniform colatitude grid [0, theta] and
// rescaled to sup = 1.
struct CapEigenfunction {
    int n;
    double theta;
    double lambda;
    std::vector<double> grid;     // colatitude samples
    std::vector<double> values;   // phi on the grid, sup = 1
    std::vector<double> derivs;   // phi' on the grid (same normalisation)

    double eval(double t) const;  // linear interpolation
};

CapEigenfunction cap_eigen(int n, double theta, int grid = 257);

} // namespace torsionlab

#endif
