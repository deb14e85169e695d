#include "torsionlab/barriers.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Tolerance for switching to the logarithmic limit branches.
constexpr double kBranchTol = 1e-8;

} // namespace

double sector_barrier(double theta, double r, double rho, double omega) {
    if (!(theta > 0 && theta < kPi)) throw std::domain_error("sector_barrier: theta in (0, pi)");
    if (!(r > 0)) throw std::domain_error("sector_barrier: r > 0");
    if (!(rho > 0 && rho < r)) throw std::domain_error("sector_barrier: rho in (0, r)");
    if (!(std::fabs(omega) <= theta)) throw std::domain_error("sector_barrier: |omega| <= theta");

    const double ang = std::cos(kPi * omega / (2.0 * theta));
    if (std::fabs(theta - kPi / 4.0) < kBranchTol)
        return 0.25 * rho * rho * std::log(r / rho) * std::cos(2.0 * omega);
    const double mu = kPi / (2.0 * theta);
    const double t = rho / r;
    return r * r * (std::pow(t, 2.0) - std::pow(t, mu)) / (mu * mu - 4.0) * ang;
}

double sector_constant(double theta, double beta) {
    if (!(theta > 0 && theta <= kPi)) throw std::domain_error("sector_constant: theta in (0, pi]");
    if (!(beta > 0 && beta < 1)) throw std::domain_error("sector_constant: beta in (0, 1)");

    const double angular = beta_fn(0.5, 0.5 * (1.0 - beta));
    if (std::fabs(theta - kPi / 4.0) <= kBranchTol) {
        return std::pow(2.0, 3.0 * beta - 2.0) * std::pow(1.0 / (1.0 - beta), 1.0 - beta) *
               gamma_fn(1.0 - beta) * angular;
    }
    const double mu = kPi / (2.0 * theta);
    if (theta < kPi / 4.0) {
        return std::pow(mu * mu - 4.0, beta) * (2.0 * theta) * (2.0 * theta) /
               (kPi * (kPi - 4.0 * theta)) *
               beta_fn(theta * (1.0 - beta) / (kPi / 4.0 - theta), 1.0 - beta) * angular;
    }
    // theta in (pi/4, pi].  The first Beta argument is
    //   (2 - mu beta) / (2 - mu)  =  (theta - beta pi/4) / (theta - pi/4),
    // obtained from the radial substitution s = t^{2 - mu}.
    return std::pow(4.0 - mu * mu, beta) * (2.0 * theta) * (2.0 * theta) /
           (kPi * (4.0 * theta - kPi)) *
           beta_fn((theta - beta * kPi / 4.0) / (theta - kPi / 4.0), 1.0 - beta) * angular;
}

double sector_beta_integral_exact(double theta, double r, double beta) {
    if (!(r > 0)) throw std::domain_error("sector_beta_integral_exact: r > 0");
    return sector_constant(theta, beta) * std::pow(r, 2.0 * (1.0 - beta));
}

double cone_barrier(int n, double theta, double r, double rho, double omega_colatitude) {
    if (n < 2) throw std::domain_error("cone_barrier: n >= 2");
    if (!(rho > 0 && rho < r)) throw std::domain_error("cone_barrier: rho in (0, r)");
    if (!(omega_colatitude >= 0 && omega_colatitude <= theta))
        throw std::domain_error("cone_barrier: colatitude in [0, theta]");

    const CornerExponent ce = corner_exponent(n, theta);
    const CapEigenfunction phi = cap_eigen(n, theta);
    const double ph = phi.eval(omega_colatitude);
    const double t = rho / r;
    if (std::fabs(ce.alpha - 2.0) <= kBranchTol)
        return rho * rho / (n + 2.0) * std::log(r / rho) * ph;
    return r * r / (ce.lambda - 2.0 * n) * (t * t - std::pow(t, ce.alpha)) * ph;
}

double cone_constant(int n, double theta, double beta) {
    if (n < 2) throw std::domain_error("cone_constant: n >= 2");
    if (!(beta > 0 && beta < 1)) throw std::domain_error("cone_constant: beta in (0, 1)");
    const CornerExponent ce = corner_exponent(n, theta);
    const double alpha = ce.alpha;
    const double lambda = ce.lambda;
    if (std::fabs(alpha - 2.0) <= kBranchTol)
        return std::pow(n - 2.0 * beta, beta - 1.0) * std::pow(n + 2.0, beta) * gamma_fn(1.0 - beta);
    if (alpha > 2.0)
        return std::pow(lambda - 2.0 * n, beta) / (alpha - 2.0) *
               beta_fn((n - 2.0 * beta) / (alpha - 2.0), 1.0 - beta);
    // alpha < 2: the radial substitution s = t^{2-alpha} yields the first
    // Beta argument (n - alpha beta) / (2 - alpha); this is the form that
    // reduces to the planar sector constant at n = 2.
    return std::pow(2.0 * n - lambda, beta) / (2.0 - alpha) *
           beta_fn((n - alpha * beta) / (2.0 - alpha), 1.0 - beta);
}

double cap_angular_integral(int n, double theta, double beta) {
    if (n == 2) {
        // Arc: int_{-theta}^{theta} cos(pi w / (2 theta))^{-beta} dw.
        return (2.0 * theta / kPi) * beta_fn(0.5, 0.5 * (1.0 - beta));
    }
    const CapEigenfunction phi = cap_eigen(n, theta, 513);
    // d(omega) on the cap: area element (sin t)^{n-2} dt times |S^{n-2}|.
    const double sn2 = 2.0 * std::pow(kPi, 0.5 * (n - 1)) / gamma_fn(0.5 * (n - 1));
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double value = integrator.integrate(
        [&](double t) {
            const double p = phi.eval(t);
            if (p <= 0) return 0.0;
            return std::pow(std::sin(t), static_cast<double>(n - 2)) * std::pow(p, -beta);
        },
        0.0, theta);
    return sn2 * value;
}

double cone_beta_integral_exact(int n, double theta, double r, double beta) {
    return cone_constant(n, theta, beta) * std::pow(r, n - 2.0 * beta) *
           cap_angular_integral(n, theta, beta);
}

double disk_solution(int n, double R, double dist_from_center) {
    if (!(R > 0) || n < 1) throw std::domain_error("disk_solution: R > 0, n >= 1");
    if (dist_from_center > R) throw std::domain_error("disk_solution: |x| <= R required");
    return (R * R - dist_from_center * dist_from_center) / (2.0 * n);
}

double triangle_barrier(double theta, double x, double y) {
    if (!(theta > 0 && theta < kPi / 2)) throw std::domain_error("triangle_barrier: theta in (0, pi/2)");
    const double top = x * std::tan(theta);
    if (!(x >= 0 && y >= 0 && y <= top))
        throw std::domain_error("triangle_barrier: point outside the wedge");
    return 0.5 * y * (top - y);
}

double slab_barrier(double epsilon, double xn) {
    if (std::fabs(xn) > epsilon) throw std::domain_error("slab_barrier: |x_n| <= eps required");
    return 0.5 * (epsilon * epsilon - xn * xn);
}

double slab_beta_constant(double beta) {
    if (!(beta > 0 && beta < 1)) throw std::domain_error("slab_beta_constant: beta in (0, 1)");
    // 2^{1+beta} int_0^1 (1 - t^2)^{-beta} dt = 2^beta B(1/2, 1-beta).
    return std::pow(2.0, beta) * beta_fn(0.5, 1.0 - beta);
}

double curvilinear_epsilon_bound(double beta0) {
    if (!(beta0 > 0.5 && beta0 < 1.0))
        throw std::domain_error("curvilinear barrier: beta0 in (1/2, 1)");
    return std::sqrt((2.0 * beta0 - 1.0) * (2.0 * beta0 - 1.0) / (2.0 * (1.0 - beta0)));
}

double curvilinear_barrier(double beta0, double epsilon, double x, double y) {
    const double bound = curvilinear_epsilon_bound(beta0);
    if (epsilon > bound)
        throw std::invalid_argument("curvilinear barrier: eps too large; admissible bound is " +
                                    std::to_string(bound));
    const double k = 1.0 / (2.0 * beta0 - 1.0);
    const double top = epsilon * std::pow(x, k);
    if (!(x > 0 && x < 1 && y >= 0 && y <= top))
        throw std::domain_error("curvilinear barrier: point outside the domain");
    return y * (top - y);
}

double curvilinear_truncated_integral(double beta0, double epsilon, double delta) {
    if (!(delta > 0 && delta < 1)) throw std::domain_error("delta in (0,1) required");
    return std::pow(epsilon, 1.0 - 2.0 * beta0) * beta_fn(1.0 - beta0, 1.0 - beta0) *
           std::log(1.0 / delta);
}

double cusp_barrier(const CuspProfile& profile, const Vec2& x) {
    // Convention: cusp axis along +y (x_n = y), transverse coordinate x.
    const double t = x.y;
    if (!(t > 0 && t <= profile.eta)) throw std::domain_error("cusp_barrier: x_n in (0, eta]");
    const double w = profile.epsilon * profile.eval(t);
    if (std::fabs(x.x) > w) throw std::domain_error("cusp_barrier: point outside the cusp");
    return w * w - x.x * x.x;
}

CornerPair convex_corner_pair(double theta, double r, const Vec2& x) {
    if (!(theta > 0 && theta < kPi / 2)) throw std::domain_error("convex_corner_pair: theta in (0, pi/2)");
    const double rho = x.norm();
    const double omega = std::atan2(x.y, x.x);
    if (!(rho > 0 && rho <= r && std::fabs(omega) <= theta))
        throw std::domain_error("convex_corner_pair: point outside the sector");
    const double c = r / std::cos(theta);
    CornerPair out;
    out.v_tangent = 0.25 * (r * r * std::tan(theta) * std::tan(theta) -
                            (x.x - c) * (x.x - c) - x.y * x.y);
    out.w_harmonic = std::pow(rho, kPi / (2.0 * theta)) * std::cos(kPi * omega / (2.0 * theta));
    return out;
}

double convex_corner_ratio_bound(double theta, double r) {
    // Golden-section maximisation of w(r,w)/v(r,w) over omega in (0, theta).
    auto ratio = [&](double omega) {
        const double w = std::pow(r, kPi / (2.0 * theta)) * std::cos(kPi * omega / (2.0 * theta));
        const double v = 0.25 * (2.0 * r * r * std::cos(omega) / std::cos(theta) - r * r - r * r);
        return w / v;
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 1e-9, b = theta * (1.0 - 1e-9);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * theta; ++it) {
        if (ratio(c) < ratio(d)) {
            a = c;
            c = d;
            d = a + gr * (b - a);
        } else {
            b = d;
            d = c;
            c = b - gr * (b - a);
        }
    }
    return ratio(0.5 * (a + b));
}

} // namespace torsionlab
