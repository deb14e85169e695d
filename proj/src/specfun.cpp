#include "torsionlab/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

using State = std::array<double, 2>;  // (g, g')

namespace odeint = boost::numeric::odeint;

// Power series of the normalised Gegenbauer solution about z = -1.
// With w = z + 1 and lambda = alpha(alpha + 2 nu), the coefficients obey
//   a_{k+1} = a_k [k (k + 2 nu) - lambda] / ((k+1)(2k + 2 nu + 1)),  a_0 = 1.
void series_at(double lambda, double nu, double w, double& g, double& dg, int order = 8) {
    double a = 1.0;
    g = a;
    dg = 0.0;
    double wk = 1.0;  // w^k
    for (int k = 0; k < order; ++k) {
        const double next = a * (k * (k + 2.0 * nu) - lambda) /
                            ((k + 1.0) * (2.0 * k + 2.0 * nu + 1.0));
        dg += next * (k + 1) * wk;
        wk *= w;
        g += next * wk;
        a = next;
    }
}

struct GegenbauerOde {
    double lambda;
    double nu;
    void operator()(const State& s, State& ds, double z) const {
        ds[0] = s[1];
        ds[1] = (lambda * s[0] - (2.0 * nu + 1.0) * z * s[1]) / (z * z - 1.0);
    }
};

double gegenbauer_with_deriv(double alpha, double nu, double z, double* deriv) {
    if (!(z > -1.0 - 1e-15 && z <= 1.0))
        throw std::domain_error("gegenbauer_eval: z in (-1, 1] required");
    const double lambda = alpha * (alpha + 2.0 * nu);

    const double s0 = 1e-3;
    if (z <= -1.0 + s0) {
        double g, dg;
        series_at(lambda, nu, z + 1.0, g, dg);
        if (deriv) *deriv = dg;
        return g;
    }
    if (z >= 1.0 - 1e-12) {
        // The ODE is singular at z = 1; stop just short and accept the
        // (integrable) truncation.  Only theta -> pi exercises this.
        z = 1.0 - 1e-12;
    }

    State s;
    series_at(lambda, nu, s0, s[0], s[1]);

    GegenbauerOde rhs{lambda, nu};
    using Stepper = odeint::runge_kutta_fehlberg78<State>;
    auto stepper = odeint::make_controlled<Stepper>(1e-13, 1e-13);
    const double z_begin = -1.0 + s0;
    try {
        odeint::integrate_adaptive(stepper, rhs, s, z_begin, z, 0.25 * (z - z_begin));
    } catch (const std::exception& e) {
        throw IntegrationFailure(std::string("gegenbauer_eval: ") + e.what());
    }
    if (!std::isfinite(s[0]) || !std::isfinite(s[1]))
        throw IntegrationFailure("gegenbauer_eval: non-finite state");
    if (deriv) *deriv = s[1];
    return s[0];
}

} // namespace

double gamma_fn(double x) {
    if (!(x > 0)) throw std::domain_error("gamma_fn: x > 0 required");
    return std::tgamma(x);
}

double beta_fn(double x, double y) {
    if (!(x > 0 && y > 0)) throw std::domain_error("beta_fn: positive arguments required");
    // Log-space evaluation avoids overflow for large arguments.
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double gegenbauer_eval(double alpha, double nu, double z) {
    return gegenbauer_with_deriv(alpha, nu, z, nullptr);
}

namespace {

CornerExponent exponent_by_root_scan(int n, double theta) {
    const double nu = 0.5 * (n - 2);
    const double z = -std::cos(theta);
    auto f = [&](double alpha) { return gegenbauer_eval(alpha, nu, z); };

    // Bracket the first positive zero: anchor at alpha ~ 0+ (g ~ 1 > 0),
    // scan in steps of 0.25 from 0.01.
    double lo = 1e-8;
    double flo = f(lo);
    double hi = 0.01;
    double fhi = f(hi);
    while (flo * fhi > 0) {
        lo = hi;
        flo = fhi;
        hi += 0.25;
        if (hi > 100.0)
            throw SearchFailure("corner_exponent: no sign change below alpha = 100");
        fhi = f(hi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-8; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (flo * fm <= 0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    const double alpha = 0.5 * (lo + hi);
    return {n, theta, alpha, alpha * (alpha + n - 2)};
}

} // namespace

CornerExponent corner_exponent_numeric(int n, double theta) {
    if (n < 2) throw std::domain_error("corner_exponent: n >= 2 required");
    if (!(theta > 0 && theta < kPi)) throw std::domain_error("corner_exponent: theta in (0, pi) required");
    return exponent_by_root_scan(n, theta);
}

CornerExponent corner_exponent(int n, double theta) {
    if (n < 2) throw std::domain_error("corner_exponent: n >= 2 required");
    if (!(theta > 0 && theta < kPi)) throw std::domain_error("corner_exponent: theta in (0, pi) required");
    if (n == 2) {
        const double alpha = kPi / (2.0 * theta);
        return {n, theta, alpha, alpha * alpha};
    }
    if (n == 4) {
        const double alpha = kPi / theta - 1.0;
        return {n, theta, alpha, alpha * (alpha + 2.0)};
    }
    return exponent_by_root_scan(n, theta);
}

double CapEigenfunction::eval(double t) const {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    const double step = grid[1] - grid[0];
    const std::size_t i = std::min(static_cast<std::size_t>(t / step), grid.size() - 2);
    const double w = (t - grid[i]) / (grid[i + 1] - grid[i]);
    return values[i] + w * (values[i + 1] - values[i]);
}

CapEigenfunction cap_eigen(int n, double theta, int grid) {
    if (grid < 64) throw std::invalid_argument("cap_eigen: grid >= 64 required");
    const CornerExponent ce = corner_exponent(n, theta);

    CapEigenfunction phi;
    phi.n = n;
    phi.theta = theta;
    phi.lambda = ce.lambda;
    phi.grid.resize(static_cast<std::size_t>(grid));
    phi.values.resize(static_cast<std::size_t>(grid));
    phi.derivs.resize(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) phi.grid[static_cast<std::size_t>(i)] = theta * i / (grid - 1);

    if (n == 2) {
        // Arc eigenfunction: cos(pi t / (2 theta)) with Lambda = (pi/2theta)^2.
        for (int i = 0; i < grid; ++i) {
            const double t = phi.grid[static_cast<std::size_t>(i)];
            phi.values[static_cast<std::size_t>(i)] = std::cos(kPi * t / (2.0 * theta));
            phi.derivs[static_cast<std::size_t>(i)] =
                -(kPi / (2.0 * theta)) * std::sin(kPi * t / (2.0 * theta));
        }
        phi.values.back() = 0.0;
        return phi;
    }

    // Colatitude ODE  phi'' + (n-2) cot(t) phi' + Lambda phi = 0 with the
    // regular normalisation phi(0) = 1, phi'(0) = 0.  Start from the local
    // expansion phi ~ 1 - Lambda t^2 / (2(n-1)) to step off the singular pole.
    const double t0 = std::min(1e-4, 0.25 * theta / grid);
    using Stepper = odeint::runge_kutta_fehlberg78<State>;

    auto integrate_grid = [&](double lambda, std::vector<double>& vals,
                              std::vector<double>& ders) {
        auto rhs = [&](const State& s, State& ds, double t) {
            ds[0] = s[1];
            ds[1] = -(n - 2) * (std::cos(t) / std::sin(t)) * s[1] - lambda * s[0];
        };
        const double c2 = -lambda / (2.0 * (n - 1));
        const double c4 = lambda * lambda / (8.0 * (n - 1) * (n + 1)) -
                          lambda * (n - 2) / (12.0 * (n - 1) * (n + 1));
        State s{1.0 + c2 * t0 * t0 + c4 * t0 * t0 * t0 * t0,
                2.0 * c2 * t0 + 4.0 * c4 * t0 * t0 * t0};
        double t_prev = t0;
        vals[0] = 1.0;
        ders[0] = 0.0;
        for (int i = 1; i < grid; ++i) {
            const double t = phi.grid[static_cast<std::size_t>(i)];
            if (t <= t0) {
                vals[static_cast<std::size_t>(i)] = 1.0 + c2 * t * t;
                ders[static_cast<std::size_t>(i)] = 2.0 * c2 * t;
                continue;
            }
            auto stepper = odeint::make_controlled<Stepper>(3e-15, 3e-15);
            odeint::integrate_adaptive(stepper, rhs, s, t_prev, t, 0.5 * (t - t_prev));
            t_prev = t;
            vals[static_cast<std::size_t>(i)] = s[0];
            ders[static_cast<std::size_t>(i)] = s[1];
        }
        return vals.back();
    };

    // Secant refinement of the eigenvalue so that phi(theta) vanishes to
    // machine level (the root-finder bracket is only 1e-8 wide).
    double l0 = ce.lambda;
    double f0 = integrate_grid(l0, phi.values, phi.derivs);
    double l1 = ce.lambda * (1.0 + 1e-7) + 1e-12;
    double f1 = integrate_grid(l1, phi.values, phi.derivs);
    for (int it = 0; it < 8 && std::fabs(f1) > 1e-14 && f1 != f0; ++it) {
        const double l2 = l1 - f1 * (l1 - l0) / (f1 - f0);
        l0 = l1;
        f0 = f1;
        l1 = l2;
        f1 = integrate_grid(l1, phi.values, phi.derivs);
    }
    phi.lambda = l1;

    // The principal eigenfunction is positive and maximal at the pole.
    double sup = 0.0;
    for (double v : phi.values) sup = std::max(sup, v);
    if (sup <= 0) throw IntegrationFailure("cap_eigen: eigenfunction not positive");
    for (auto& v : phi.values) v /= sup;
    for (auto& d : phi.derivs) d /= sup;
    phi.values.back() = 0.0;
    return phi;
}

} // namespace torsionlab
