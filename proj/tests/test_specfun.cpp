#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "torsionlab/specfun.hpp"

using namespace torsionlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Independent oracle for the nu = 0 Gegenbauer solution: the ODE reduces to
// Chebyshev's equation and the normalised solution is cos(alpha (pi - arccos z)).
double gegenbauer_nu0_closed(double alpha, double z) {
    return std::cos(alpha * (kPi - std::acos(z)));
}
} // namespace

TEST_CASE("gamma function") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(gamma_fn(0.25) == doctest::Approx(3.6256099082219083).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("beta function values and quadrature cross-check") {
    CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(beta_fn(0.5, 0.5) == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(beta_fn(3.0, 4.0) == doctest::Approx(1.0 / 60.0).epsilon(1e-13));
    CHECK_THROWS_AS(beta_fn(0.0, 1.0), std::domain_error);

    // B(x,y) = 2 int_0^{pi/2} sin^{2x-1} cos^{2y-1}.  Split at pi/4 and fold
    // the upper half so each singular endpoint lands exactly at 0 (tanh_sinh
    // needs the singularity at the interval end).
    boost::math::quadrature::tanh_sinh<double> quad;
    for (double x : {0.3, 0.5, 1.0, 2.5}) {
        for (double y : {0.25, 0.75, 1.5}) {
            auto half = [&](double p, double q) {
                return quad.integrate(
                    [&](double a) {
                        return std::pow(std::sin(a), 2 * p - 1) * std::pow(std::cos(a), 2 * q - 1);
                    },
                    0.0, kPi / 4, 1e-13);
            };
            const double direct = 2.0 * (half(x, y) + half(y, x));
            CHECK(beta_fn(x, y) == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("gegenbauer evaluation") {
    // Initial condition at the left endpoint.
    CHECK(gegenbauer_eval(1.7, 0.0, -1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gegenbauer_eval(3.3, 1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-12));

    // nu = 0 closed form (Chebyshev).
    for (double alpha : {0.5, 1.0, 2.0, 3.7, 10.0}) {
        for (double z : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
            CHECK(gegenbauer_eval(alpha, 0.0, z) ==
                  doctest::Approx(gegenbauer_nu0_closed(alpha, z)).epsilon(1e-9));
        }
    }
    CHECK(gegenbauer_eval(2.0, 0.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-9));

    // nu = 1/2, alpha = 1: the normalised solution is -P_1(z) = -z.
    CHECK(gegenbauer_eval(1.0, 0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gegenbauer_eval(1.0, 0.5, 0.5) == doctest::Approx(-0.5).epsilon(1e-9));
    // nu = 1/2, alpha = 2: P_2(z) with P_2(-1) = 1.
    CHECK(gegenbauer_eval(2.0, 0.5, 0.3) ==
          doctest::Approx(0.5 * (3 * 0.3 * 0.3 - 1)).epsilon(1e-9));

    CHECK_THROWS_AS(gegenbauer_eval(1.0, 0.0, -1.5), std::domain_error);
    CHECK_THROWS_AS(gegenbauer_eval(1.0, 0.0, 1.5), std::domain_error);
}

TEST_CASE("corner exponents: closed forms") {
    const CornerExponent a1 = corner_exponent(2, kPi / 2);
    CHECK(a1.alpha == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(a1.lambda == doctest::Approx(1.0).epsilon(1e-10));

    const CornerExponent a2 = corner_exponent(4, kPi / 3);
    CHECK(a2.alpha == doctest::Approx(2.0).epsilon(1e-10));

    for (int n : {2, 3, 4, 5}) {
        const CornerExponent ce = corner_exponent(n, std::acos(1.0 / std::sqrt(n)));
        CHECK(ce.alpha == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(ce.lambda == doctest::Approx(2.0 * n).epsilon(1e-6));
    }

    for (int n : {2, 3, 4, 5}) {
        const CornerExponent ce = corner_exponent(n, kPi / 2);
        CHECK(ce.alpha == doctest::Approx(1.0).epsilon(1e-6));
    }

    for (int n : {2, 3, 4, 5}) {
        for (double theta : {0.4, 1.0, 2.0}) {
            const CornerExponent ce = corner_exponent(n, theta);
            CHECK(ce.alpha * (ce.alpha + n - 2) == doctest::Approx(ce.lambda).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(corner_exponent(2, 0.0), std::domain_error);
    CHECK_THROWS_AS(corner_exponent(2, kPi), std::domain_error);
}

TEST_CASE("corner exponent numeric path matches n=2 closed form") {
    for (double theta : {kPi / 6, kPi / 4, kPi / 3, kPi / 2, 3 * kPi / 4}) {
        const CornerExponent ce = corner_exponent_numeric(2, theta);
        CHECK(ce.alpha == doctest::Approx(kPi / (2 * theta)).epsilon(1e-6));
    }
}

TEST_CASE("alpha decreasing in theta; n>=3 limit") {
    for (int n : {2, 3, 4, 5}) {
        double prev = 1e300;
        for (int k = 1; k <= 50; ++k) {
            const double theta = kPi * k / 51.0;
            const double alpha = corner_exponent(n, theta).alpha;
            CHECK(alpha < prev);
            prev = alpha;
        }
    }
    // alpha -> 0 as theta -> pi for n >= 3.  The decay is logarithmic
    // (alpha ~ 1 / (2 log(2/(pi - theta))) for n = 3), so at 0.99 pi the
    // value is ~0.12; it drops below 0.1 by 0.999 pi.
    const double a99 = corner_exponent(3, 0.99 * kPi).alpha;
    const double a999 = corner_exponent(3, 0.999 * kPi).alpha;
    CHECK(a99 < 0.15);
    CHECK(a999 < 0.1);
    CHECK(a999 < a99);
}

TEST_CASE("cap eigenfunctions") {
    const CapEigenfunction e2 = cap_eigen(2, kPi / 4, 129);
    CHECK(e2.lambda == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(e2.eval(0.0) == doctest::Approx(1.0));
    CHECK(e2.eval(kPi / 8) == doctest::Approx(std::cos(kPi / 4)).epsilon(1e-9));
    CHECK(e2.values.back() == 0.0);

    // n = 3 hemisphere: phi = cos(t), Lambda = 2.
    const CapEigenfunction e3 = cap_eigen(3, kPi / 2, 257);
    CHECK(e3.lambda == doctest::Approx(2.0).epsilon(1e-6));
    for (int i = 0; i < 257; i += 32)
        CHECK(e3.values[static_cast<std::size_t>(i)] ==
              doctest::Approx(std::cos(e3.grid[static_cast<std::size_t>(i)])).epsilon(1e-6));

    for (int n : {3, 4, 5}) {
        const CapEigenfunction e = cap_eigen(n, 1.1, 257);
        double sup = 0.0;
        for (std::size_t i = 0; i + 1 < e.values.size(); ++i) {
            CHECK(e.values[i] > 0.0);
            sup = std::max(sup, e.values[i]);
        }
        CHECK(sup == doctest::Approx(1.0));
        CHECK(e.values.back() == 0.0);
    }
    CHECK_THROWS_AS(cap_eigen(3, 1.0, 32), std::invalid_argument);
}

TEST_CASE("cap eigen residual on the grid interior") {
    // 5-point finite differences of the samples against the colatitude ODE
    // phi'' + (n-2) cot(t) phi' + Lambda phi = 0.
    for (int n : {3, 4}) {
        const double theta = 1.0;
        const CapEigenfunction e = cap_eigen(n, theta, 513);
        const double h = e.grid[1] - e.grid[0];
        double max_res = 0.0;
        for (std::size_t i = 2; i + 2 < e.values.size(); ++i) {
            const double d1 = (-e.values[i + 2] + 8 * e.values[i + 1] - 8 * e.values[i - 1] +
                               e.values[i - 2]) / (12 * h);
            const double d2 = (-e.values[i + 2] + 16 * e.values[i + 1] - 30 * e.values[i] +
                               16 * e.values[i - 1] - e.values[i - 2]) / (12 * h * h);
            const double t = e.grid[i];
            const double res =
                d2 + (n - 2) * (std::cos(t) / std::sin(t)) * d1 + e.lambda * e.values[i];
            max_res = std::max(max_res, std::fabs(res));
        }
        CHECK(max_res <= 1e-6);
    }
}

TEST_CASE("diangle closed form under a Laplace-Beltrami stencil") {
    // On S^2 the diangle eigenfunction (sin phi)^{pi/(2 theta)} cos(pi psi/(2 theta))
    // has eigenvalue Lambda = (pi/2theta)(pi/2theta + 1).
    const double theta = 0.7;
    const double mu = kPi / (2.0 * theta);
    const double lambda = mu * (mu + 1.0);
    auto f = [&](double phi, double psi) {
        return std::pow(std::sin(phi), mu) * std::cos(mu * psi);
    };
    const double h = 1e-4;
    for (double phi : {0.8, 1.2, 1.9}) {
        for (double psi : {-0.4, 0.0, 0.3}) {
            const double fp = (f(phi + h, psi) - f(phi - h, psi)) / (2 * h);
            const double fpp = (f(phi + h, psi) - 2 * f(phi, psi) + f(phi - h, psi)) / (h * h);
            const double fss = (f(phi, psi + h) - 2 * f(phi, psi) + f(phi, psi - h)) / (h * h);
            const double lap = fpp + (std::cos(phi) / std::sin(phi)) * fp +
                               fss / (std::sin(phi) * std::sin(phi));
            CHECK(-lap == doctest::Approx(lambda * f(phi, psi)).epsilon(1e-5));
        }
    }
}

TEST_CASE("cap eigenfunction comparable to boundary distance (n=3)") {
    for (double theta : {0.6, 1.2, 2.0}) {
        const CapEigenfunction e = cap_eigen(3, theta, 513);
        double cmin = 1e300, cmax = 0.0;
        for (std::size_t i = 0; i < e.grid.size(); ++i) {
            const double t = e.grid[i];
            if (t > theta - 0.01) break;
            const double ratio = e.values[i] / (theta - t);
            cmin = std::min(cmin, ratio);
            cmax = std::max(cmax, ratio);
        }
        CHECK(cmin > 0.0);
        CHECK(cmax < 1e300);
        CHECK(cmax / cmin < 50.0);
    }
}
