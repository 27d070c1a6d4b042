#include <doctest.h>

#include <numbers>

#include "fene/ball_quadrature.hpp"
#include "fene/jacobi.hpp"
#include "oracles.hpp"

using namespace fene;

TEST_CASE("gauss-jacobi integrates the pure weight") {
    for (double alpha : {0.0, 0.5, 1.5, 2.0, 3.0}) {
        const GaussJacobiRule r = gauss_jacobi(6, alpha);
        CHECK(r.weights.minCoeff() > 0.0);
        const double mu0 = r.weights.sum();
        const double exact = std::pow(2.0, alpha + 1.0) / (alpha + 1.0);
        CHECK(mu0 == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("radial rule is exact for even monomials up to degree 2n_r - 1 in t") {
    const double k = 2.0;
    BallQuadrature quad(k, 8, 16);
    for (const DiskRule* rule : {&quad.wk, &quad.wk1, &quad.wk2}) {
        for (int p = 0; p <= 7; ++p) {
            const double val = rule->integrate(rule->r().pow(2 * p)) / (2.0 * std::numbers::pi);
            CHECK(val == doctest::Approx(oracles::radial_monomial_exact(p, rule->alpha())).epsilon(1e-13));
        }
    }
}

TEST_CASE("weight normalization Z") {
    // ∫_B (1-r^2)^k dR = pi/(k+1); for k=2 this is pi/3
    BallQuadrature quad(2.0, 8, 16);
    const double z = quad.wk.integrate(Eigen::ArrayXd::Ones(quad.wk.size()));
    CHECK(z == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-14));
    for (double k : {1.5, 3.0, 5.0}) {
        BallQuadrature q(k, 10, 20);
        CHECK(q.wk.integrate(Eigen::ArrayXd::Ones(q.wk.size())) ==
              doctest::Approx(oracles::z_exact(k)).epsilon(1e-13));
    }
}

TEST_CASE("odd moments vanish, second moment matches the beta oracle") {
    const double k = 2.0;
    BallQuadrature quad(k, 10, 24);
    const double z = oracles::z_exact(k);
    CHECK(quad.wk.integrate(quad.wk.x1()) / z == doctest::Approx(0.0).epsilon(1e-14));
    const double m2 = quad.wk.integrate(quad.wk.x1().square()) / z;
    CHECK(m2 == doctest::Approx(1.0 / 8.0).epsilon(1e-13)); // 1/(2(k+2)) at k=2
}

TEST_CASE("invalid weight exponents are rejected") {
    CHECK_THROWS(gauss_jacobi(4, -1.0));
    CHECK_THROWS(DiskRule(4, 8, -1.5));
    CHECK_THROWS(BallQuadrature(1.0, 8, 16)); // k-2 weight not integrable
}
