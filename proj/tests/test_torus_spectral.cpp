#include <doctest.h>

#include <numbers>

#include "fene/rng.hpp"
#include "fene/torus.hpp"

using namespace fene;

namespace {

SpectralField random_scalar(const TorusGrid& g, Rng& rng, bool dealias = true) {
    SpectralField f(g.m(), g.m());
    for (int j = 0; j < g.m(); ++j)
        for (int i = 0; i < g.m(); ++i) f(i, j) = Complex(rng.normal(), rng.normal());
    g.enforce_hermitian(f);
    if (dealias) g.dealias(f);
    f(0, 0) = 0.0;
    return f;
}

VectorField random_divfree(const TorusGrid& g, Rng& rng) {
    VectorField u = VectorField::zero(g);
    u.c1 = random_scalar(g, rng);
    u.c2 = random_scalar(g, rng);
    leray_project(g, u);
    return u;
}

} // namespace

TEST_CASE("grid invariants") {
    TorusGrid g(16, 2.0 * std::numbers::pi);
    CHECK_THROWS(TorusGrid(12, 1.0)); // not a power of two
    int zero_count = 0;
    for (int i = 0; i < g.m(); ++i)
        if (g.kappa(i) == 0) ++zero_count;
    CHECK(zero_count == 1);
    // 2/3 mask removes every index above M/3
    int kept = 0;
    for (int i = 0; i < g.m(); ++i)
        for (int j = 0; j < g.m(); ++j)
            if (g.dealias_mask()(i, j) == 1.0) {
                CHECK(std::abs(g.kappa(i)) <= 5);
                CHECK(std::abs(g.kappa(j)) <= 5);
                ++kept;
            }
    CHECK(kept == 11 * 11);
}

TEST_CASE("single-mode derivative is exact") {
    const double l = 4.0;
    TorusGrid g(32, l);
    PhysicalField phys(32, 32);
    const double w = 2.0 * std::numbers::pi / l;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) phys(i, j) = std::sin(w * (l * i / 32.0));
    SpectralField f, df;
    g.forward(phys, f);
    spectral_derivative(g, f, 0, 1, df);
    PhysicalField dphys;
    g.backward(df, dphys);
    for (int i = 0; i < 32; ++i)
        CHECK(dphys(i, 0) == doctest::Approx(w * std::cos(w * (l * i / 32.0))).epsilon(1e-12).scale(1.0));
}

TEST_CASE("laplacian kills constants and mixed partials commute") {
    TorusGrid g(16, 3.0);
    Rng rng(3);
    SpectralField f = random_scalar(g, rng);
    SpectralField lap;
    spectral_derivative(g, SpectralField::Zero(16, 16), 0, 2, lap);
    CHECK(lap.abs().maxCoeff() == 0.0);

    SpectralField d12, d21, tmp;
    spectral_derivative(g, f, 0, 1, tmp);
    spectral_derivative(g, tmp, 1, 1, d12);
    spectral_derivative(g, f, 1, 1, tmp);
    spectral_derivative(g, tmp, 0, 1, d21);
    CHECK((d12 - d21).abs().maxCoeff() <= 1e-13);
}

TEST_CASE("parseval round trip") {
    TorusGrid g(32, 5.0);
    Rng rng(11);
    const SpectralField f = random_scalar(g, rng, false);
    PhysicalField phys;
    g.backward(f, phys);
    const double phys_energy = phys.square().sum() * g.cell_area();
    const double spec_energy = f.abs2().sum() * g.area();
    CHECK(phys_energy == doctest::Approx(spec_energy).epsilon(1e-12));

    SpectralField f2;
    g.forward(phys, f2);
    CHECK((f - f2).abs().maxCoeff() <= 1e-13 * f.abs().maxCoeff());
}

TEST_CASE("leray projection") {
    TorusGrid g(32, 7.0);
    Rng rng(5);

    // pure gradient maps to zero
    const SpectralField p = random_scalar(g, rng);
    VectorField gradp = VectorField::zero(g);
    spectral_derivative(g, p, 0, 1, gradp.c1);
    spectral_derivative(g, p, 1, 1, gradp.c2);
    leray_project(g, gradp);
    CHECK(gradp.c1.abs().maxCoeff() <= 1e-14);
    CHECK(gradp.c2.abs().maxCoeff() <= 1e-14);

    // a divergence-free field passes through
    VectorField u = random_divfree(g, rng);
    VectorField v = u;
    leray_project(g, v);
    CHECK((v.c1 - u.c1).abs().maxCoeff() <= 1e-14 * u.c1.abs().maxCoeff());
    CHECK(u.div_max(g) <= 1e-12 * std::sqrt(u.c1.abs2().sum() + u.c2.abs2().sum()));

    // per-mode oracle u - xi (xi.u)/|xi|^2 and idempotence
    VectorField w = VectorField::zero(g);
    w.c1 = random_scalar(g, rng);
    w.c2 = random_scalar(g, rng);
    VectorField pw = w;
    leray_project(g, pw);
    for (int i = 0; i < g.m(); ++i)
        for (int j = 0; j < g.m(); ++j) {
            const double x1 = g.xi(i), x2 = g.xi(j), n2 = x1 * x1 + x2 * x2;
            if (n2 == 0.0) continue;
            const Complex dot = (x1 * w.c1(i, j) + x2 * w.c2(i, j)) / n2;
            CHECK(std::abs(pw.c1(i, j) - (w.c1(i, j) - x1 * dot)) <= 1e-14);
            CHECK(std::abs(pw.c2(i, j) - (w.c2(i, j) - x2 * dot)) <= 1e-14);
        }
    VectorField pw2 = pw;
    leray_project(g, pw2);
    CHECK((pw2.c1 - pw.c1).abs().maxCoeff() <= 1e-15);

    // self-adjointness on random pairs: <Pa, b> = <a, Pb>
    VectorField a = VectorField::zero(g), b = VectorField::zero(g);
    a.c1 = random_scalar(g, rng);
    a.c2 = random_scalar(g, rng);
    b.c1 = random_scalar(g, rng);
    b.c2 = random_scalar(g, rng);
    VectorField pa = a, pb = b;
    leray_project(g, pa);
    leray_project(g, pb);
    const Complex lhs = (pa.c1 * b.c1.conjugate() + pa.c2 * b.c2.conjugate()).sum();
    const Complex rhs = (a.c1 * pb.c1.conjugate() + a.c2 * pb.c2.conjugate()).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(lhs));
}

TEST_CASE("advection") {
    TorusGrid g(32, 2.0 * std::numbers::pi);
    Rng rng(9);
    const VectorField u = random_divfree(g, rng);
    PhysicalField u1, u2;
    g.backward(u.c1, u1);
    g.backward(u.c2, u2);

    SpectralField out;
    advect(g, PhysicalField::Zero(32, 32), PhysicalField::Zero(32, 32), random_scalar(g, rng), out);
    CHECK(out.abs().maxCoeff() == 0.0);

    SpectralField constant = SpectralField::Zero(32, 32);
    constant(0, 0) = 3.5;
    advect(g, u1, u2, constant, out);
    CHECK(out.abs().maxCoeff() <= 1e-14);

    // discrete mean vanishes and the advection is skew (L2-conserving)
    const SpectralField f = random_scalar(g, rng);
    advect(g, u1, u2, f, out);
    CHECK(std::abs(out(0, 0)) <= 1e-13);
    const Complex pairing = (out * f.conjugate()).sum();
    CHECK(std::abs(pairing.real()) <= 1e-12 * f.abs2().sum());
}
