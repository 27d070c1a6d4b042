#include "fene/torus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace fene {

namespace {
bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }
} // namespace

struct TorusGrid::FftPlans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    mutable Eigen::ArrayXXcd buf;
    ~FftPlans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

TorusGrid::TorusGrid(int m, double l_box) : m_(m), l_(l_box), plans_(std::make_unique<FftPlans>()) {
    if (!is_power_of_two(m))
        throw std::invalid_argument("TorusGrid: M must be a power of two");
    if (!(l_box > 0.0))
        throw std::invalid_argument("TorusGrid: box length must be positive");

    xi_sq_.resize(m, m);
    kappa_sq_.resize(m, m);
    mask_.resize(m, m);
    const int kmax = m / 3; // strict |kappa| > M/3 removal; M a power of two keeps the rule alias-safe
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const int ki = kappa(i), kj = kappa(j);
            kappa_sq_(i, j) = ki * ki + kj * kj;
            xi_sq_(i, j) = (2.0 * std::numbers::pi / l_) * (2.0 * std::numbers::pi / l_) * kappa_sq_(i, j);
            mask_(i, j) = (std::abs(ki) > kmax || std::abs(kj) > kmax) ? 0.0 : 1.0;
        }
    }

    plans_->buf.resize(m, m);
    auto* ptr = reinterpret_cast<fftw_complex*>(plans_->buf.data());
    // FFTW_ESTIMATE keeps the chosen algorithm independent of runtime timing,
    // which the bit-reproducibility contract of the records requires
    plans_->fwd = fftw_plan_dft_2d(m, m, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->bwd = fftw_plan_dft_2d(m, m, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plans_->fwd || !plans_->bwd)
        throw std::runtime_error("TorusGrid: FFTW plan creation failed");
}

TorusGrid::~TorusGrid() = default;

double TorusGrid::xi_dealias_max() const {
    return (2.0 * std::numbers::pi / l_) * (m_ / 3);
}

void TorusGrid::forward(const PhysicalField& phys, SpectralField& spec) const {
    plans_->buf = phys.cast<Complex>();
    auto* ptr = reinterpret_cast<fftw_complex*>(plans_->buf.data());
    fftw_execute_dft(plans_->fwd, ptr, ptr);
    spec = plans_->buf / double(m_ * m_);
}

void TorusGrid::backward(const SpectralField& spec, PhysicalField& phys) const {
    plans_->buf = spec;
    auto* ptr = reinterpret_cast<fftw_complex*>(plans_->buf.data());
    fftw_execute_dft(plans_->bwd, ptr, ptr);
    phys = plans_->buf.real();
}

void TorusGrid::enforce_hermitian(SpectralField& f) const {
    SpectralField g(m_, m_);
    for (int i = 0; i < m_; ++i) {
        const int in = (m_ - i) % m_;
        for (int j = 0; j < m_; ++j) {
            const int jn = (m_ - j) % m_;
            g(i, j) = 0.5 * (f(i, j) + std::conj(f(in, jn)));
        }
    }
    f.swap(g);
}

VectorField VectorField::zero(const TorusGrid& g) {
    VectorField u;
    u.c1 = SpectralField::Zero(g.m(), g.m());
    u.c2 = SpectralField::Zero(g.m(), g.m());
    return u;
}

double VectorField::div_max(const TorusGrid& g) const {
    double worst = 0.0;
    for (int i = 0; i < g.m(); ++i)
        for (int j = 0; j < g.m(); ++j)
            worst = std::max(worst, std::abs(g.xi(i) * c1(i, j) + g.xi(j) * c2(i, j)));
    return worst;
}

double VectorField::max_abs_physical(const TorusGrid& g) const {
    PhysicalField p1, p2;
    g.backward(c1, p1);
    g.backward(c2, p2);
    return std::sqrt((p1.square() + p2.square()).maxCoeff());
}

void leray_project(const TorusGrid& g, VectorField& u) {
    for (int i = 0; i < g.m(); ++i) {
        const double xi1 = g.xi(i);
        for (int j = 0; j < g.m(); ++j) {
            const double xi2 = g.xi(j);
            const double x2 = xi1 * xi1 + xi2 * xi2;
            if (x2 == 0.0) continue;
            const Complex dot = (xi1 * u.c1(i, j) + xi2 * u.c2(i, j)) / x2;
            u.c1(i, j) -= xi1 * dot;
            u.c2(i, j) -= xi2 * dot;
        }
    }
}

void spectral_derivative(const TorusGrid& g, const SpectralField& f, int dir, int order, SpectralField& out) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
    out.resize(g.m(), g.m());
    if (order == 2) {
        out = f * (-g.xi_sq()).cast<Complex>();
        return;
    }
    const Complex iu(0.0, 1.0);
    for (int i = 0; i < g.m(); ++i)
        for (int j = 0; j < g.m(); ++j)
            out(i, j) = iu * (dir == 0 ? g.xi(i) : g.xi(j)) * f(i, j);
}

void advect(const TorusGrid& g, const PhysicalField& u1, const PhysicalField& u2, const SpectralField& f,
            SpectralField& out) {
    SpectralField df;
    PhysicalField fx, fy;
    spectral_derivative(g, f, 0, 1, df);
    g.backward(df, fx);
    spectral_derivative(g, f, 1, 1, df);
    g.backward(df, fy);
    const PhysicalField prod = u1 * fx + u2 * fy;
    g.forward(prod, out);
    g.dealias(out);
}

} // namespace fene
