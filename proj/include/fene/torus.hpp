#pragma once

#include <complex>
#include <memory>
#include <numbers>

#include <Eigen/Dense>

namespace fene {

using Complex = std::complex<double>;
using SpectralField = Eigen::ArrayXXcd; ///< M x M Fourier coefficients, row = kappa1 index
using PhysicalField = Eigen::ArrayXXd;  ///< M x M samples on the periodic grid

/// Periodic box of side L with M points per side (M a power of two) and the
/// 2/3-rule dealias mask. Convention: u(x) = sum_xi uhat(xi) e^{i xi.x},
/// so the forward transform carries the 1/M^2 factor and
/// ∫ |u|^2 dx = L^2 sum |uhat|^2.
class TorusGrid {
  public:
    TorusGrid(int m, double l_box);
    ~TorusGrid();
    TorusGrid(const TorusGrid&) = delete;
    TorusGrid& operator=(const TorusGrid&) = delete;

    int m() const { return m_; }
    double l_box() const { return l_; }
    double dx() const { return l_ / m_; }
    double cell_area() const { return dx() * dx(); }
    double area() const { return l_ * l_; }

    /// Integer lattice index in [-M/2, M/2) for storage index i.
    int kappa(int i) const { return i <= m_ / 2 ? i : i - m_; }
    double xi(int i) const { return (2.0 * std::numbers::pi / l_) * kappa(i); }
    /// |xi|^2 at storage index (i,j).
    const Eigen::ArrayXXd& xi_sq() const { return xi_sq_; }
    /// Integer kappa1^2+kappa2^2 (exact key for per-mode solver caches).
    const Eigen::ArrayXXi& kappa_sq() const { return kappa_sq_; }
    const Eigen::ArrayXXd& dealias_mask() const { return mask_; }
    /// Smallest nonzero lattice wavenumber 2 pi / L.
    double xi_min() const { return 2.0 * std::numbers::pi / l_; }
    /// Largest wavenumber surviving the dealias mask.
    double xi_dealias_max() const;

    void forward(const PhysicalField& phys, SpectralField& spec) const;
    void backward(const SpectralField& spec, PhysicalField& phys) const;

    void dealias(SpectralField& f) const { f *= mask_; }
    /// uhat(-xi) = conj(uhat(xi)), projecting out any non-real content.
    void enforce_hermitian(SpectralField& f) const;

  private:
    int m_;
    double l_;
    Eigen::ArrayXXd xi_sq_, mask_;
    Eigen::ArrayXXi kappa_sq_;
    struct FftPlans;
    std::unique_ptr<FftPlans> plans_;
};

/// Divergence-free spectral velocity on the box; mean mode pinned to zero.
struct VectorField {
    SpectralField c1, c2;

    static VectorField zero(const TorusGrid& g);
    void set_zero() { c1.setZero(); c2.setZero(); }
    VectorField& operator+=(const VectorField& o) { c1 += o.c1; c2 += o.c2; return *this; }
    VectorField& operator*=(double a) { c1 *= a; c2 *= a; return *this; }

    double div_max(const TorusGrid& g) const;
    double max_abs_physical(const TorusGrid& g) const;
};

/// Leray projection I - grad laplace^-1 div, mode by mode; the zero mode
/// passes through and is then pinned by the mean-free convention.
void leray_project(const TorusGrid& g, VectorField& u);

/// Fourier multiplier d/dx_dir (order 1) or the Laplacian (order 2, any dir).
void spectral_derivative(const TorusGrid& g, const SpectralField& f, int dir, int order, SpectralField& out);

/// Dealiased pseudo-spectral advection u . grad f of a scalar.
/// u is given in physical space, f spectrally; the result is spectral.
void advect(const TorusGrid& g, const PhysicalField& u1, const PhysicalField& u2, const SpectralField& f,
            SpectralField& out);

} // namespace fene
