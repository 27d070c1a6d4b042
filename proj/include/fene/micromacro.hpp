#pragma once

#include <Eigen/Dense>

#include "fene/ball_operators.hpp"
#include "fene/torus.hpp"

namespace fene {

/// Configuration coefficients on the box: row p of `phys` holds c_p at every
/// gridpoint (column-major over the MxM grid), and `spec` the matching
/// Fourier coefficients. psi(x,.) = psi_inf sum_p c_p(x) phi_p.
struct CoefficientField {
    Eigen::MatrixXd phys;  ///< Q x M^2
    Eigen::MatrixXcd spec; ///< Q x M^2

    static CoefficientField zero(int q, const TorusGrid& g);
    int q() const { return static_cast<int>(phys.rows()); }

    void sync_phys_from_spec(const TorusGrid& g);
    void sync_spec_from_phys(const TorusGrid& g);
};

/// Coupled snapshot: spectral velocity plus per-gridpoint configuration
/// coefficients. Invariants: u divergence-free and mean-free; c_0(x) = 0
/// (the perturbation carries no R-mass).
struct MicroMacroState {
    VectorField u;
    CoefficientField c;
    double t = 0.0;

    static MicroMacroState zero(int q, const TorusGrid& g);
    double mass_max() const { return c.phys.row(0).cwiseAbs().maxCoeff(); }
};

/// Symmetric polymer stress tau_lm(x) = sum_p t[l][m]_p c_p(x), physical and
/// spectral representations.
struct StressField {
    PhysicalField p11, p12, p22;
    SpectralField s11, s12, s22;
};

StressField compute_stress_field(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops);

/// Velocity gradient in physical space, d[j][i] = d_j u_i.
struct VelocityGradient {
    PhysicalField u1, u2;        ///< velocity components
    Tensor22<PhysicalField> d;   ///< d[j][i] = d_{x_j} u_i
};
VelocityGradient velocity_gradient(const TorusGrid& g, const VectorField& u);

/// Switches for the nonlinear terms; the linearized system keeps only the
/// equilibrium drag, the stress force, relaxation and diffusion.
struct RhsOptions {
    bool advection = true; ///< u.grad u and u.grad psi
    bool psi_drag = true;  ///< div_R(-grad u . R psi)
};

/// P(-u.grad u + div tau): divergence- and mean-free spectral tendency.
VectorField rhs_velocity(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                         const RhsOptions& opt = {});
VectorField rhs_velocity(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                         const RhsOptions& opt, const VelocityGradient& vg);

/// Full coefficient tendency
///   dc/dt = -u.grad c + nu lap c - S c + sum_ij (d_j u_i)(D[i][j] c + b[i][j]),
/// returned spectrally. Row 0 vanishes identically.
Eigen::MatrixXcd rhs_distribution(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                                  const FeneParams& params, const RhsOptions& opt = {});

/// Explicit part only (advection + drag), used by the IMEX split.
Eigen::MatrixXcd explicit_distribution_tendency(const TorusGrid& g, const MicroMacroState& state,
                                                const BallOperators& ops, const RhsOptions& opt = {});
Eigen::MatrixXcd explicit_distribution_tendency(const TorusGrid& g, const MicroMacroState& state,
                                                const BallOperators& ops, const RhsOptions& opt,
                                                const VelocityGradient& vg);

/// Deformation-tensor reconstruction from second R-moments across one step:
/// the finite-difference d_t psi moment plus the advection, diffusion,
/// relaxation and drag moments of the midpoint state are compared with
/// Ccoef * Du of the midpoint velocity. Returns the RMS residual over the box
/// and the reconstructed tensor components.
struct DuReconstruction {
    PhysicalField r11, r12, r22; ///< reconstructed Ccoef * [Du]
    double residual_rms = 0.0;
    double reference_rms = 0.0; ///< RMS of Ccoef * Du for scale
};
DuReconstruction reconstruct_du(const TorusGrid& g, const MicroMacroState& prev, const MicroMacroState& next,
                                const BallOperators& ops, const FeneParams& params, const RhsOptions& opt = {});

/// Moment identity evaluated with the instantaneous right-hand side instead
/// of a finite-difference rate; algebraically zero, so the return value is
/// pure roundoff and exercises every assembled tensor at once.
double du_identity_residual(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops,
                            const FeneParams& params, const RhsOptions& opt = {});

/// Discrete energy-coupling pairing <equilibrium drag, psi> + <div tau, u>;
/// vanishes when b and t come from the same exact quadrature.
double coupling_cancellation_residual(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops);

/// Drag->stress->P div pipeline through the exactly assembled closure
/// tensor; for divergence-free u this is c2 * lap u. Returns the relative
/// deviation from the multiplier -c2 |xi|^2 uhat.
double closure_identity_residual(const TorusGrid& g, const VectorField& u, const BallOperators& ops,
                                 const FeneParams& params);

/// Same pipeline through the finite-basis (b, t) contraction; converges to
/// c2 only as the basis degree grows. Returns the effective constant.
double closure_effective_constant(const BallOperators& ops);

} // namespace fene
