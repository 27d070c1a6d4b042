#pragma once

#include <array>

#include <Eigen/Dense>

#include "fene/ball_basis.hpp"
#include "fene/fene_params.hpp"

namespace fene {

template <typename T>
using Tensor22 = std::array<std::array<T, 2>, 2>;

/// Galerkin operators of the configuration dynamics in the orthonormal
/// basis. With psi = psi_inf sum_p c_p phi_p:
///   stiffness   S_pq         = ∫ psi_inf grad phi_p . grad phi_q dR
///   drag        D[i][j]_pq   = ∫ R_j psi_inf phi_q d_{R_i} phi_p dR
///   drag source b[i][j]_p    = ∫ R_j psi_inf d_{R_i} phi_p dR
///   stress      t[l][m]_p    = ∫ R_l (d_{R_m} U) psi_inf phi_p dR
///   moments     m2[j][l]_p   = ∫ R_j R_l psi_inf phi_p dR
/// plus the exactly-assembled drag->stress closure tensor
///   closure[l][m][i][j] = ∫ R_j psi_inf d_{R_i}( R_l d_{R_m} U ) dR,
/// the weak form of ∫ div_R(-grad u . R psi_inf) R_l d_{R_m}U dR.
struct BallOperators {
    Eigen::MatrixXd S;
    Tensor22<Eigen::MatrixXd> drag;
    Tensor22<Eigen::VectorXd> drag_src;
    Tensor22<Eigen::VectorXd> stress;
    Tensor22<Eigen::VectorXd> moment2;
    Tensor22<Eigen::VectorXd> stiff_moment2; ///< S applied to the coefficients of R_j R_l
    Tensor22<Tensor22<double>> closure;

    int size() const { return static_cast<int>(S.rows()); }
};

BallOperators assemble_operators(const BallBasis& basis, const BallQuadrature& quad);

/// Smallest nonzero eigenvalue of S (the discrete Poincare constant is its
/// reciprocal) together with the Rayleigh quotient of phi = R_1, which
/// bounds it from above by 2(k+2).
struct SpectralGap {
    double lambda_min;
    double rayleigh_r1;
};
SpectralGap spectral_gap(const BallOperators& ops, const BallBasis& basis, const BallQuadrature& quad);

/// Left/right quotients of the three functional inequalities for a
/// zero-mass coefficient vector: Poincare |psi|^2_{L2} , the squared
/// boundary integral (∫ |psi|/(1-|R|) dR)^2, and the strong Hardy integral
/// ∫ psi^2 / (psi_inf (1-|R|)^2) dR, each divided by |psi|^2_{H1dot} = c^T S c.
struct InequalityRatios {
    double poincare;
    double tau_hardy;
    double hardy;
};
InequalityRatios inequality_ratios(const Eigen::VectorXd& coeffs, const BallOperators& ops,
                                   const BallBasis& basis, const BallQuadrature& quad);

/// Slaved small-frequency diffusivity t12^T S^-1 t12 of the coupled system
/// (equals Ccoef/4 for any resolved basis).
double enhanced_diffusivity(const BallOperators& ops);

} // namespace fene
