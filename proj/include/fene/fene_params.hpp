#pragma once

#include "fene/ball_quadrature.hpp"

namespace fene {

/// Physical parameters of the dumbbell model and the derived spring-law
/// constants. All constants are quadrature evaluations of their defining
/// integrals, checked against the identities c1 = 3 c2 > 0.
struct FeneParams {
    double k = 2.0;  ///< spring-potential exponent, k > 1
    double nu = 1.0; ///< center-of-mass diffusion rate, >= 0
    int d_config = 2;

    double Z = 0.0;     ///< ∫_B (1-|R|^2)^k dR
    double Ccoef = 0.0; ///< 2 ∫_B R_1^2 psi_inf dR
    double c1 = 0.0;    ///< -2k ∫_B R_1^3 d_{R_1} psi_inf / (1-|R|^2) dR
    double c2 = 0.0;    ///< -2k ∫_B R_1^2 R_2 d_{R_2} psi_inf / (1-|R|^2) dR
};

/// Evaluates (c1, c2, Ccoef, Z) on the given rules and verifies
/// positivity and c1 = 3 c2 to quadrature tolerance.
FeneParams compute_model_constants(double k, double nu, const BallQuadrature& quad);

} // namespace fene
