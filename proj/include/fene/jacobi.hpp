#pragma once

#include <Eigen/Dense>

namespace fene {

/// Values of the Jacobi polynomials P_0^{(a,b)}..P_nmax^{(a,b)} at x,
/// one polynomial per row.
Eigen::MatrixXd jacobi_values(int nmax, double a, double b, const Eigen::ArrayXd& x);

/// First derivatives dP_n^{(a,b)}/dx, same layout as jacobi_values.
Eigen::MatrixXd jacobi_derivatives(int nmax, double a, double b, const Eigen::ArrayXd& x);

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta,
/// exact for polynomials of degree <= 2n-1. Golub-Welsch.
struct GaussJacobiRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
};
GaussJacobiRule gauss_jacobi(int n, double alpha, double beta = 0.0);

} // namespace fene
