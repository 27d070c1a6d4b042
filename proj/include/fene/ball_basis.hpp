#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fene/ball_quadrature.hpp"

namespace fene {

/// One basis function phi_{n,m}: radial Jacobi part P_n^{(k,m)}(2r^2-1) r^m
/// times cos(m theta) or sin(m theta). Total polynomial degree is 2n+m.
struct BasisIndex {
    int n = 0;
    int m = 0;
    bool sine = false;
    int degree() const { return 2 * n + m; }
};

/// Values and Cartesian gradients of all basis functions at a set of
/// disk nodes; one basis function per row.
struct BasisTable {
    Eigen::MatrixXd val, dx, dy;
};

/// Equilibrium density (1-|R|^2)^k / Z on the closed unit disk; any k > 0.
/// Throws outside the disk.
double equilibrium_weight(double k, double r1, double r2);

/// Orthonormal polynomial basis on the unit disk under the equilibrium
/// inner product <f,g> = ∫_B f g psi_inf dR with psi_inf = (1-|R|^2)^k / Z.
/// The normalization is closed-form (Jacobi norms), so orthonormality of
/// the quadrature Gram matrix is a genuine exactness check.
class BallBasis {
  public:
    BallBasis(double k, int max_degree);

    double k() const { return k_; }
    int max_degree() const { return pmax_; }
    int size() const { return static_cast<int>(idx_.size()); }
    const std::vector<BasisIndex>& indices() const { return idx_; }

    /// Normalization constant Z = ∫_B (1-|R|^2)^k dR = pi/(k+1).
    double weight_normalization() const { return z_; }

    /// Equilibrium density psi_inf(R) = (1-|R|^2)^k / Z. Throws outside the
    /// closed disk.
    double equilibrium_weight(double r1, double r2) const;

    BasisTable evaluate(const DiskRule& rule) const;
    BasisTable evaluate_points(const Eigen::ArrayXd& r, const Eigen::ArrayXd& theta) const;

    /// Coefficients of an arbitrary polynomial sampled at the alpha=k rule
    /// (projection; exact when the polynomial degree is within range).
    Eigen::VectorXd project(const DiskRule& wk, const Eigen::ArrayXd& f_at_nodes) const;

    /// Exact expansion coefficients of the monomial R_j R_l.
    Eigen::VectorXd quadratic_monomial_coeffs(int j, int l, const DiskRule& wk) const;

  private:
    double norm_constant(int n, int m) const;

    double k_;
    int pmax_;
    double z_;
    std::vector<BasisIndex> idx_;
};

} // namespace fene
