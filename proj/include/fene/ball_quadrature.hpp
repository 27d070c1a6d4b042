#pragma once

#include <Eigen/Dense>

namespace fene {

/// Tensor-product rule on the unit disk for integrals
///     ∫_B g(R) (1-|R|^2)^alpha dR,
/// radial Gauss-Jacobi in t = 2r^2-1 (so even powers of r integrate
/// exactly), angular uniform trapezoid. A Cartesian polynomial g of
/// total degree d integrates exactly when d <= 2(2 n_r - 1) radially
/// and the angular band of g is below n_theta.
class DiskRule {
  public:
    DiskRule(int n_r, int n_theta, double alpha);

    double alpha() const { return alpha_; }
    int n_r() const { return static_cast<int>(r_.size()); }
    int n_theta() const { return n_theta_; }
    int size() const { return static_cast<int>(weight_.size()); }

    /// Radial coordinate of each node, node index q = i_r * n_theta + i_theta.
    const Eigen::ArrayXd& r() const { return r_; }
    const Eigen::ArrayXd& theta() const { return theta_; }
    /// Full quadrature weight per node (radial x angular, jacobian included).
    const Eigen::ArrayXd& weights() const { return weight_; }
    const Eigen::ArrayXd& x1() const { return x1_; }
    const Eigen::ArrayXd& x2() const { return x2_; }

    /// ∫_B f (1-|R|^2)^alpha dR for f sampled at the nodes.
    double integrate(const Eigen::ArrayXd& f_at_nodes) const { return (f_at_nodes * weight_).sum(); }

  private:
    double alpha_;
    int n_theta_;
    Eigen::ArrayXd r_, theta_, weight_, x1_, x2_;
};

/// The three disk rules used throughout: weight exponents k, k-1, k-2
/// (mass/stiffness/moments; stress; drag-closure constants). Requires k > 1
/// so that the k-2 rule exists.
struct BallQuadrature {
    BallQuadrature(double k, int n_r, int n_theta);

    double k;
    DiskRule wk;  ///< alpha = k
    DiskRule wk1; ///< alpha = k-1
    DiskRule wk2; ///< alpha = k-2
};

} // namespace fene
