#include "fene/ball_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fene/jacobi.hpp"

namespace fene {

DiskRule::DiskRule(int n_r, int n_theta, double alpha) : alpha_(alpha), n_theta_(n_theta) {
    if (alpha <= -1.0)
        throw std::invalid_argument("DiskRule: weight exponent must exceed -1");
    if (n_r < 1 || n_theta < 1)
        throw std::invalid_argument("DiskRule: empty rule");

    // substitute t = 2r^2 - 1:  ∫_0^1 h(r)(1-r^2)^alpha r dr
    //   = 2^{-alpha}/4 ∫_{-1}^1 h(sqrt((1+t)/2)) (1-t)^alpha dt
    const GaussJacobiRule gj = gauss_jacobi(n_r, alpha, 0.0);
    const Eigen::ArrayXd rr = ((1.0 + gj.nodes) / 2.0).sqrt();
    const Eigen::ArrayXd wr = gj.weights * (std::pow(2.0, -alpha) / 4.0);

    const double wth = 2.0 * std::numbers::pi / n_theta;
    r_.resize(n_r * n_theta);
    theta_.resize(n_r * n_theta);
    weight_.resize(n_r * n_theta);
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            const int q = i * n_theta + j;
            r_[q] = rr[i];
            theta_[q] = j * wth;
            weight_[q] = wr[i] * wth;
        }
    }
    x1_ = r_ * theta_.cos();
    x2_ = r_ * theta_.sin();
}

BallQuadrature::BallQuadrature(double k_, int n_r, int n_theta)
    : k(k_),
      wk(n_r, n_theta, k_),
      wk1(n_r, n_theta, k_ - 1.0),
      wk2(n_r, n_theta, k_ - 2.0) {
    if (k_ <= 1.0)
        throw std::invalid_argument(
            "BallQuadrature: k must exceed 1 (the drag-closure integrands carry the weight "
            "(1-|R|^2)^{k-2}, which is integrable only for k > 1)");
}

} // namespace fene
