#pragma once

// Test-only reference computations, independent of the library's
// Gauss-Jacobi path: closed Beta-function forms and a disk integrator
// built on the substitution r = sin(s) (which absorbs half-integer
// boundary weights analytically) with dense Gauss-Legendre in s and a
// dense angular trapezoid.

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "fene/jacobi.hpp"

namespace oracles {

inline double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// closed forms for the model constants
inline double z_exact(double k) { return std::numbers::pi / (k + 1.0); }
inline double c2_exact(double k) { return k / (k - 1.0); }
inline double ccoef_exact(double k) { return 1.0 / (k + 2.0); }
inline double r1sq_moment_exact(double k) { return 1.0 / (2.0 * (k + 2.0)); } // ∫ R_1^2 psi_inf

// ∫_0^1 r^{2p} (1-r^2)^alpha r dr
inline double radial_monomial_exact(int p, double alpha) { return 0.5 * beta_fn(p + 1.0, alpha + 1.0); }

// ∫_B f(R) (1-|R|^2)^alpha dR with f given in polar coordinates.
// Gauss-Legendre in s after r = sin(s), uniform trapezoid in theta.
inline double disk_integral(const std::function<double(double, double)>& f_polar, double alpha, int n_s = 220,
                            int n_theta = 512) {
    const fene::GaussJacobiRule gl = fene::gauss_jacobi(n_s, 0.0, 0.0); // plain Legendre on [-1,1]
    double total = 0.0;
    for (int i = 0; i < n_s; ++i) {
        const double s = (gl.nodes[i] + 1.0) * (std::numbers::pi / 4.0);
        const double ws = gl.weights[i] * (std::numbers::pi / 4.0);
        const double r = std::sin(s), c = std::cos(s);
        // (1-r^2)^alpha r dr = cos(s)^{2 alpha + 1} sin(s) ds
        const double radial_w = std::pow(c, 2.0 * alpha + 1.0) * r;
        double ang = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n_theta;
            ang += f_polar(r, th);
        }
        ang *= 2.0 * std::numbers::pi / n_theta;
        total += ws * radial_w * ang;
    }
    return total;
}

} // namespace oracles
