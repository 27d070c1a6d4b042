#include "fene/fene_params.hpp"

#include <cmath>
#include <stdexcept>

namespace fene {

FeneParams compute_model_constants(double k, double nu, const BallQuadrature& quad) {
    if (k <= 1.0)
        throw std::invalid_argument(
            "compute_model_constants: k must exceed 1 (c1, c2 integrands scale like (1-|R|^2)^{k-2})");
    if (nu < 0.0)
        throw std::invalid_argument("compute_model_constants: nu must be nonnegative");

    FeneParams p;
    p.k = k;
    p.nu = nu;
    p.Z = quad.wk.integrate(Eigen::ArrayXd::Ones(quad.wk.size()));

    // d_{R_i} psi_inf = -2k R_i (1-r^2)^{k-1} / Z, so both closure
    // integrals reduce to fourth moments against the k-2 weight.
    const auto& w2 = quad.wk2;
    p.c1 = 4.0 * k * k / p.Z * w2.integrate(w2.x1().pow(4));
    p.c2 = 4.0 * k * k / p.Z * w2.integrate(w2.x1().square() * w2.x2().square());
    p.Ccoef = 2.0 / p.Z * quad.wk.integrate(quad.wk.x1().square());

    if (!(p.Z > 0.0) || !(p.Ccoef > 0.0) || !(p.c2 > 0.0))
        throw std::runtime_error("compute_model_constants: nonpositive constant, quadrature is broken");
    if (std::abs(p.c1 / p.c2 - 3.0) > 1e-10)
        throw std::runtime_error("compute_model_constants: c1/c2 deviates from 3 beyond tolerance");
    return p;
}

} // namespace fene
