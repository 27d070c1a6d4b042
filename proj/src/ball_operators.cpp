#include "fene/ball_operators.hpp"

#include <cmath>
#include <stdexcept>

namespace fene {

BallOperators assemble_operators(const BallBasis& basis, const BallQuadrature& quad) {
    if (std::abs(basis.k() - quad.k) > 0.0)
        throw std::invalid_argument("assemble_operators: basis and quadrature disagree on k");
    if (basis.max_degree() < 2)
        throw std::invalid_argument(
            "assemble_operators: basis degree must be at least 2 so the moments R_j R_l are representable");
    const double z = basis.weight_normalization();
    const double k = basis.k();

    const BasisTable tk = basis.evaluate(quad.wk);
    const BasisTable tk1 = basis.evaluate(quad.wk1);

    const Eigen::ArrayXd wk = quad.wk.weights() / z;
    const Eigen::ArrayXd wk1 = quad.wk1.weights() / z;
    const std::array<Eigen::ArrayXd, 2> x = {quad.wk.x1(), quad.wk.x2()};
    const std::array<Eigen::ArrayXd, 2> x1 = {quad.wk1.x1(), quad.wk1.x2()};
    const std::array<const Eigen::MatrixXd*, 2> grad = {&tk.dx, &tk.dy};

    BallOperators ops;

    // stiffness: weak form of -Lpsi after integration by parts; the no-flux
    // condition is natural for this form, no boundary rows are touched
    const Eigen::MatrixXd wdx = tk.dx * wk.matrix().asDiagonal();
    const Eigen::MatrixXd wdy = tk.dy * wk.matrix().asDiagonal();
    ops.S = wdx * tk.dx.transpose() + wdy * tk.dy.transpose();
    const double asym = (ops.S - ops.S.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
        throw std::runtime_error("assemble_operators: stiffness asymmetry exceeds 1e-12, quadrature exactness is broken");
    ops.S = ((ops.S + ops.S.transpose()) / 2.0).eval();

    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Eigen::MatrixXd wg = *grad[i] * (wk * x[j]).matrix().asDiagonal();
            ops.drag[i][j] = wg * tk.val.transpose();
            ops.drag_src[i][j] = ops.drag[i][j].col(0); // phi_0 = 1
            // stress kernel R_l d_{R_m}U psi_inf = 2k R_l R_m (1-r^2)^{k-1}/Z
            ops.stress[i][j] = 2.0 * k * (tk1.val * (wk1 * x1[i] * x1[j]).matrix()).eval();
            ops.moment2[i][j] = tk.val * (wk * x[i] * x[j]).matrix();
        }
    }

    for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
            ops.stiff_moment2[j][l] = ops.S * basis.quadratic_monomial_coeffs(j, l, quad.wk);

    //   d_{R_i}(R_l d_{R_m}U) = 2k (d_il R_m + d_im R_l)/(1-r^2) + 4k R_i R_l R_m /(1-r^2)^2
    // so the closure entries split over the k-1 and k-2 rules, both exact
    const Eigen::ArrayXd wk2 = quad.wk2.weights() / z;
    const std::array<Eigen::ArrayXd, 2> x2 = {quad.wk2.x1(), quad.wk2.x2()};
    for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double v = 4.0 * k * (wk2 * x2[i] * x2[j] * x2[l] * x2[m]).sum();
                    if (i == l) v += 2.0 * k * (wk1 * x1[j] * x1[m]).sum();
                    if (i == m) v += 2.0 * k * (wk1 * x1[j] * x1[l]).sum();
                    ops.closure[l][m][i][j] = v;
                }

    return ops;
}

SpectralGap spectral_gap(const BallOperators& ops, const BallBasis& basis, const BallQuadrature& quad) {
    const int q = ops.size();
    // row/column 0 of S vanish identically (grad phi_0 = 0), so the zero-mass
    // restriction is the trailing principal block
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.S.bottomRightCorner(q - 1, q - 1));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_gap: eigensolve failed");
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > 0.0))
        throw std::runtime_error("spectral_gap: nonpositive gap, assembly is broken");

    // Rayleigh quotient of phi = R_1 (degree-1 mode)
    const Eigen::VectorXd c = basis.project(quad.wk, quad.wk.x1());
    const double rayleigh = c.dot(ops.S * c) / c.squaredNorm();
    return {lmin, rayleigh};
}

InequalityRatios inequality_ratios(const Eigen::VectorXd& coeffs, const BallOperators& ops,
                                   const BallBasis& basis, const BallQuadrature& quad) {
    if (std::abs(coeffs[0]) > 1e-12 * (1.0 + coeffs.norm()))
        throw std::invalid_argument("inequality_ratios: coefficient 0 (the R-mass) must vanish");
    const double h1 = coeffs.dot(ops.S * coeffs);
    if (!(h1 > 0.0))
        throw std::invalid_argument("inequality_ratios: degenerate input with zero H1dot norm");

    const double z = basis.weight_normalization();
    InequalityRatios out;
    out.poincare = coeffs.squaredNorm() / h1;

    // ∫ |psi|/(1-|R|) dR = (1/Z) ∫ (1+r)(1-r^2)^{k-1} |phi| dR: the boundary
    // singularity is removed analytically, leaving the alpha = k-1 rule
    {
        const BasisTable t = basis.evaluate(quad.wk1);
        const Eigen::ArrayXd phi = (coeffs.transpose() * t.val).transpose().array();
        const double lhs = quad.wk1.integrate((1.0 + quad.wk1.r()) * phi.abs()) / z;
        out.tau_hardy = lhs * lhs / h1;
    }
    // ∫ psi^2/(psi_inf (1-|R|)^2) dR = (1/Z) ∫ (1+r)^2 (1-r^2)^{k-2} phi^2 dR
    {
        const BasisTable t = basis.evaluate(quad.wk2);
        const Eigen::ArrayXd phi = (coeffs.transpose() * t.val).transpose().array();
        const double lhs = quad.wk2.integrate((1.0 + quad.wk2.r()).square() * phi.square()) / z;
        out.hardy = lhs / h1;
    }
    return out;
}

double enhanced_diffusivity(const BallOperators& ops) {
    const int q = ops.size();
    const Eigen::VectorXd t12 = ops.stress[0][1].tail(q - 1);
    const Eigen::MatrixXd s = ops.S.bottomRightCorner(q - 1, q - 1);
    return t12.dot(s.llt().solve(t12));
}

} // namespace fene
