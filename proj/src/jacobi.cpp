#include "fene/jacobi.hpp"

#include <cmath>
#include <stdexcept>

namespace fene {

Eigen::MatrixXd jacobi_values(int nmax, double a, double b, const Eigen::ArrayXd& x) {
    Eigen::MatrixXd P(nmax + 1, x.size());
    P.row(0).setOnes();
    if (nmax >= 1)
        P.row(1) = ((a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0).matrix().transpose();
    for (int n = 2; n <= nmax; ++n) {
        const double c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0);
        const double c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b);
        const double c3 = (2.0 * n + a + b - 1.0) * (2.0 * n + a + b) * (2.0 * n + a + b - 2.0);
        const double c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b);
        P.row(n) = ((c2 + c3 * x.transpose()) * P.row(n - 1).array() - c4 * P.row(n - 2).array()) / c1;
    }
    return P;
}

Eigen::MatrixXd jacobi_derivatives(int nmax, double a, double b, const Eigen::ArrayXd& x) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nmax + 1, x.size());
    if (nmax >= 1) {
        // dP_n^{(a,b)}/dx = (n+a+b+1)/2 * P_{n-1}^{(a+1,b+1)}
        const Eigen::MatrixXd Pp = jacobi_values(nmax - 1, a + 1.0, b + 1.0, x);
        for (int n = 1; n <= nmax; ++n)
            D.row(n) = 0.5 * (n + a + b + 1.0) * Pp.row(n - 1);
    }
    return D;
}

GaussJacobiRule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1)
        throw std::invalid_argument("gauss_jacobi: need at least one node");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::invalid_argument("gauss_jacobi: weight exponents must exceed -1");

    const double ab = alpha + beta;
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (int j = 1; j < n; ++j) {
        const double den = (2.0 * j + ab) * (2.0 * j + ab + 2.0);
        diag[j] = (beta * beta - alpha * alpha) / den;
    }
    for (int j = 1; j < n; ++j) {
        const double num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
        const double den = (2.0 * j + ab) * (2.0 * j + ab) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0);
        sub[j - 1] = std::sqrt(num / den);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss_jacobi: tridiagonal eigensolve failed");

    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    GaussJacobiRule rule;
    rule.nodes = es.eigenvalues().array();
    rule.weights = mu0 * es.eigenvectors().row(0).array().square();
    return rule;
}

} // namespace fene
