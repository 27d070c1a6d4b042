#include "fene/ball_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fene/jacobi.hpp"

namespace fene {

double equilibrium_weight(double k, double r1, double r2) {
    if (!(k > 0.0))
        throw std::invalid_argument("equilibrium_weight: k must be positive");
    const double rsq = r1 * r1 + r2 * r2;
    if (rsq > 1.0 + 1e-14)
        throw std::domain_error("equilibrium_weight: point outside the closed unit disk");
    const double z = std::numbers::pi / (k + 1.0);
    return std::pow(std::max(0.0, 1.0 - rsq), k) / z;
}

BallBasis::BallBasis(double k, int max_degree) : k_(k), pmax_(max_degree) {
    if (k <= 1.0)
        throw std::invalid_argument("BallBasis: k must exceed 1");
    if (max_degree < 0)
        throw std::invalid_argument("BallBasis: max degree must be nonnegative");
    z_ = std::numbers::pi / (k + 1.0);

    for (int d = 0; d <= pmax_; ++d) {
        for (int m = d % 2; m <= d; m += 2) {
            const int n = (d - m) / 2;
            if (m == 0) {
                idx_.push_back({n, 0, false});
            } else {
                idx_.push_back({n, m, false});
                idx_.push_back({n, m, true});
            }
        }
    }
    // deterministic flat indexing: (degree, angular frequency, cos before sin)
    std::sort(idx_.begin(), idx_.end(), [](const BasisIndex& a, const BasisIndex& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        if (a.m != b.m) return a.m < b.m;
        return a.sine < b.sine;
    });
}

double BallBasis::equilibrium_weight(double r1, double r2) const {
    return fene::equilibrium_weight(k_, r1, r2);
}

double BallBasis::norm_constant(int n, int m) const {
    // <phi^2>_{psi_inf} = N^2 (A_m / Z) G / (2 (2n+k+m+1)),
    // A_m = 2 pi (m=0) or pi, G = Gamma(n+k+1)Gamma(n+m+1)/(Gamma(n+k+m+1) n!)
    const double am = (m == 0) ? 2.0 * std::numbers::pi : std::numbers::pi;
    const double g = std::exp(std::lgamma(n + k_ + 1.0) + std::lgamma(n + m + 1.0) -
                              std::lgamma(n + k_ + m + 1.0) - std::lgamma(n + 1.0));
    return std::sqrt(z_ * 2.0 * (2.0 * n + k_ + m + 1.0) / (am * g));
}

BasisTable BallBasis::evaluate(const DiskRule& rule) const {
    return evaluate_points(rule.r(), rule.theta());
}

BasisTable BallBasis::evaluate_points(const Eigen::ArrayXd& r, const Eigen::ArrayXd& theta) const {
    const int q = size();
    const auto npts = r.size();
    BasisTable t;
    t.val.resize(q, npts);
    t.dx.resize(q, npts);
    t.dy.resize(q, npts);

    const Eigen::ArrayXd tt = 2.0 * r.square() - 1.0;
    const Eigen::ArrayXd cth = theta.cos();
    const Eigen::ArrayXd sth = theta.sin();

    const int nmax = pmax_ / 2;
    std::vector<Eigen::MatrixXd> pv(pmax_ + 1), pd(pmax_ + 1);
    for (int m = 0; m <= pmax_; ++m) {
        pv[m] = jacobi_values(nmax, k_, m, tt);
        pd[m] = jacobi_derivatives(nmax, k_, m, tt);
    }

    for (int p = 0; p < q; ++p) {
        const int n = idx_[p].n;
        const int m = idx_[p].m;
        const bool sine = idx_[p].sine;
        const double nc = norm_constant(n, m);
        const Eigen::ArrayXd pn = pv[m].row(n).transpose().array();
        const Eigen::ArrayXd dn = pd[m].row(n).transpose().array();
        const Eigen::ArrayXd rm = r.pow(m);
        const Eigen::ArrayXd rm1 = (m > 0) ? Eigen::ArrayXd(r.pow(m - 1)) : Eigen::ArrayXd::Zero(npts);

        const Eigen::ArrayXd rad = nc * pn * rm;
        // d/dr of P_n(2r^2-1) r^m, and (1/r) d/dtheta of the angular part
        // folded into r^{m-1} so nothing is singular at the nodes
        const Eigen::ArrayXd drad = nc * (dn * 4.0 * r * rm + (m > 0 ? Eigen::ArrayXd(m * pn * rm1) : Eigen::ArrayXd::Zero(npts)));

        Eigen::ArrayXd ang(npts), dang(npts);
        if (m == 0) {
            ang.setOnes();
            dang.setZero();
        } else {
            const Eigen::ArrayXd c = (m * theta).cos();
            const Eigen::ArrayXd s = (m * theta).sin();
            ang = sine ? s : c;
            dang = sine ? Eigen::ArrayXd(m * c) : Eigen::ArrayXd(-m * s);
        }

        const Eigen::ArrayXd fr = drad * ang;
        const Eigen::ArrayXd ft = nc * pn * rm1 * dang; // (1/r) d/dtheta
        t.val.row(p) = (rad * ang).matrix().transpose();
        t.dx.row(p) = (cth * fr - sth * ft).matrix().transpose();
        t.dy.row(p) = (sth * fr + cth * ft).matrix().transpose();
    }
    return t;
}

Eigen::VectorXd BallBasis::project(const DiskRule& wk, const Eigen::ArrayXd& f_at_nodes) const {
    const BasisTable t = evaluate(wk);
    Eigen::VectorXd c(size());
    for (int p = 0; p < size(); ++p)
        c[p] = wk.integrate(t.val.row(p).transpose().array() * f_at_nodes) / z_;
    return c;
}

Eigen::VectorXd BallBasis::quadratic_monomial_coeffs(int j, int l, const DiskRule& wk) const {
    const Eigen::ArrayXd xj = (j == 0) ? wk.x1() : wk.x2();
    const Eigen::ArrayXd xl = (l == 0) ? wk.x1() : wk.x2();
    return project(wk, xj * xl);
}

} // namespace fene
