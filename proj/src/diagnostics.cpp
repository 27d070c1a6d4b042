#include "fene/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace fene {

bool DiagnosticsRecord::all_finite() const {
    for (double v : {t, u_l2, u_h1, u_hs, grad_u_hsm1, psi_L2, psi_1L2, psi_sL2, grad_psi_sL2, psi_sH1dot, E1, E2,
                     f, g, split_u, split_psi, du_residual, mass_max, div_max})
        if (!std::isfinite(v)) return false;
    return true;
}

double sobolev_multiplier(double xi1, double xi2, int s) {
    const double a = xi1 * xi1, b = xi2 * xi2;
    double total = 0.0;
    for (int j = 0; j <= s; ++j) {
        double term = 0.0, pa = 1.0;
        for (int i = 0; i <= j; ++i) {
            term += pa * std::pow(b, j - i);
            pa *= a;
        }
        total += term;
    }
    return total;
}

NormSet weighted_norms(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops, int s) {
    if (s < 1)
        throw std::invalid_argument("weighted_norms: s must be at least 1");
    const int m = g.m();
    const double vol = g.area();
    const Eigen::MatrixXcd sc = ops.S * state.c.spec;

    NormSet n;
    for (int j = 0; j < m; ++j) {
        const double xi2c = g.xi(j);
        for (int i = 0; i < m; ++i) {
            const double xi1c = g.xi(i);
            const double x2 = xi1c * xi1c + xi2c * xi2c;
            const double ms = sobolev_multiplier(xi1c, xi2c, s);
            const double msm1 = sobolev_multiplier(xi1c, xi2c, s - 1);
            const int col = i + m * j;

            const double uu = std::norm(state.u.c1(i, j)) + std::norm(state.u.c2(i, j));
            n.u_l2 += uu;
            n.u_h1 += (1.0 + x2) * uu;
            n.u_hs += ms * uu;
            n.grad_u_hsm1 += msm1 * x2 * uu;
            n.du_l2 += 0.5 * x2 * uu; // |Du|^2 = |grad u|^2 / 2 for divergence-free u

            const double cc = state.c.spec.col(col).squaredNorm();
            const double ch = state.c.spec.col(col).dot(sc.col(col)).real();
            n.psi_L2 += cc;
            n.psi_1L2 += (1.0 + x2) * cc;
            n.psi_sL2 += ms * cc;
            n.grad_psi_sL2 += ms * x2 * cc;
            n.grad_psi_1L2 += (1.0 + x2) * x2 * cc;
            n.psi_sH1dot += ms * ch;
            n.psi_1H1dot += (1.0 + x2) * ch;
        }
    }
    const auto root = [vol](double v) { return std::sqrt(std::max(0.0, v) * vol); };
    n.u_l2 = root(n.u_l2);
    n.u_h1 = root(n.u_h1);
    n.u_hs = root(n.u_hs);
    n.grad_u_hsm1 = root(n.grad_u_hsm1);
    n.du_l2 = root(n.du_l2);
    n.psi_L2 = root(n.psi_L2);
    n.psi_1L2 = root(n.psi_1L2);
    n.psi_sL2 = root(n.psi_sL2);
    n.grad_psi_sL2 = root(n.grad_psi_sL2);
    n.grad_psi_1L2 = root(n.grad_psi_1L2);
    n.psi_sH1dot = root(n.psi_sH1dot);
    n.psi_1H1dot = root(n.psi_1H1dot);
    return n;
}

double moment_cross_term(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops) {
    const int m = g.m();
    const VelocityGradient vg = velocity_gradient(g, state.u);
    double x = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            const Eigen::RowVectorXd mc = ops.moment2[j][k].transpose() * state.c.phys;
            const Eigen::ArrayXXd mgrid = Eigen::Map<const Eigen::ArrayXXd>(mc.data(), m, m);
            x += (mgrid * 0.5 * (vg.d[k][j] + vg.d[j][k])).sum();
        }
    return x * g.cell_area();
}

double lyapunov_a_threshold(const BallOperators& ops) {
    // |X| <= sigma |psi|_{L2} |Du| with sigma the operator norm of the
    // stacked m2 contraction; 2 a sigma <= 1 makes |2aX| <= Theta / 2
    const int q = ops.size();
    Eigen::MatrixXd stack(4, q);
    int r = 0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) stack.row(r++) = ops.moment2[j][k].transpose();
    const double sigma = stack.jacobiSvd().singularValues()(0);
    return 0.5 / sigma;
}

LyapunovPair lyapunov_pair(const NormSet& n, double cross, double a, double ccoef, double nu) {
    LyapunovPair lp;
    lp.cross = cross;
    lp.f = n.u_h1 * n.u_h1 + n.psi_1L2 * n.psi_1L2 - 2.0 * a * cross;
    lp.g = nu * n.grad_psi_1L2 * n.grad_psi_1L2 + n.psi_1H1dot * n.psi_1H1dot +
           2.0 * a * ccoef * n.du_l2 * n.du_l2;
    return lp;
}

SplitMass fourier_split_mass(const TorusGrid& g, const MicroMacroState& state, double t, double a, double ccoef,
                             double eta, double s_exp) {
    if (!(eta > 0.0) || !(s_exp > 0.0) || !(a > 0.0))
        throw std::invalid_argument("fourier_split_mass: a, eta, s_exp must be positive");
    const double r2 = 2.0 * s_exp / (a * ccoef * (eta + t));
    SplitMass sm;
    sm.radius = std::sqrt(r2);
    sm.saturated = sm.radius < g.xi_min();

    const int m = g.m();
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            if (g.xi_sq()(i, j) > r2) continue;
            sm.mass_u += std::norm(state.u.c1(i, j)) + std::norm(state.u.c2(i, j));
            sm.mass_psi += state.c.spec.col(i + m * j).squaredNorm();
        }
    sm.mass_u *= g.area();
    sm.mass_psi *= g.area();
    return sm;
}

EnergyFunctionals energy_functionals(const std::vector<DiagnosticsRecord>& records, double nu) {
    EnergyFunctionals ef;
    if (records.empty()) return ef;
    const size_t n = records.size();
    if (n >= 3) {
        const double dt0 = records[1].t - records[0].t;
        for (size_t i = 2; i < n; ++i) {
            const double dti = records[i].t - records[i - 1].t;
            if (std::abs(dti - dt0) > 1e-9 * (1.0 + std::abs(dt0)))
                throw std::invalid_argument("energy_functionals: records are not uniformly spaced; resample first");
        }
    }
    ef.e1.resize(n);
    ef.e2.resize(n);
    ef.e1_alt.resize(n);
    double sup_u = 0.0, sup_psi = 0.0, int_both = 0.0, int_alt = 0.0, int_gradu = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        sup_u = std::max(sup_u, r.u_hs * r.u_hs);
        sup_psi = std::max(sup_psi, r.psi_sL2 * r.psi_sL2);
        if (i > 0) {
            const auto& p = records[i - 1];
            const double h = 0.5 * (r.t - p.t);
            int_both += h * ((p.grad_psi_sL2 * p.grad_psi_sL2 + p.psi_sH1dot * p.psi_sH1dot) +
                             (r.grad_psi_sL2 * r.grad_psi_sL2 + r.psi_sH1dot * r.psi_sH1dot));
            int_alt += h * ((nu * p.grad_psi_sL2 * p.grad_psi_sL2 + p.psi_sH1dot * p.psi_sH1dot) +
                            (nu * r.grad_psi_sL2 * r.grad_psi_sL2 + r.psi_sH1dot * r.psi_sH1dot));
            int_gradu += h * (p.grad_u_hsm1 * p.grad_u_hsm1 + r.grad_u_hsm1 * r.grad_u_hsm1);
        }
        ef.e1[i] = sup_u + sup_psi + nu * int_both;
        ef.e1_alt[i] = sup_u + sup_psi + int_alt;
        ef.e2[i] = int_gradu;
    }
    return ef;
}

DecayFit decay_fit(const std::vector<DiagnosticsRecord>& records, double DiagnosticsRecord::* field, double t0,
                   double t1) {
    if (!(t1 > t0))
        throw std::invalid_argument("decay_fit: empty window");
    if (std::log10((1.0 + t1) / (1.0 + t0)) < 1.0)
        throw std::invalid_argument("decay_fit: window spans less than one decade of 1+t");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& r : records) {
        if (r.t < t0 || r.t > t1) continue;
        const double v = r.*field;
        if (!(v > 0.0))
            throw std::invalid_argument("decay_fit: nonpositive norm inside the window");
        const double x = std::log(1.0 + r.t), y = std::log(v);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 3)
        throw std::invalid_argument("decay_fit: too few records in the window");
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double icept = (sy - slope * sx) / n;

    double ss = 0.0;
    for (const auto& r : records) {
        if (r.t < t0 || r.t > t1) continue;
        const double x = std::log(1.0 + r.t), y = std::log(r.*field);
        const double e = y - (icept + slope * x);
        ss += e * e;
    }
    DecayFit fit;
    fit.alpha = -slope;
    fit.stderr_ = std::sqrt(ss / std::max(1, n - 2) * n / det);
    fit.t0 = t0;
    fit.t1 = t1;
    fit.n_points = n;
    return fit;
}

double split_saturation_time(const TorusGrid& g, double a, double ccoef, double eta, double s_exp) {
    return 2.0 * s_exp / (a * ccoef * g.xi_min() * g.xi_min()) - eta;
}

std::optional<double> measured_saturation_time(const std::vector<DiagnosticsRecord>& records) {
    for (const auto& r : records)
        if (r.split_saturated) return r.t;
    return std::nullopt;
}

std::pair<double, double> auto_decay_window(const TorusGrid& g, double a, double ccoef, double eta, double s_exp) {
    return {5.0, split_saturation_time(g, a, ccoef, eta, s_exp) / 2.0};
}

} // namespace fene
