#include "fene/integrator.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "fene/rng.hpp"

namespace fene {

ImexIntegrator::ImexIntegrator(const TorusGrid& grid, const BallOperators& ops, const FeneParams& params,
                               SchemeConfig cfg)
    : grid_(grid), ops_(ops), params_(params), cfg_(cfg) {
    if (!(cfg_.dt > 0.0))
        throw std::invalid_argument("ImexIntegrator: dt must be positive");
    theta_ = (cfg_.scheme == Scheme::ImexEuler) ? 1.0 : 0.5;
    rebuild_factors();
}

void ImexIntegrator::set_dt(double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("ImexIntegrator: dt must be positive");
    if (dt == cfg_.dt) return;
    cfg_.dt = dt;
    have_history_ = false;
    rebuild_factors(); // cached factorizations are keyed by (dt, nu, |xi|^2)
}

void ImexIntegrator::rebuild_factors() {
    const int m = grid_.m();
    key_slot_.assign(m * m, -1);
    factors_.clear();

    std::unordered_map<int, int> slot_of_key;
    const double fac = std::pow(2.0 * std::numbers::pi / grid_.l_box(), 2);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            const int key = grid_.kappa_sq()(i, j);
            auto it = slot_of_key.find(key);
            if (it == slot_of_key.end()) {
                const double xi2 = fac * key;
                Eigen::MatrixXd a = theta_ * cfg_.dt * ops_.S;
                a.diagonal().array() += 1.0 + theta_ * cfg_.dt * params_.nu * xi2;
                factors_.emplace_back(a);
                if (factors_.back().info() != Eigen::Success)
                    throw std::runtime_error("ImexIntegrator: implicit factorization failed");
                it = slot_of_key.emplace(key, static_cast<int>(factors_.size()) - 1).first;
            }
            key_slot_[i + m * j] = it->second;
        }
}

void ImexIntegrator::implicit_solve(Eigen::MatrixXcd& rhs) const {
    const int q = static_cast<int>(rhs.rows());
    Eigen::MatrixXd work(q, 2);
    for (int col = 0; col < rhs.cols(); ++col) {
        const auto& llt = factors_[key_slot_[col]];
        work.col(0) = rhs.col(col).real();
        work.col(1) = rhs.col(col).imag();
        llt.solveInPlace(work);
        rhs.col(col).real() = work.col(0);
        rhs.col(col).imag() = work.col(1);
    }
}

void ImexIntegrator::step(MicroMacroState& state) {
    const double dt = cfg_.dt;
    const VelocityGradient vg = velocity_gradient(grid_, state.u);

    const double vmax = std::sqrt((vg.u1.square() + vg.u2.square()).maxCoeff());
    if (vmax > 0.0) {
        const double dt_cfl = cfg_.cfl_safety * grid_.dx() / vmax;
        if (dt > dt_cfl)
            throw StepRejectedError("advective CFL violated; reduce dt to the suggested value", dt_cfl);
    }

    VectorField fu = rhs_velocity(grid_, state, ops_, cfg_.rhs, vg);
    Eigen::MatrixXcd ec = explicit_distribution_tendency(grid_, state, ops_, cfg_.rhs, vg);

    Eigen::MatrixXcd rhs;
    if (cfg_.scheme == Scheme::ImexEuler) {
        state.u.c1 += dt * fu.c1;
        state.u.c2 += dt * fu.c2;
        rhs = state.c.spec + dt * ec;
    } else {
        if (!have_history_) {
            fu_prev_ = fu;
            ec_prev_ = ec;
            have_history_ = true;
        }
        state.u.c1 += dt * (1.5 * fu.c1 - 0.5 * fu_prev_.c1);
        state.u.c2 += dt * (1.5 * fu.c2 - 0.5 * fu_prev_.c2);
        // Crank-Nicolson on nu*lap and S, Adams-Bashforth on the rest
        const Eigen::ArrayXd lam =
            Eigen::Map<const Eigen::ArrayXd>(grid_.xi_sq().data(), grid_.xi_sq().size());
        rhs = state.c.spec - (0.5 * dt) * (ops_.S * state.c.spec);
        rhs -= (0.5 * dt * params_.nu) * (state.c.spec.array().rowwise() * lam.transpose().cast<Complex>()).matrix();
        rhs += dt * (1.5 * ec - 0.5 * ec_prev_);
        fu_prev_ = fu;
        ec_prev_ = std::move(ec);
    }

    implicit_solve(rhs);
    state.c.spec = std::move(rhs);

    // invariants are re-pinned exactly: mean-free divergence-free u,
    // dealiased fields
    leray_project(grid_, state.u);
    state.u.c1(0, 0) = 0.0;
    state.u.c2(0, 0) = 0.0;
    grid_.dealias(state.u.c1);
    grid_.dealias(state.u.c2);
    const Eigen::ArrayXd maskflat =
        Eigen::Map<const Eigen::ArrayXd>(grid_.dealias_mask().data(), grid_.dealias_mask().size());
    state.c.spec = (state.c.spec.array().rowwise() * maskflat.transpose().cast<Complex>()).matrix();

    state.c.sync_phys_from_spec(grid_);
    state.t += dt;
}

MicroMacroState generate_initial_data(const TorusGrid& grid, int q, const BallOperators& ops, double epsilon,
                                      double xi_cutoff, std::uint64_t seed, int s) {
    MicroMacroState st = MicroMacroState::zero(q, grid);
    if (epsilon == 0.0) return st;

    Rng rng(seed);
    const int m = grid.m();
    const double twopi = 2.0 * std::numbers::pi;

    // canonical half-lattice; the mirror mode gets the conjugate
    const auto canonical = [&](int ki, int kj) { return ki > 0 || (ki == 0 && kj > 0); };

    for (int i = 0; i < m; ++i) {
        const int ki = grid.kappa(i);
        for (int j = 0; j < m; ++j) {
            const int kj = grid.kappa(j);
            if (!canonical(ki, kj)) continue;
            if (grid.dealias_mask()(i, j) == 0.0) continue;
            const double xi1 = grid.xi(i), xi2 = grid.xi(j);
            const double mag = std::sqrt(xi1 * xi1 + xi2 * xi2);
            if (mag == 0.0 || mag > xi_cutoff) continue;

            const int in = (m - i) % m, jn = (m - j) % m;

            const Complex phase = std::polar(1.0, twopi * rng.uniform());
            st.u.c1(i, j) = phase * (-xi2 / mag);
            st.u.c2(i, j) = phase * (xi1 / mag);
            st.u.c1(in, jn) = std::conj(st.u.c1(i, j));
            st.u.c2(in, jn) = std::conj(st.u.c2(i, j));

            Eigen::VectorXcd d(q);
            d[0] = 0.0; // zero R-mass
            for (int p = 1; p < q; ++p) d[p] = Complex(rng.normal(), rng.normal());
            d.tail(q - 1).normalize();
            const int col = i + m * j, coln = in + m * jn;
            st.c.spec.col(col) = d;
            st.c.spec.col(coln) = d.conjugate();
        }
    }
    st.c.sync_phys_from_spec(grid);

    const NormSet n = weighted_norms(grid, st, ops, s);
    if (n.u_hs > 0.0) {
        st.u.c1 *= epsilon / n.u_hs;
        st.u.c2 *= epsilon / n.u_hs;
    }
    if (n.psi_sL2 > 0.0) {
        st.c.spec *= epsilon / n.psi_sL2;
        st.c.phys *= epsilon / n.psi_sL2;
    }
    return st;
}

namespace {

DiagnosticsRecord make_record(const TorusGrid& grid, const BallOperators& ops, const FeneParams& params,
                              const MicroMacroState& state, const SchemeConfig& cfg,
                              const MicroMacroState* prev_for_du) {
    DiagnosticsRecord r;
    r.t = state.t;
    const NormSet n = weighted_norms(grid, state, ops, cfg.sobolev_s);
    r.u_l2 = n.u_l2;
    r.u_h1 = n.u_h1;
    r.u_hs = n.u_hs;
    r.grad_u_hsm1 = n.grad_u_hsm1;
    r.psi_L2 = n.psi_L2;
    r.psi_1L2 = n.psi_1L2;
    r.psi_sL2 = n.psi_sL2;
    r.grad_psi_sL2 = n.grad_psi_sL2;
    r.psi_sH1dot = n.psi_sH1dot;

    const double cross = moment_cross_term(grid, state, ops);
    const LyapunovPair lp = lyapunov_pair(n, cross, cfg.lyapunov_a, params.Ccoef, params.nu);
    r.f = lp.f;
    r.g = lp.g;

    const SplitMass sm =
        fourier_split_mass(grid, state, state.t, cfg.lyapunov_a, params.Ccoef, cfg.eta, cfg.s_exp);
    r.split_u = sm.mass_u;
    r.split_psi = sm.mass_psi;
    r.split_saturated = sm.saturated;

    if (prev_for_du) {
        const DuReconstruction du = reconstruct_du(grid, *prev_for_du, state, ops, params, cfg.rhs);
        r.du_residual = du.residual_rms;
        r.du_reference = du.reference_rms;
    }

    r.mass_max = state.mass_max();
    r.div_max = state.u.div_max(grid);
    return r;
}

} // namespace

RunResult run_simulation(const TorusGrid& grid, const BallOperators& ops, const FeneParams& params,
                         const MicroMacroState& initial, const SchemeConfig& cfg,
                         const RecordCallback& on_record) {
    RunResult out;
    out.final_state = initial;
    MicroMacroState& state = out.final_state;

    ImexIntegrator integ(grid, ops, params, cfg);
    const long n_steps = std::lround(std::ceil(cfg.t_final / cfg.dt - 1e-9));

    // running pieces of the energy functionals, trapezoid between records
    double sup_u = 0.0, sup_psi = 0.0, int_both = 0.0, int_alt = 0.0, int_gradu = 0.0;
    double prev_t = state.t, prev_diss_both = 0.0, prev_diss_alt = 0.0, prev_gradu = 0.0;
    bool first_record = true;

    const auto emit = [&](const MicroMacroState* prev_for_du) {
        DiagnosticsRecord r = make_record(grid, ops, params, state, cfg, prev_for_du);
        sup_u = std::max(sup_u, r.u_hs * r.u_hs);
        sup_psi = std::max(sup_psi, r.psi_sL2 * r.psi_sL2);
        const double diss_both = r.grad_psi_sL2 * r.grad_psi_sL2 + r.psi_sH1dot * r.psi_sH1dot;
        const double diss_alt = params.nu * r.grad_psi_sL2 * r.grad_psi_sL2 + r.psi_sH1dot * r.psi_sH1dot;
        const double gradu = r.grad_u_hsm1 * r.grad_u_hsm1;
        if (!first_record) {
            const double h = 0.5 * (r.t - prev_t);
            int_both += h * (prev_diss_both + diss_both);
            int_alt += h * (prev_diss_alt + diss_alt);
            int_gradu += h * (prev_gradu + gradu);
        }
        first_record = false;
        prev_t = r.t;
        prev_diss_both = diss_both;
        prev_diss_alt = diss_alt;
        prev_gradu = gradu;
        r.E1 = sup_u + sup_psi + params.nu * int_both;
        r.E1_alt = sup_u + sup_psi + int_alt;
        r.E2 = int_gradu;

        if (!r.all_finite()) {
            if (!out.records.empty()) throw BlowUpError(out.records.back());
            throw BlowUpError(DiagnosticsRecord{});
        }
        out.records.push_back(r);
        if (on_record) on_record(r, state);
    };

    emit(nullptr);
    MicroMacroState stash = state;
    for (long step = 0; step < n_steps; ++step) {
        const bool record_next = ((step + 1) % cfg.record_every == 0) || (step + 1 == n_steps);
        if (record_next) stash = state;
        integ.step(state);
        if (record_next) emit(&stash);
    }
    return out;
}

} // namespace fene
