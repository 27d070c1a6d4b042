#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fene/diagnostics.hpp"
#include "fene/micromacro.hpp"

namespace fene {

enum class Scheme { ImexEuler, Cnab2 };

struct SchemeConfig {
    double dt = 1e-2;
    Scheme scheme = Scheme::Cnab2;
    double t_final = 1.0;
    double cfl_safety = 0.5;
    int record_every = 10;
    int sobolev_s = 3;
    double lyapunov_a = 0.1; ///< resolved value (see resolve_lyapunov_a)
    double eta = 1.0;
    double s_exp = 2.0;
    RhsOptions rhs{};
};

struct StepRejectedError : std::runtime_error {
    double suggested_dt;
    StepRejectedError(const std::string& msg, double dt) : std::runtime_error(msg), suggested_dt(dt) {}
};

struct BlowUpError : std::runtime_error {
    DiagnosticsRecord last_valid;
    explicit BlowUpError(const DiagnosticsRecord& r)
        : std::runtime_error("solution lost finiteness (data likely not small enough)"), last_valid(r) {}
};

/// IMEX stepping: advection, stress force and drag explicit; nu*lap and the
/// configuration relaxation S implicit. The implicit matrix
/// (1 + theta dt nu |xi|^2) I + theta dt S is factored once per distinct
/// integer |kappa|^2 and reused across steps until dt changes.
class ImexIntegrator {
  public:
    ImexIntegrator(const TorusGrid& grid, const BallOperators& ops, const FeneParams& params, SchemeConfig cfg);

    void step(MicroMacroState& state);
    const SchemeConfig& config() const { return cfg_; }
    void set_dt(double dt);
    int factor_count() const { return static_cast<int>(factors_.size()); }

  private:
    void rebuild_factors();
    void implicit_solve(Eigen::MatrixXcd& rhs) const;

    const TorusGrid& grid_;
    const BallOperators& ops_;
    const FeneParams& params_;
    SchemeConfig cfg_;
    double theta_; ///< 1 for Euler, 1/2 for CNAB

    std::vector<int> key_slot_;                          // per flat mode index
    std::vector<Eigen::LLT<Eigen::MatrixXd>> factors_;   // per distinct |kappa|^2
    bool have_history_ = false;
    VectorField fu_prev_;
    Eigen::MatrixXcd ec_prev_;
};

/// Divergence-free low-mode-flat random data: |uhat| constant for
/// 0 < |xi| <= xi_cutoff with random phases, scaled so |u0|_s = epsilon;
/// psi0 likewise with random zero-mass configuration directions and
/// |psi0|_{s,L2} = epsilon.
MicroMacroState generate_initial_data(const TorusGrid& grid, int q, const BallOperators& ops, double epsilon,
                                      double xi_cutoff, std::uint64_t seed, int s);

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    MicroMacroState final_state;
};

using RecordCallback = std::function<void(const DiagnosticsRecord&, const MicroMacroState&)>;

/// Steps to t_final, emitting one record every record_every steps (plus the
/// initial and final instants). Throws BlowUpError when a recorded norm
/// stops being finite.
RunResult run_simulation(const TorusGrid& grid, const BallOperators& ops, const FeneParams& params,
                         const MicroMacroState& initial, const SchemeConfig& cfg,
                         const RecordCallback& on_record = {});

} // namespace fene
