#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fene/micromacro.hpp"

namespace fene {

/// One time-sample of every recorded quantity. The first block is the
/// fixed CSV schema, in column order.
struct DiagnosticsRecord {
    double t = 0.0;
    double u_l2 = 0.0, u_h1 = 0.0, u_hs = 0.0, grad_u_hsm1 = 0.0;
    double psi_L2 = 0.0, psi_1L2 = 0.0, psi_sL2 = 0.0, grad_psi_sL2 = 0.0, psi_sH1dot = 0.0;
    double E1 = 0.0, E2 = 0.0;
    double f = 0.0, g = 0.0;
    double split_u = 0.0, split_psi = 0.0;
    double du_residual = 0.0;
    double mass_max = 0.0, div_max = 0.0;

    // auxiliary, not part of the CSV schema
    double E1_alt = 0.0;          ///< dissipation grouping with nu only on the gradient term
    bool split_saturated = false; ///< splitting ball dropped below the lattice
    double du_reference = 0.0;

    bool all_finite() const;
};

inline constexpr const char* kRecordCsvHeader =
    "t,u_l2,u_h1,u_hs,grad_u_hsm1,psi_L2,psi_1L2,psi_sL2,grad_psi_sL2,psi_sH1dot,"
    "E1,E2,f,g,split_u,split_psi,du_residual,mass_max,div_max";

/// Sobolev multiplier sum_{|alpha| <= s} xi^{2 alpha} (plain multi-index sum).
double sobolev_multiplier(double xi1, double xi2, int s);

/// All weighted norms of one state. Everything is a pure Fourier-multiplier
/// sum except the configuration H1dot norms, which route through c^T S c.
struct NormSet {
    double u_l2 = 0.0, u_h1 = 0.0, u_hs = 0.0, grad_u_hsm1 = 0.0;
    double psi_L2 = 0.0, psi_1L2 = 0.0, psi_sL2 = 0.0, grad_psi_sL2 = 0.0, psi_sH1dot = 0.0;
    // additional powers needed by the Lyapunov pair
    double psi_1H1dot = 0.0, grad_psi_1L2 = 0.0, du_l2 = 0.0;
};
NormSet weighted_norms(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops, int s);

/// Cross term X = ∬ (psi R o R) : Du dR dx through the m2 contraction.
double moment_cross_term(const TorusGrid& g, const MicroMacroState& state, const BallOperators& ops);

/// Largest a for which the two-sided bound 1/2 Theta <= f <= 2 Theta is
/// guaranteed by Cauchy-Schwarz on the cross term (Theta = |u|_1^2 + |psi|_{1,L2}^2).
double lyapunov_a_threshold(const BallOperators& ops);

/// f = Theta - 2 a X and g = nu |grad psi|_{1,L2}^2 + |psi|_{1,H1dot}^2 + 2 a C |Du|^2.
struct LyapunovPair {
    double f = 0.0, g = 0.0, cross = 0.0;
};
LyapunovPair lyapunov_pair(const NormSet& n, double cross, double a, double ccoef, double nu);

/// Energy mass inside the shrinking splitting ball
/// S(t) = { |xi|^2 <= 2 s_exp / (a C (eta + t)) }.
struct SplitMass {
    double mass_u = 0.0, mass_psi = 0.0;
    double radius = 0.0;
    bool saturated = false; ///< radius fell below the smallest lattice wavenumber
};
SplitMass fourier_split_mass(const TorusGrid& g, const MicroMacroState& state, double t, double a, double ccoef,
                             double eta, double s_exp);

/// Recompute the running energy functionals from a uniformly spaced record
/// stream (trapezoid in time):
///   E1 = sup |u|_s^2 + sup |psi|_{s,L2}^2 + nu ∫ (|grad psi|_{s,L2}^2 + |psi|_{s,H1dot}^2),
///   E2 = ∫ |grad u|_{s-1}^2,
/// and the alternative grouping with nu only on the gradient integrand.
struct EnergyFunctionals {
    std::vector<double> e1, e2, e1_alt;
};
EnergyFunctionals energy_functionals(const std::vector<DiagnosticsRecord>& records, double nu);

/// Least-squares slope of log(norm) against log(1+t) over [t0, t1].
struct DecayFit {
    double alpha = 0.0;     ///< decay exponent (positive = decaying)
    double stderr_ = 0.0;   ///< standard error of the slope
    double t0 = 0.0, t1 = 0.0;
    int n_points = 0;
};
DecayFit decay_fit(const std::vector<DiagnosticsRecord>& records, double DiagnosticsRecord::* field, double t0,
                   double t1);

/// Instant at which the splitting-ball radius drops below the smallest
/// lattice wavenumber: t_sat = 2 s_exp / (a C xi_min^2) - eta.
double split_saturation_time(const TorusGrid& g, double a, double ccoef, double eta, double s_exp);

/// First record whose splitting ball had already saturated.
std::optional<double> measured_saturation_time(const std::vector<DiagnosticsRecord>& records);

/// Auto-selected fit window [5, t_sat/2].
std::pair<double, double> auto_decay_window(const TorusGrid& g, double a, double ccoef, double eta, double s_exp);

} // namespace fene
