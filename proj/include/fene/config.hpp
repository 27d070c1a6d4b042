#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fene/integrator.hpp"

namespace fene {

/// Fully-resolved experiment configuration. Parsed from a JSON document with
/// strict key checking (an unknown key is a hard error) and hypothesis
/// validation; defaults fill everything the document leaves out.
struct ExperimentConfig {
    // model
    double k = 2.0;
    double nu = 1.0;

    // discretization
    double l_box = 64.0 * 3.14159265358979323846;
    int m = 64;
    int p = 6;
    double dt = 0.0; ///< 0 = derive from the advective CFL of the initial data
    double t_final = 10.0;
    Scheme scheme = Scheme::Cnab2;

    // diagnostics
    int s = 3;
    double a = 0.0; ///< 0 = auto: min(a*, 0.1 / Ccoef)
    double eta = 1.0;
    double s_exp = 2.0; ///< exponent in d(t) = (eta + t)^{s_exp}, default N/2+1
    int record_every = 10;

    // initial data
    double epsilon = 1e-3;
    double xi_cutoff = 0.6;
    std::uint64_t seed = 1;

    // outputs
    std::string out_dir = "fene_out";
    bool emit_csv = true;
    bool emit_json = true;

    // decay study
    int num_seeds = 8;

    bool linearized = false; ///< disable u.grad and the psi-drag

    int quad_n_r() const { return p + 6; }
    int quad_n_theta() const { return 4 * p + 8; }

    std::string echo_json() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

} // namespace fene
