#pragma once

#include <string>

#include "fene/config.hpp"

namespace fene {

/// Exit status contract: 0 success, 2 validation failure, 3 numerical
/// breakdown, 4 failed verification/acceptance check.
enum ExitCode : int { kOk = 0, kValidation = 2, kBreakdown = 3, kCheckFailed = 4 };

int cmd_verify_constants(const ExperimentConfig& cfg);
int cmd_verify_identities(const ExperimentConfig& cfg);
int cmd_run(const ExperimentConfig& cfg);
int cmd_decay_study(const ExperimentConfig& cfg);
int cmd_spectrum(const ExperimentConfig& cfg);

/// Shared setup: quadrature, basis, operators, constants, grid, and the
/// resolved scheme configuration (auto a and auto dt filled in).
struct Problem {
    ExperimentConfig cfg;
    BallQuadrature quad;
    BallBasis basis;
    BallOperators ops;
    FeneParams params;
    TorusGrid grid;
    SchemeConfig scheme;
    MicroMacroState initial;

    explicit Problem(const ExperimentConfig& c);
};

} // namespace fene
