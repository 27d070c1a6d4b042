#pragma once

#include <string>

#include "fene/micromacro.hpp"

namespace fene {

/// Self-describing little-endian binary checkpoint: versioned magic, a
/// config-echo string, the grid shape, and the raw state (both
/// representations, so the round trip is bit-exact by construction).
void save_checkpoint(const std::string& path, const MicroMacroState& state, const TorusGrid& grid,
                     const std::string& config_echo);

struct LoadedCheckpoint {
    MicroMacroState state;
    int m = 0;
    int q = 0;
    double l_box = 0.0;
    std::string config_echo;
};
LoadedCheckpoint load_checkpoint(const std::string& path);

} // namespace fene
