#pragma once

#include <string>

#include "ns1d/core.hpp"
#include "ns1d/integrator.hpp"
#include "ns1d/picard.hpp"
#include "ns1d/presets.hpp"

namespace ns1d {

/// Everything a command needs to set up a computation: a named initial
/// profile, grid, physics, stepping, window iteration, and output stride.
struct RunConfig {
    std::string preset;
    PresetParams preset_params;
    double L = 1.0;
    int N = 256;
    PhysParams phys;
    StepConfig step;
    PicardConfig picard;
    int snapshot_stride = 1;
};

/// Parses and schema-validates a JSON config file. Unknown keys anywhere
/// are rejected. Throws ConfigError with a readable message.
RunConfig load_run_config(const std::string& path);

/// Same, from an already-parsed JSON string (used by tests).
RunConfig parse_run_config(const std::string& json_text);

InitialData build_initial_data(const RunConfig& cfg);

}  // namespace ns1d
