#pragma once

#include <string>

#include "ns1d/core.hpp"

namespace ns1d {

/// Parameters of the named initial-profile presets.
struct PresetParams {
    double amplitude = 0.1;  // velocity amplitude
    int mode = 1;            // sine mode number
    double rho_bar = 1.0;    // density scale
    double pi_level = 1.0;   // pressure baseline
    double pi_amp = 0.0;     // cosine pressure modulation, |pi_amp| <= pi_level
    std::string file;        // field file for custom-from-file
};

/// Builds one of: stationary, sine-velocity, vacuum-bubble,
/// custom-from-file. The vacuum bubble zeroes rho0 on the middle third of
/// the interval with quadratic ramps outside it. Boundary velocities are
/// set to exact zeros. Throws ConfigError on unknown names or bad fields.
InitialData make_preset(const std::string& name, const MassGrid& grid,
                        const PhysParams& params, const PresetParams& pp);

}  // namespace ns1d
