#include "ns1d/presets.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace ns1d {

namespace {

constexpr double kPi = 3.14159265358979323846;

Field sine_velocity(const MassGrid& g, double amplitude, int mode) {
    Field v(g.num_nodes(), 0.0);
    for (int i = 1; i < g.N; ++i)
        v[i] = amplitude * std::sin(mode * kPi * g.node(i) / g.L);
    return v;
}

Field cosine_pressure(const MassGrid& g, double level, double amp, int mode) {
    if (std::abs(amp) > level)
        throw ConfigError("preset: |pi_amp| must not exceed pi_level");
    Field pi(g.num_centers());
    for (int i = 0; i < g.num_centers(); ++i)
        pi[i] = level + amp * std::cos(mode * kPi * g.center(i) / g.L);
    return pi;
}

InitialData from_file(const MassGrid& g, const PhysParams& p,
                      const PresetParams& pp) {
    if (pp.file.empty())
        throw ConfigError("preset custom-from-file: no field file given");
    std::ifstream in(pp.file);
    if (!in) throw ConfigError("preset custom-from-file: cannot open " + pp.file);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("preset custom-from-file: bad JSON: " + std::string(e.what()));
    }
    auto field = [&](const char* key, bool required) {
        if (!j.contains(key)) {
            if (required)
                throw ConfigError(std::string("preset custom-from-file: missing ") + key);
            return Field{};
        }
        return j.at(key).get<Field>();
    };
    return make_initial_data(g, p, field("rho0", true), field("v0", true),
                             field("pi0", true), field("J0", false));
}

}  // namespace

InitialData make_preset(const std::string& name, const MassGrid& grid,
                        const PhysParams& params, const PresetParams& pp) {
    const int N = grid.num_centers();
    if (name == "stationary") {
        return make_initial_data(grid, params, Field(N, pp.rho_bar),
                                 Field(grid.num_nodes(), 0.0),
                                 Field(N, pp.pi_level));
    }
    if (name == "sine-velocity") {
        return make_initial_data(
            grid, params, Field(N, pp.rho_bar),
            sine_velocity(grid, pp.amplitude, pp.mode),
            cosine_pressure(grid, pp.pi_level, pp.pi_amp, pp.mode));
    }
    if (name == "vacuum-bubble") {
        // rho0 vanishes on [L/3, 2L/3] and grows quadratically from the
        // bubble edges, reaching rho_bar at the boundary.
        Field rho(N);
        for (int i = 0; i < N; ++i) {
            const double y = grid.center(i);
            const double dist = std::max(0.0, std::abs(y - 0.5 * grid.L) - grid.L / 6.0);
            const double s = 3.0 * dist / grid.L;
            rho[i] = pp.rho_bar * s * s;
        }
        return make_initial_data(grid, params, std::move(rho),
                                 sine_velocity(grid, pp.amplitude, 1),
                                 cosine_pressure(grid, pp.pi_level, pp.pi_amp, 1));
    }
    if (name == "custom-from-file") return from_file(grid, params, pp);
    throw ConfigError("unknown preset: " + name);
}

}  // namespace ns1d
