#include "ns1d/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ns1d {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw ConfigError("config: unknown key \"" + item.key() + "\" in " + where);
    }
}

template <typename T>
T fetch(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const std::exception&) {
        throw ConfigError(std::string("config: bad value for \"") + key + "\"");
    }
}

RunConfig from_json(const json& j) {
    check_keys(j, {"preset", "preset_params", "grid", "physics", "step", "picard",
                   "output"},
               "top level");
    RunConfig cfg;
    if (!j.contains("preset") || !j.at("preset").is_string())
        throw ConfigError("config: \"preset\" (string) is required");
    cfg.preset = j.at("preset").get<std::string>();

    if (j.contains("preset_params")) {
        const json& p = j.at("preset_params");
        check_keys(p, {"amplitude", "mode", "rho_bar", "pi_level", "pi_amp", "file"},
                   "preset_params");
        cfg.preset_params.amplitude = fetch(p, "amplitude", cfg.preset_params.amplitude);
        cfg.preset_params.mode = fetch(p, "mode", cfg.preset_params.mode);
        cfg.preset_params.rho_bar = fetch(p, "rho_bar", cfg.preset_params.rho_bar);
        cfg.preset_params.pi_level = fetch(p, "pi_level", cfg.preset_params.pi_level);
        cfg.preset_params.pi_amp = fetch(p, "pi_amp", cfg.preset_params.pi_amp);
        cfg.preset_params.file = fetch(p, "file", cfg.preset_params.file);
    }
    if (!j.contains("grid")) throw ConfigError("config: \"grid\" is required");
    {
        const json& p = j.at("grid");
        check_keys(p, {"L", "N"}, "grid");
        cfg.L = fetch(p, "L", cfg.L);
        cfg.N = fetch(p, "N", cfg.N);
    }
    if (j.contains("physics")) {
        const json& p = j.at("physics");
        check_keys(p, {"mu", "gamma"}, "physics");
        cfg.phys.mu = fetch(p, "mu", cfg.phys.mu);
        cfg.phys.gamma = fetch(p, "gamma", cfg.phys.gamma);
    }
    if (j.contains("step")) {
        const json& p = j.at("step");
        check_keys(p, {"dt", "t_end", "dt_safety", "nan_check"}, "step");
        cfg.step.dt = fetch(p, "dt", cfg.step.dt);
        cfg.step.t_end = fetch(p, "t_end", cfg.step.t_end);
        cfg.step.dt_safety = fetch(p, "dt_safety", cfg.step.dt_safety);
        cfg.step.nan_check = fetch(p, "nan_check", cfg.step.nan_check);
    }
    if (j.contains("picard")) {
        const json& p = j.at("picard");
        check_keys(p, {"M", "C1", "C_sharp", "T_window", "tol", "max_iter",
                       "max_halvings", "K"},
                   "picard");
        cfg.picard.M = fetch(p, "M", cfg.picard.M);
        cfg.picard.C1 = fetch(p, "C1", cfg.picard.C1);
        cfg.picard.C_sharp = fetch(p, "C_sharp", cfg.picard.C_sharp);
        cfg.picard.T_window = fetch(p, "T_window", cfg.picard.T_window);
        cfg.picard.tol = fetch(p, "tol", cfg.picard.tol);
        cfg.picard.max_iter = fetch(p, "max_iter", cfg.picard.max_iter);
        cfg.picard.max_halvings = fetch(p, "max_halvings", cfg.picard.max_halvings);
        cfg.picard.K = fetch(p, "K", cfg.picard.K);
    }
    if (j.contains("output")) {
        const json& p = j.at("output");
        check_keys(p, {"snapshot_stride"}, "output");
        cfg.snapshot_stride = fetch(p, "snapshot_stride", cfg.snapshot_stride);
        if (cfg.snapshot_stride < 1)
            throw ConfigError("config: snapshot_stride must be >= 1");
    }

    // fail fast on grid/physics/step problems before any computation
    build_grid(cfg.L, cfg.N);
    validate_params(cfg.phys);
    validate_step_config(cfg.step);
    return cfg;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError("config: JSON parse failure: " + std::string(e.what()));
    }
    return from_json(j);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

InitialData build_initial_data(const RunConfig& cfg) {
    const MassGrid grid = build_grid(cfg.L, cfg.N);
    return make_preset(cfg.preset, grid, cfg.phys, cfg.preset_params);
}

}  // namespace ns1d
