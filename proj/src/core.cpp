#include "ns1d/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ns1d {

JCollapseError::JCollapseError(int cell_, double time_)
    : NumericalError("J lost positivity in cell " + std::to_string(cell_) +
                     " at t = " + std::to_string(time_)),
      cell(cell_),
      time(time_) {}

Field MassGrid::nodes() const {
    Field out(num_nodes());
    for (int i = 0; i <= N; ++i) out[i] = node(i);
    return out;
}

Field MassGrid::centers() const {
    Field out(num_centers());
    for (int i = 0; i < N; ++i) out[i] = center(i);
    return out;
}

MassGrid build_grid(double L, int N) {
    if (!(L > 0.0)) throw ConfigError("grid: L must be positive");
    if (N < 2) throw ConfigError("grid: N must be at least 2");
    MassGrid g;
    g.L = L;
    g.N = N;
    g.dy = L / N;
    return g;
}

void validate_params(const PhysParams& p) {
    if (!(p.mu > 0.0)) throw ConfigError("params: mu must be positive");
    if (!(p.gamma > 1.0)) throw ConfigError("params: gamma must exceed 1");
}

double InitialData::j_floor() const {
    return *std::min_element(J0.begin(), J0.end());
}

InitialData make_initial_data(const MassGrid& grid, const PhysParams& params,
                              Field rho0, Field v0, Field pi0, Field J0) {
    validate_params(params);
    const auto nc = static_cast<std::size_t>(grid.num_centers());
    const auto nn = static_cast<std::size_t>(grid.num_nodes());
    if (J0.empty()) J0.assign(nc, 1.0);
    if (rho0.size() != nc) throw ConfigError("initial data: rho0 must have N values");
    if (pi0.size() != nc) throw ConfigError("initial data: pi0 must have N values");
    if (J0.size() != nc) throw ConfigError("initial data: J0 must have N values");
    if (v0.size() != nn) throw ConfigError("initial data: v0 must have N+1 values");
    for (double r : rho0)
        if (!(r >= 0.0)) throw ConfigError("initial data: rho0 must be nonnegative");
    for (double p : pi0)
        if (!(p >= 0.0)) throw ConfigError("initial data: pi0 must be nonnegative");
    for (double j : J0)
        if (!(j > 0.0)) throw ConfigError("initial data: J0 must be positive");
    if (v0.front() != 0.0 || v0.back() != 0.0)
        throw ConfigError("initial data: v0 must vanish at both boundary nodes");
    return InitialData{grid, params, std::move(rho0), std::move(v0),
                       std::move(pi0), std::move(J0)};
}

void State::validate(const MassGrid& grid) const {
    if (static_cast<int>(J.size()) != grid.num_centers() ||
        static_cast<int>(pi.size()) != grid.num_centers() ||
        static_cast<int>(v.size()) != grid.num_nodes())
        throw ConfigError("state: field sizes do not match grid");
    for (int i = 0; i < grid.num_centers(); ++i) {
        if (!(J[i] > 0.0)) throw JCollapseError(i, t);
        if (!(pi[i] >= 0.0))
            throw NumericalError("state: pi negative in cell " + std::to_string(i) +
                                 " at t = " + std::to_string(t));
    }
    if (v.front() != 0.0 || v.back() != 0.0)
        throw NumericalError("state: boundary velocity nonzero at t = " + std::to_string(t));
}

State initial_state(const InitialData& init) {
    return State{0.0, init.J0, init.v0, init.pi0};
}

Conserved conserved_quantities(const InitialData& init) {
    const MassGrid& g = init.grid;
    Conserved c;
    const Field v0c_sq = [&] {
        Field out(g.num_centers());
        for (int i = 0; i < g.num_centers(); ++i)
            out[i] = 0.5 * (init.v0[i] * init.v0[i] + init.v0[i + 1] * init.v0[i + 1]);
        return out;
    }();
    for (int i = 0; i < g.num_centers(); ++i) {
        c.ell0 += init.J0[i] * g.dy;
        c.m0 += init.rho0[i] * g.dy;
        c.E0 += (0.5 * init.rho0[i] * v0c_sq[i] +
                 init.J0[i] * init.pi0[i] / (init.params.gamma - 1.0)) *
                g.dy;
    }
    return c;
}

std::vector<double> Trajectory::stored_times() const {
    std::vector<double> out(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) out[k] = states[k].t;
    return out;
}

Norms discrete_norms(const Field& f, const MassGrid& grid) {
    const int nc = grid.num_centers();
    const int nn = grid.num_nodes();
    Norms out;
    double sum = 0.0;
    if (static_cast<int>(f.size()) == nc) {
        for (double x : f) {
            sum += x * x * grid.dy;
            out.linf = std::max(out.linf, std::abs(x));
        }
    } else if (static_cast<int>(f.size()) == nn) {
        for (int i = 0; i < nn; ++i) {
            const double w = (i == 0 || i == nn - 1) ? 0.5 * grid.dy : grid.dy;
            sum += f[i] * f[i] * w;
            out.linf = std::max(out.linf, std::abs(f[i]));
        }
    } else {
        throw ConfigError("discrete_norms: field is neither node- nor center-sized");
    }
    out.l2 = std::sqrt(sum);
    return out;
}

Field center_average(const Field& node_field, const MassGrid& grid) {
    if (static_cast<int>(node_field.size()) != grid.num_nodes())
        throw ConfigError("center_average: expected a node field");
    Field out(grid.num_centers());
    for (int i = 0; i < grid.num_centers(); ++i)
        out[i] = 0.5 * (node_field[i] + node_field[i + 1]);
    return out;
}

Field implied_density(const State& state, const InitialData& init) {
    Field out(init.grid.num_centers());
    for (int i = 0; i < init.grid.num_centers(); ++i) {
        if (!(state.J[i] > 0.0))
            throw DomainError("implied_density: J must be positive everywhere");
        out[i] = init.rho0[i] / state.J[i];
    }
    return out;
}

double current_mass(const State& state, const MassGrid& grid) {
    double sum = 0.0;
    for (int i = 0; i < grid.num_centers(); ++i) sum += state.J[i] * grid.dy;
    return sum;
}

double current_energy(const State& state, const InitialData& init) {
    const MassGrid& g = init.grid;
    double sum = 0.0;
    for (int i = 0; i < g.num_centers(); ++i) {
        const double vc_sq =
            0.5 * (state.v[i] * state.v[i] + state.v[i + 1] * state.v[i + 1]);
        sum += (0.5 * init.rho0[i] * vc_sq +
                state.J[i] * state.pi[i] / (init.params.gamma - 1.0)) *
               g.dy;
    }
    return sum;
}

}  // namespace ns1d
