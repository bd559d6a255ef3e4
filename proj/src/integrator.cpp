#include "ns1d/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "ns1d/operators.hpp"

namespace ns1d {

namespace {

Field rate_field(const State& s, const MassGrid& g) {
    Field r = ddy_node_to_center(s.v, g);
    for (int i = 0; i < g.num_centers(); ++i) r[i] /= s.J[i];
    return r;
}

void check_finite(const State& s) {
    for (double x : s.J)
        if (!std::isfinite(x)) throw NumericalError("non-finite J at t = " + std::to_string(s.t));
    for (double x : s.v)
        if (!std::isfinite(x)) throw NumericalError("non-finite v at t = " + std::to_string(s.t));
    for (double x : s.pi)
        if (!std::isfinite(x)) throw NumericalError("non-finite pi at t = " + std::to_string(s.t));
}

State step_dt(const State& s, const InitialData& init, const StepConfig& cfg,
              double dt) {
    const MassGrid& g = init.grid;
    const int N = g.N;
    const double mu = init.params.mu;

    // (1) implicit momentum: diag(rho0_node*dy) + mu*dt * weighted Laplacian.
    // Node densities are the mean of the two adjacent cells; the system stays
    // positive definite even where they vanish, so vacuum needs no floor.
    TridiagonalSystem sys;
    sys.sub.assign(N, 0.0);
    sys.diag.assign(N + 1, 0.0);
    sys.super.assign(N, 0.0);
    sys.rhs.assign(N + 1, 0.0);
    sys.diag[0] = 1.0;
    sys.diag[N] = 1.0;
    for (int i = 1; i < N; ++i) {
        const double rho_node = 0.5 * (init.rho0[i - 1] + init.rho0[i]);
        const double wl = mu * dt / (g.dy * s.J[i - 1]);
        const double wr = mu * dt / (g.dy * s.J[i]);
        sys.sub[i - 1] = -wl;
        sys.super[i] = -wr;
        sys.diag[i] = rho_node * g.dy + wl + wr;
        sys.rhs[i] = rho_node * g.dy * s.v[i] - dt * (s.pi[i] - s.pi[i - 1]);
    }
    Field v_new = solve_tridiagonal(sys);
    v_new[0] = 0.0;
    v_new[N] = 0.0;

    // (2) J update; any non-positive J is fatal at this resolution.
    const Field vy = ddy_node_to_center(v_new, g);
    Field J_new(N);
    for (int i = 0; i < N; ++i) {
        J_new[i] = s.J[i] + dt * vy[i];
        if (!(J_new[i] > 0.0)) throw JCollapseError(i, s.t + dt);
    }

    // (3) exact pressure update with the rate frozen at the half-step J.
    Field pi_new(N);
    for (int i = 0; i < N; ++i) {
        const double a = vy[i] / (0.5 * (s.J[i] + J_new[i]));
        pi_new[i] = pressure_update(s.pi[i], a, dt, init.params);
    }

    State out{s.t + dt, std::move(J_new), std::move(v_new), std::move(pi_new)};
    if (cfg.nan_check) check_finite(out);
    return out;
}

StepDiagnostics diagnostics(const State& s, const InitialData& init,
                            const Conserved& c, double dt) {
    const MassGrid& g = init.grid;
    StepDiagnostics d;
    d.t = s.t;
    d.dt = dt;
    d.mass = current_mass(s, g);
    d.mass_residual = std::abs(d.mass - c.ell0);
    d.energy = current_energy(s, init);
    d.min_J = *std::min_element(s.J.begin(), s.J.end());
    d.max_J = *std::max_element(s.J.begin(), s.J.end());
    d.min_pi = *std::min_element(s.pi.begin(), s.pi.end());
    d.max_pi = *std::max_element(s.pi.begin(), s.pi.end());
    const Field r = rate_field(s, g);
    for (double x : r) d.max_rate = std::max(d.max_rate, std::abs(x));
    return d;
}

}  // namespace

void validate_step_config(const StepConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("step config: dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw ConfigError("step config: t_end must be nonnegative");
    if (!(cfg.dt_safety > 0.0 && cfg.dt_safety <= 1.0))
        throw ConfigError("step config: dt_safety must lie in (0, 1]");
}

double accuracy_dt_limit(const State& state, const MassGrid& grid,
                         const StepConfig& cfg) {
    const Field r = rate_field(state, grid);
    double m = 0.0;
    for (double x : r) m = std::max(m, std::abs(x) * grid.dy);
    return cfg.dt_safety * grid.dy / std::max(m, 1e-30);
}

double pressure_update(double pi, double a, double dt, const PhysParams& params) {
    const double x = params.gamma * a * dt;
    const double decay = std::exp(-x);
    const double source = params.mu * (params.gamma - 1.0) * a * a * dt;
    if (std::abs(x) < 1e-8) return decay * pi + source;
    return decay * pi + source * (1.0 - decay) / x;
}

State step(const State& state, const InitialData& init, const StepConfig& cfg) {
    validate_step_config(cfg);
    const double dt = std::min(cfg.dt, accuracy_dt_limit(state, init.grid, cfg));
    return step_dt(state, init, cfg, dt);
}

Trajectory run(const InitialData& init, const StepConfig& cfg,
               int snapshot_stride, const StepObserver& observer) {
    validate_step_config(cfg);
    if (snapshot_stride < 1) throw ConfigError("run: snapshot_stride must be >= 1");
    const MassGrid& g = init.grid;
    const Conserved c = conserved_quantities(init);
    const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);

    Trajectory traj;
    traj.grid = g;
    State s = initial_state(init);
    s.validate(g);
    Field ipi(g.num_centers(), 0.0);
    Field ivy(g.num_centers(), 0.0);

    traj.states.push_back(s);
    traj.int_pi.push_back(ipi);
    traj.int_vy.push_back(ivy);
    StepDiagnostics d0 = diagnostics(s, init, c, 0.0);
    traj.diag.push_back(d0);
    if (observer) observer(s, ipi, d0);

    Field rate_prev = rate_field(s, g);
    long n = 0;
    while (s.t < cfg.t_end - t_eps) {
        const double dt = std::min({cfg.dt, accuracy_dt_limit(s, g, cfg),
                                    cfg.t_end - s.t});
        State next = step_dt(s, init, cfg, dt);
        next.validate(g);
        const Field rate_next = rate_field(next, g);
        for (int i = 0; i < g.num_centers(); ++i) {
            ipi[i] += 0.5 * dt * (s.pi[i] + next.pi[i]);
            ivy[i] += 0.5 * dt * (rate_prev[i] + rate_next[i]);
        }
        s = std::move(next);
        rate_prev = rate_next;
        ++n;
        traj.dt_history.push_back(dt);
        const StepDiagnostics d = diagnostics(s, init, c, dt);
        traj.diag.push_back(d);
        if (observer) observer(s, ipi, d);

        const bool final_step = !(s.t < cfg.t_end - t_eps);
        if (n % snapshot_stride == 0 || final_step) {
            if (traj.states.back().t != s.t) {
                traj.states.push_back(s);
                traj.int_pi.push_back(ipi);
                traj.int_vy.push_back(ivy);
            }
        }
    }
    return traj;
}

Field reconstruct_euler(const State& state, const MassGrid& grid) {
    Field eta(grid.num_nodes());
    eta[0] = 0.0;
    for (int i = 0; i < grid.num_centers(); ++i) {
        if (!(state.J[i] > 0.0))
            throw DomainError("reconstruct_euler: J must be positive");
        eta[i + 1] = eta[i] + grid.dy * state.J[i];
    }
    return eta;
}

Field apply_density_floor(const Field& rho0, double n) {
    if (!(n > 0.0)) throw ConfigError("density floor: n must be positive");
    Field out = rho0;
    for (double& r : out) r = std::max(r, 1.0 / n);
    return out;
}

VacuumSweep vacuum_sequence_run(const InitialData& init,
                                const std::vector<double>& floors,
                                const StepConfig& cfg, int snapshot_stride) {
    VacuumSweep sweep;
    auto attempt = [&](double n, const Field& rho) {
        SweepEntry e;
        e.n = n;
        try {
            InitialData d = make_initial_data(init.grid, init.params, rho, init.v0,
                                              init.pi0, init.J0);
            e.traj = run(d, cfg, snapshot_stride);
            e.ok = true;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        return e;
    };
    sweep.reference = attempt(0.0, init.rho0);
    for (double n : floors)
        sweep.floored.push_back(attempt(n, apply_density_floor(init.rho0, n)));
    return sweep;
}

State interpolate_state(const Trajectory& traj, double t) {
    if (traj.states.empty()) throw ConfigError("interpolate_state: empty trajectory");
    const auto& st = traj.states;
    if (t <= st.front().t) return st.front();
    if (t >= st.back().t) return st.back();
    std::size_t hi = 1;
    while (st[hi].t < t) ++hi;
    const State& a = st[hi - 1];
    const State& b = st[hi];
    const double w = (t - a.t) / (b.t - a.t);
    State out;
    out.t = t;
    out.J.resize(a.J.size());
    out.v.resize(a.v.size());
    out.pi.resize(a.pi.size());
    for (std::size_t i = 0; i < a.J.size(); ++i) {
        out.J[i] = (1.0 - w) * a.J[i] + w * b.J[i];
        out.pi[i] = (1.0 - w) * a.pi[i] + w * b.pi[i];
    }
    for (std::size_t i = 0; i < a.v.size(); ++i)
        out.v[i] = (1.0 - w) * a.v[i] + w * b.v[i];
    return out;
}

TrajDistance trajectory_distance(const Trajectory& a, const Trajectory& ref,
                                 const MassGrid& grid) {
    TrajDistance d;
    for (const State& r : ref.states) {
        const State s = interpolate_state(a, r.t);
        Field dv(grid.num_nodes());
        for (int i = 0; i < grid.num_nodes(); ++i) dv[i] = s.v[i] - r.v[i];
        Field dJ(grid.num_centers());
        for (int i = 0; i < grid.num_centers(); ++i) dJ[i] = s.J[i] - r.J[i];
        d.sup_v_l2 = std::max(d.sup_v_l2, discrete_norms(dv, grid).l2);
        d.sup_J_l2 = std::max(d.sup_J_l2, discrete_norms(dJ, grid).l2);
    }
    return d;
}

double l2t_h1_distance_v(const Trajectory& a, const Trajectory& ref,
                         const MassGrid& grid) {
    const std::vector<double> times = ref.stored_times();
    std::vector<double> h1sq(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const State s = interpolate_state(a, times[k]);
        const State& r = ref.states[k];
        Field dv(grid.num_nodes());
        for (int i = 0; i < grid.num_nodes(); ++i) dv[i] = s.v[i] - r.v[i];
        const Field dvy = ddy_node_to_center(dv, grid);
        const double l2 = discrete_norms(dv, grid).l2;
        const double l2y = discrete_norms(dvy, grid).l2;
        h1sq[k] = l2 * l2 + l2y * l2y;
    }
    double acc = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k)
        acc += 0.5 * (times[k] - times[k - 1]) * (h1sq[k] + h1sq[k - 1]);
    return std::sqrt(acc);
}

}  // namespace ns1d
