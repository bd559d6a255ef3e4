#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ns1d/core.hpp"

namespace ns1d {

struct StepConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double dt_safety = 0.5;  // accuracy limiter: dt <= dt_safety*dy / max(|v_y/J|*dy, eps)
    bool nan_check = true;
};

void validate_step_config(const StepConfig& cfg);

/// Largest step the accuracy limiter allows from this state.
double accuracy_dt_limit(const State& state, const MassGrid& grid,
                         const StepConfig& cfg);

/// Exact solution over dt of pi' = -gamma*a*pi + mu*(gamma-1)*a^2 with the
/// rate a frozen. Both the decay factor and the source are nonnegative, so
/// pi stays nonnegative for any a. The (1 - e^-x)/x factor switches to its
/// limit value 1 when |gamma*a*dt| < 1e-8 to avoid cancellation.
double pressure_update(double pi, double a, double dt, const PhysParams& params);

/// One step of the splitting: implicit momentum solve (Dirichlet rows pin the
/// boundary velocities, J frozen at t^n), explicit J update (fatal
/// JCollapseError if any J becomes non-positive), then the exact frozen-rate
/// pressure update with J centered at the half step. The step size is cfg.dt
/// capped by the accuracy limiter.
State step(const State& state, const InitialData& init, const StepConfig& cfg);

/// Observer invoked once at t = 0 and once per accepted step; int_pi is the
/// running trapezoidal accumulation of pi.
using StepObserver =
    std::function<void(const State&, const Field& int_pi, const StepDiagnostics&)>;

/// March from t = 0 to cfg.t_end. States are stored every snapshot_stride
/// accepted steps (the initial and final states always included); diagnostics
/// and the accumulators advance every step.
Trajectory run(const InitialData& init, const StepConfig& cfg,
               int snapshot_stride = 1, const StepObserver& observer = {});

/// Flow-map reconstruction: eta(0) = 0, eta_{i+1} = eta_i + dy*J_{i+1/2}.
/// Strictly increasing; the total extent equals the current integral of J.
Field reconstruct_euler(const State& state, const MassGrid& grid);

/// rho0 clamped from below by 1/n.
Field apply_density_floor(const Field& rho0, double n);

struct SweepEntry {
    double n = 0.0;  // floor parameter; 0 marks the unfloored reference
    bool ok = false;
    std::string error;
    Trajectory traj;
};

struct VacuumSweep {
    SweepEntry reference;
    std::vector<SweepEntry> floored;
};

/// Runs the same data with rho0 replaced by max(rho0, 1/n) for each n, plus
/// the unfloored reference. Per-run failures are collected, not fatal.
VacuumSweep vacuum_sequence_run(const InitialData& init,
                                const std::vector<double>& floors,
                                const StepConfig& cfg, int snapshot_stride = 1);

/// Linear-in-time interpolation between stored states (exact at stored
/// times; clamped outside the stored range).
State interpolate_state(const Trajectory& traj, double t);

struct TrajDistance {
    double sup_v_l2 = 0.0;  // sup over stored times of ||v_a - v_b||_2
    double sup_J_l2 = 0.0;
    double total() const { return sup_v_l2 + sup_J_l2; }
};

/// Distances evaluated at the reference trajectory's stored times, with `a`
/// interpolated in time when its stored times differ.
TrajDistance trajectory_distance(const Trajectory& a, const Trajectory& ref,
                                 const MassGrid& grid);

/// Discrete L2-in-time H1-in-space distance of the velocities,
/// sqrt(integral of ||dv||_2^2 + ||(dv)_y||_2^2 dt) over ref's stored times.
double l2t_h1_distance_v(const Trajectory& a, const Trajectory& ref,
                         const MassGrid& grid);

}  // namespace ns1d
