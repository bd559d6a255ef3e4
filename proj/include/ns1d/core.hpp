#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ns1d {

/// Generic 1D field. Node fields hold N+1 values, center fields hold N.
using Field = std::vector<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Invalid configuration, usage, or input file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Well-formed input violating a documented precondition (e.g. J <= 0).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical breakdown: zero pivot, non-finite field values.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The Jacobian lost positivity during time stepping. Fatal: a non-positive
/// J means the flow map degenerated at the resolution in use.
struct JCollapseError : NumericalError {
    int cell;
    double time;
    JCollapseError(int cell_, double time_);
};

// ---------------------------------------------------------------------------
// Grid and parameters
// ---------------------------------------------------------------------------

/// Uniform staggered grid on the mass-coordinate interval (0, L).
/// Velocity lives on the N+1 nodes y_i = i*dy; J, pi, rho0 live on the
/// N cell centers y_{i+1/2}.
struct MassGrid {
    double L = 0.0;
    int N = 0;
    double dy = 0.0;

    int num_nodes() const { return N + 1; }
    int num_centers() const { return N; }
    double node(int i) const { return i * dy; }
    double center(int i) const { return (i + 0.5) * dy; }
    Field nodes() const;
    Field centers() const;
};

/// Throws ConfigError unless L > 0 and N >= 2.
MassGrid build_grid(double L, int N);

struct PhysParams {
    double mu = 1.0;     // viscosity, > 0
    double gamma = 1.4;  // adiabatic exponent, > 1
};

/// Throws ConfigError unless mu > 0 and gamma > 1.
void validate_params(const PhysParams& p);

// ---------------------------------------------------------------------------
// Initial data and state
// ---------------------------------------------------------------------------

/// Discretized initial data. rho0 >= 0 (vacuum cells allowed), pi0 >= 0,
/// J0 > 0 everywhere, v0 vanishing at both boundary nodes.
struct InitialData {
    MassGrid grid;
    PhysParams params;
    Field rho0;  // centers
    Field v0;    // nodes
    Field pi0;   // centers
    Field J0;    // centers

    double j_floor() const;  // min over centers of J0
};

/// Validates sizes, signs, and boundary values; an empty J0 defaults to
/// all-ones. Throws ConfigError on violations.
InitialData make_initial_data(const MassGrid& grid, const PhysParams& params,
                              Field rho0, Field v0, Field pi0, Field J0 = {});

/// Solution fields at one time instant.
struct State {
    double t = 0.0;
    Field J;   // centers, > 0
    Field v;   // nodes, zero at both ends
    Field pi;  // centers, >= 0

    /// Throws on violated invariants (used by the integrator per step).
    void validate(const MassGrid& grid) const;
};

State initial_state(const InitialData& init);

/// Quantities fixed by the initial data and conserved by the flow.
struct Conserved {
    double ell0 = 0.0;  // integral of J0
    double m0 = 0.0;    // integral of rho0
    double E0 = 0.0;    // integral of rho0*v0^2/2 + J0*pi0/(gamma-1)
};

/// Midpoint quadrature on centers; v0^2 is averaged to centers as the mean
/// of the squares of the two adjacent node values, which keeps E0 >= 0.
Conserved conserved_quantities(const InitialData& init);

/// Per-step scalar diagnostics recorded by the integrator.
struct StepDiagnostics {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double mass_residual = 0.0;  // |mass - ell0|
    double energy = 0.0;
    double min_J = 0.0;
    double max_J = 0.0;
    double min_pi = 0.0;
    double max_pi = 0.0;
    double max_rate = 0.0;  // max |v_y / J|
};

/// Time-ordered snapshots plus running time-integral accumulators.
/// int_pi[k] and int_vy[k] hold the trapezoidal accumulations of pi and
/// v_y/J up to states[k].t; both are advanced once per accepted step,
/// snapshotted whenever a state is stored. diag has one entry per accepted
/// step plus the t = 0 row.
struct Trajectory {
    MassGrid grid;
    std::vector<State> states;
    std::vector<Field> int_pi;
    std::vector<Field> int_vy;
    std::vector<double> dt_history;
    std::vector<StepDiagnostics> diag;

    std::vector<double> stored_times() const;
};

// ---------------------------------------------------------------------------
// Norms and derived fields
// ---------------------------------------------------------------------------

struct Norms {
    double l2 = 0.0;
    double linf = 0.0;
};

/// Discrete L2 and Linf of a field. Center fields use weight dy per cell;
/// node fields use trapezoidal weights (dy/2 at the two boundary nodes),
/// so a constant 1 on (0, L) has l2 = sqrt(L) either way.
Norms discrete_norms(const Field& f, const MassGrid& grid);

/// Node field averaged to centers: (f_i + f_{i+1}) / 2.
Field center_average(const Field& node_field, const MassGrid& grid);

/// Pointwise rho = rho0 / J. Throws DomainError if J is not positive.
Field implied_density(const State& state, const InitialData& init);

/// Integral of J over (0, L) by midpoint quadrature.
double current_mass(const State& state, const MassGrid& grid);

/// Integral of rho0*v^2/2 + J*pi/(gamma-1), same quadrature as E0.
double current_energy(const State& state, const InitialData& init);

}  // namespace ns1d
