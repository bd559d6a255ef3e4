#pragma once

#include <vector>

#include "ns1d/core.hpp"

namespace ns1d {

/// Effective viscous flux G = mu*v_y/J - pi at centers.
Field compute_G(const State& state, const MassGrid& grid, const PhysParams& params);

/// Certified lower bound for J:
///   J_floor * exp{-(4/mu)sqrt(2 m0 E0) - ((gamma-1)E0/(mu ell0)) e^{(4/mu)sqrt(2 m0 E0)} t}.
/// Monotone non-increasing in t.
double j_lower_bound(double t, const Conserved& c, const PhysParams& params,
                     double J_floor);

/// B(y, t) = exp{(1/mu) * integral from 0 to y of rho0 (v0 - v)}, cumulative
/// trapezoidal in y with node velocities averaged to centers. Center-valued.
Field b_field(const State& state, const InitialData& init);

/// Spatial-constancy functional: spread (max - min over centers) of
///   integral_0^y rho0 (v - v0) - mu (log J - log J0) + integral_0^t pi.
/// Zero for the exact solution; the accumulator comes from the trajectory.
double phi_spread(const State& state, const Trajectory& traj,
                  const InitialData& init);

/// Same with the pressure accumulator passed directly.
double phi_spread_fields(const State& state, const Field& int_pi,
                         const InitialData& init);

/// Sup-norm residual of the pressure identity
///   pi_t + (1/mu)(pi - ((gamma-2)/2) G)^2 - (gamma^2/(4 mu)) G^2
/// per stored time, with pi_t by three-point differences (one-sided at the
/// two endpoints). Needs at least 3 stored states.
std::vector<double> riccati_residual(const Trajectory& traj,
                                     const PhysParams& params);

struct GBudget {
    double sup_G_l2_sq = 0.0;     // sup over stored times of ||G||_2^2
    double int_G_linf4 = 0.0;     // time integral of ||G||_inf^4
    double int_Gy_weighted = 0.0; // time integral of ||G_y/sqrt(rho0)||_2^2
    double G0_l2_sq = 0.0;
    double ratio = 0.0;           // (sup + integrals) / ||G0||_2^2
    int vacuum_cells = 0;         // cells excluded from the weighted norm
};

/// Monitored quantities of the flux energy budget. The weighted term runs
/// only over cells with rho0 > 0 (the weight is undefined in vacuum); the
/// exclusion count is reported. The ratio is tracked for refinement
/// stability, not against a fixed constant.
GBudget g_energy_budget(const Trajectory& traj, const InitialData& init);

struct CertRecord {
    double t = 0.0;
    double mass_residual = 0.0;
    double energy = 0.0;
    double energy_drift = 0.0;  // |E - E0| / max(E0, eps)
    double min_J = 0.0;
    double max_J = 0.0;
    double j_lower = 0.0;
    double B_min = 0.0;
    double B_max = 0.0;
    double G_l2 = 0.0;
    double G_linf = 0.0;
    double Gy_weighted_cum = 0.0;  // running integral of ||G_y/sqrt(rho0)||_2^2
    double phi_spread = 0.0;
    double riccati = 0.0;
    double pi_min = 0.0;
    double pi_max = 0.0;
    // monitored gradient norms and the t-weighted kinetic quantity; tracked
    // without asserted bounds
    double Jy_l2 = 0.0;
    double piy_l2 = 0.0;
    double t_vyt_cum = 0.0;  // running integral of t * ||v_yt||_2^2
};

struct CertVerdicts {
    bool mass_exact = false;      // residual <= 1e-10 * ell0 at all times
    bool j_above_floor = false;   // min J >= bound - 1e-9 at all times
    bool B_in_band = false;       // inside the band widened by 10*dy^2
    bool pi_nonnegative = false;  // zero tolerance
    bool all() const {
        return mass_exact && j_above_floor && B_in_band && pi_nonnegative;
    }
};

struct CertReport {
    std::vector<CertRecord> records;
    CertVerdicts verdicts;
    Conserved conserved;
    double band_lo = 0.0;
    double band_hi = 0.0;
    double band_widen = 0.0;
    GBudget budget;
};

/// Evaluates every record and verdict over the stored states. Verdict
/// failures are report contents, never exceptions.
CertReport full_report(const Trajectory& traj, const InitialData& init);

}  // namespace ns1d
