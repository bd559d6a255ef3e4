#pragma once

#include <string>
#include <vector>

#include "ns1d/core.hpp"

namespace ns1d {

/// Field history on a uniform time grid over a short window [0, T_w].
/// values[k] is the node or center field at times[k]; the first slice is the
/// prescribed initial slice.
struct SpaceTimeField {
    MassGrid grid;
    std::vector<double> times;
    std::vector<Field> values;

    int num_slices() const { return static_cast<int>(times.size()); }
    double window() const { return times.empty() ? 0.0 : times.back(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Uniform window [0, T] with K steps (K+1 slices), every slice filled with
/// `slice` (node- or center-sized).
SpaceTimeField make_spacetime(const MassGrid& grid, double T, int K,
                              const Field& slice);

struct PicardConfig {
    double M = 0.0;         // iterate-norm bound; 0 = derive from the data
    double C1 = 0.0;        // interval embedding constant; 0 = 2*max(1, 1/sqrt(L))
    double C_sharp = 10.0;  // heuristic existence constant
    double T_window = 0.0;  // 0 = use the computed window formula
    double tol = 1e-10;     // fixed-point tolerance on the V_T distance
    int max_iter = 64;
    int max_halvings = 8;
    int K = 256;            // time steps per window
};

/// Fills M, C1, T_window where left at 0 and validates everything.
/// The derived M is max(C_sharp, 2*sqrt(||v0_y||_2^2 + ||v0_yy||_2^2)), an
/// envelope of the initial iterate's norm on any window below length 1.
PicardConfig resolve_picard_config(const PicardConfig& cfg, const InitialData& init);

/// Window formula: min{ 1/M^4, 1/(16 C#^4), 1, (J_floor/(2 C1))^2 }.
double compute_T_sharp(const PicardConfig& cfg, double J_floor);

/// Volume map: J(t) = J0 + trapezoidal time integral of v_y. Center-valued.
SpaceTimeField map_Q(const SpaceTimeField& v, const Field& J0);

/// Pressure transport part: pi0 * exp(-gamma * integral of v_y/J). Throws
/// DomainError if J is not positive throughout the window.
SpaceTimeField map_R1(const SpaceTimeField& v, const SpaceTimeField& J,
                      const Field& pi0, double gamma);

/// Pressure production part: the double time integral of (v_y/J)^2 against
/// exp(-gamma * integral from tau to t of v_y/J), trapezoid in tau with the
/// inner exponent from cumulative-integral differences. Nonnegative.
SpaceTimeField map_R2(const SpaceTimeField& v, const SpaceTimeField& J,
                      double gamma);

/// Momentum map: backward-Euler solve of
///   V_t - mu V_yy/(J rho0) = -(mu J_y v_y/(J^2 rho0) + pi_y/rho0)
/// with V pinned to zero at the boundary and V(., 0) = v0, where J = Q(v)
/// and pi = R1 + mu(gamma-1) R2. Requires strictly positive rho0.
SpaceTimeField map_F(const SpaceTimeField& v, const InitialData& init,
                     const PicardConfig& cfg);

/// Window norm: sqrt(sup_t ||f||_2^2 + integral of ||f_y||_2^2 dt), with the
/// max over slices and a trapezoidal time integral.
double vt_norm(const SpaceTimeField& f);

/// Per-slice spatial derivative of a node-valued history (center-valued).
SpaceTimeField spacetime_ddy(const SpaceTimeField& v);

struct PicardResult {
    SpaceTimeField v;    // fixed point
    SpaceTimeField J;    // Q(v) on the final window
    SpaceTimeField pi;   // R(v) on the final window
    std::vector<double> distances;  // V_T distance per iteration, final window
    std::vector<double> ratios;     // successive distance ratios, final window
    double window = 0.0;
    double initial_window = 0.0;
    int halvings = 0;
    int iterations = 0;
    bool membership_violated = false;  // an iterate left the M-ball on some window
    double M = 0.0;
    double C1 = 0.0;
};

/// Iterates v <- F(v) from the constant-in-time extension of v0 until the
/// V_T distance of successive velocity gradients drops below tol. A ratio
/// >= 1 after three iterations, an iterate escaping the M-ball, or an
/// exhausted iteration budget halves the window and restarts, up to
/// max_halvings; after that a NumericalError is thrown with diagnostics.
/// Requires strictly positive rho0 (DomainError otherwise).
PicardResult picard_solve(const InitialData& init, const PicardConfig& cfg);

struct PicardResiduals {
    double eqJ = 0.0;   // volume equation, exact up to roundoff by construction
    double eqV = 0.0;   // momentum equation in conservative form
    double eqPi = 0.0;  // pressure equation at time midpoints
};

/// Consistency residuals of the fixed point in the evolution system,
/// measured as sup over time steps of spatial L2 norms. Expected to decay
/// at first order in the window step and second order in dy.
PicardResiduals fixed_point_residuals(const PicardResult& result,
                                      const InitialData& init);

}  // namespace ns1d
