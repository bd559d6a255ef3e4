#include "ns1d/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ns1d/operators.hpp"

namespace ns1d {

namespace {

/// Cumulative integral of a center field from 0 to each center: half-cell
/// rectangle for the first interval, trapezoid between centers after.
Field cumulative_y_integral(const Field& f, const MassGrid& g) {
    Field out(g.num_centers(), 0.0);
    out[0] = 0.5 * g.dy * f[0];
    for (int i = 1; i < g.num_centers(); ++i)
        out[i] = out[i - 1] + 0.5 * g.dy * (f[i - 1] + f[i]);
    return out;
}

/// ||G_y / sqrt(rho0)||_2^2 over non-vacuum cells, with the node derivative
/// averaged back to centers so the exclusion applies cell-wise. G has
/// zero-flux boundary conditions, hence the NeumannZero closure.
double weighted_Gy_sq(const Field& G, const InitialData& init, int* excluded) {
    const MassGrid& g = init.grid;
    const Field Gy_node = ddy_center_to_node(G, g, BoundaryDiff::NeumannZero);
    double sum = 0.0;
    int skipped = 0;
    for (int i = 0; i < g.num_centers(); ++i) {
        if (init.rho0[i] > 0.0) {
            const double gy = 0.5 * (Gy_node[i] + Gy_node[i + 1]);
            sum += gy * gy / init.rho0[i] * g.dy;
        } else {
            ++skipped;
        }
    }
    if (excluded) *excluded = skipped;
    return sum;
}

double three_point_dt(double fm, double f0, double fp, double hm, double hp) {
    // first derivative at the middle of three samples with spacings hm, hp
    const double a = -hp / (hm * (hm + hp));
    const double b = (hp - hm) / (hm * hp);
    const double c = hm / (hp * (hm + hp));
    return a * fm + b * f0 + c * fp;
}

double riccati_pointwise(double pi_t, double pi, double G, const PhysParams& p) {
    const double shifted = pi - 0.5 * (p.gamma - 2.0) * G;
    return pi_t + shifted * shifted / p.mu - p.gamma * p.gamma * G * G / (4.0 * p.mu);
}

}  // namespace

Field compute_G(const State& state, const MassGrid& grid, const PhysParams& params) {
    const Field vy = ddy_node_to_center(state.v, grid);
    Field G(grid.num_centers());
    for (int i = 0; i < grid.num_centers(); ++i) {
        if (!(state.J[i] > 0.0)) throw DomainError("compute_G: J must be positive");
        G[i] = params.mu * vy[i] / state.J[i] - state.pi[i];
    }
    return G;
}

double j_lower_bound(double t, const Conserved& c, const PhysParams& params,
                     double J_floor) {
    const double s = (4.0 / params.mu) * std::sqrt(2.0 * c.m0 * c.E0);
    const double decay = (params.gamma - 1.0) * c.E0 / (params.mu * c.ell0);
    return J_floor * std::exp(-s - decay * std::exp(s) * t);
}

Field b_field(const State& state, const InitialData& init) {
    const MassGrid& g = init.grid;
    const Field vc = center_average(state.v, g);
    const Field v0c = center_average(init.v0, g);
    Field f(g.num_centers());
    for (int i = 0; i < g.num_centers(); ++i)
        f[i] = init.rho0[i] * (v0c[i] - vc[i]);
    const Field I = cumulative_y_integral(f, g);
    Field B(g.num_centers());
    for (int i = 0; i < g.num_centers(); ++i)
        B[i] = std::exp(I[i] / init.params.mu);
    return B;
}

double phi_spread_fields(const State& state, const Field& int_pi,
                         const InitialData& init) {
    const MassGrid& g = init.grid;
    if (static_cast<int>(int_pi.size()) != g.num_centers())
        throw ConfigError("phi_spread: accumulator must be a center field");
    const Field vc = center_average(state.v, g);
    const Field v0c = center_average(init.v0, g);
    Field f(g.num_centers());
    for (int i = 0; i < g.num_centers(); ++i)
        f[i] = init.rho0[i] * (vc[i] - v0c[i]);
    const Field I = cumulative_y_integral(f, g);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < g.num_centers(); ++i) {
        if (!(state.J[i] > 0.0)) throw DomainError("phi_spread: J must be positive");
        // log J - log J0 rather than log(J/J0): robust for small J
        const double phi = I[i] -
                           init.params.mu * (std::log(state.J[i]) - std::log(init.J0[i])) +
                           int_pi[i];
        if (i == 0) {
            lo = hi = phi;
        } else {
            lo = std::min(lo, phi);
            hi = std::max(hi, phi);
        }
    }
    return hi - lo;
}

double phi_spread(const State& state, const Trajectory& traj,
                  const InitialData& init) {
    const double tol = 1e-12 * std::max(1.0, std::abs(state.t));
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        if (std::abs(traj.states[k].t - state.t) <= tol)
            return phi_spread_fields(state, traj.int_pi[k], init);
    }
    throw ConfigError("phi_spread: state time not found among stored snapshots");
}

std::vector<double> riccati_residual(const Trajectory& traj,
                                     const PhysParams& params) {
    const std::size_t n = traj.states.size();
    if (n < 3)
        throw ConfigError("riccati_residual: needs at least 3 stored states");
    const MassGrid& g = traj.grid;

    std::vector<Field> G(n);
    for (std::size_t k = 0; k < n; ++k) G[k] = compute_G(traj.states[k], g, params);

    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double worst = 0.0;
        for (int i = 0; i < g.num_centers(); ++i) {
            double pi_t;
            if (k == 0) {
                pi_t = (traj.states[1].pi[i] - traj.states[0].pi[i]) /
                       (traj.states[1].t - traj.states[0].t);
            } else if (k == n - 1) {
                pi_t = (traj.states[k].pi[i] - traj.states[k - 1].pi[i]) /
                       (traj.states[k].t - traj.states[k - 1].t);
            } else {
                pi_t = three_point_dt(traj.states[k - 1].pi[i], traj.states[k].pi[i],
                                      traj.states[k + 1].pi[i],
                                      traj.states[k].t - traj.states[k - 1].t,
                                      traj.states[k + 1].t - traj.states[k].t);
            }
            const double r =
                riccati_pointwise(pi_t, traj.states[k].pi[i], G[k][i], params);
            worst = std::max(worst, std::abs(r));
        }
        out[k] = worst;
    }
    return out;
}

GBudget g_energy_budget(const Trajectory& traj, const InitialData& init) {
    const MassGrid& g = init.grid;
    GBudget b;
    const std::size_t n = traj.states.size();
    std::vector<double> linf4(n, 0.0), wgt(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const Field G = compute_G(traj.states[k], g, init.params);
        const Norms nm = discrete_norms(G, g);
        b.sup_G_l2_sq = std::max(b.sup_G_l2_sq, nm.l2 * nm.l2);
        linf4[k] = nm.linf * nm.linf * nm.linf * nm.linf;
        int excluded = 0;
        wgt[k] = weighted_Gy_sq(G, init, &excluded);
        b.vacuum_cells = excluded;
        if (k == 0) b.G0_l2_sq = nm.l2 * nm.l2;
    }
    for (std::size_t k = 1; k < n; ++k) {
        const double dt = traj.states[k].t - traj.states[k - 1].t;
        b.int_G_linf4 += 0.5 * dt * (linf4[k] + linf4[k - 1]);
        b.int_Gy_weighted += 0.5 * dt * (wgt[k] + wgt[k - 1]);
    }
    const double num = b.sup_G_l2_sq + b.int_G_linf4 + b.int_Gy_weighted;
    if (b.G0_l2_sq > 0.0)
        b.ratio = num / b.G0_l2_sq;
    else
        b.ratio = (num == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    return b;
}

CertReport full_report(const Trajectory& traj, const InitialData& init) {
    const MassGrid& g = init.grid;
    CertReport rep;
    rep.conserved = conserved_quantities(init);
    const Conserved& c = rep.conserved;
    const double J_floor = init.j_floor();

    const double band_exp = (2.0 / init.params.mu) * std::sqrt(2.0 * c.m0 * c.E0);
    rep.band_lo = std::exp(-band_exp);
    rep.band_hi = std::exp(band_exp);
    rep.band_widen = 10.0 * g.dy * g.dy;

    const std::size_t n = traj.states.size();
    std::vector<double> riccati(n, 0.0);
    if (n >= 3) riccati = riccati_residual(traj, init.params);

    rep.verdicts.mass_exact = true;
    rep.verdicts.j_above_floor = true;
    rep.verdicts.B_in_band = true;
    rep.verdicts.pi_nonnegative = true;

    double gy_cum = 0.0;
    double gy_prev = 0.0;
    double tvyt_cum = 0.0;
    Field vy_prev;
    for (std::size_t k = 0; k < n; ++k) {
        const State& s = traj.states[k];
        CertRecord r;
        r.t = s.t;
        r.mass_residual = std::abs(current_mass(s, g) - c.ell0);
        r.energy = current_energy(s, init);
        r.energy_drift = std::abs(r.energy - c.E0) / std::max(c.E0, 1e-300);
        r.min_J = *std::min_element(s.J.begin(), s.J.end());
        r.max_J = *std::max_element(s.J.begin(), s.J.end());
        r.j_lower = j_lower_bound(s.t, c, init.params, J_floor);
        const Field B = b_field(s, init);
        r.B_min = *std::min_element(B.begin(), B.end());
        r.B_max = *std::max_element(B.begin(), B.end());
        const Field G = compute_G(s, g, init.params);
        const Norms nm = discrete_norms(G, g);
        r.G_l2 = nm.l2;
        r.G_linf = nm.linf;
        const double gy_now = weighted_Gy_sq(G, init, nullptr);
        if (k > 0)
            gy_cum += 0.5 * (s.t - traj.states[k - 1].t) * (gy_now + gy_prev);
        gy_prev = gy_now;
        r.Gy_weighted_cum = gy_cum;
        r.phi_spread = phi_spread_fields(s, traj.int_pi[k], init);
        r.riccati = riccati[k];
        r.pi_min = *std::min_element(s.pi.begin(), s.pi.end());
        r.pi_max = *std::max_element(s.pi.begin(), s.pi.end());
        r.Jy_l2 = discrete_norms(ddy_center_to_node(s.J, g, BoundaryDiff::OneSided), g).l2;
        r.piy_l2 =
            discrete_norms(ddy_center_to_node(s.pi, g, BoundaryDiff::OneSided), g).l2;
        // t-weighted velocity-gradient rate from differenced stored slices,
        // midpoint rule per stored interval
        const Field vy_now = ddy_node_to_center(s.v, g);
        if (k > 0) {
            const double dt = s.t - traj.states[k - 1].t;
            Field vyt(g.num_centers());
            for (int i = 0; i < g.num_centers(); ++i)
                vyt[i] = (vy_now[i] - vy_prev[i]) / dt;
            const double nrm = discrete_norms(vyt, g).l2;
            tvyt_cum += (traj.states[k - 1].t + 0.5 * dt) * nrm * nrm * dt;
        }
        vy_prev = vy_now;
        r.t_vyt_cum = tvyt_cum;

        if (r.mass_residual > 1e-10 * c.ell0) rep.verdicts.mass_exact = false;
        if (r.min_J < r.j_lower - 1e-9) rep.verdicts.j_above_floor = false;
        if (r.B_min < rep.band_lo - rep.band_widen ||
            r.B_max > rep.band_hi + rep.band_widen)
            rep.verdicts.B_in_band = false;
        if (r.pi_min < 0.0) rep.verdicts.pi_nonnegative = false;

        rep.records.push_back(r);
    }
    rep.budget = g_energy_budget(traj, init);
    return rep;
}

}  // namespace ns1d
