#include "ns1d/picard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ns1d/operators.hpp"

namespace ns1d {

namespace {

bool is_node_sized(const SpaceTimeField& f) {
    return !f.values.empty() &&
           static_cast<int>(f.values[0].size()) == f.grid.num_nodes();
}

void require_positive(const SpaceTimeField& J, const char* who) {
    for (const Field& slice : J.values)
        for (double x : slice)
            if (!(x > 0.0))
                throw DomainError(std::string(who) + ": J must stay positive on the window");
}

/// v_y/J per slice (center-valued).
SpaceTimeField rate_history(const SpaceTimeField& v, const SpaceTimeField& J) {
    SpaceTimeField r;
    r.grid = v.grid;
    r.times = v.times;
    r.values.resize(v.values.size());
    for (std::size_t k = 0; k < v.values.size(); ++k) {
        Field vy = ddy_node_to_center(v.values[k], v.grid);
        for (int i = 0; i < v.grid.num_centers(); ++i) vy[i] /= J.values[k][i];
        r.values[k] = std::move(vy);
    }
    return r;
}

/// Cumulative trapezoidal time integral per center, A[0] = 0.
SpaceTimeField cumulative_time_integral(const SpaceTimeField& f) {
    SpaceTimeField A;
    A.grid = f.grid;
    A.times = f.times;
    A.values.assign(f.values.size(), Field(f.values[0].size(), 0.0));
    for (std::size_t k = 1; k < f.values.size(); ++k) {
        const double dt = f.times[k] - f.times[k - 1];
        for (std::size_t i = 0; i < f.values[k].size(); ++i)
            A.values[k][i] =
                A.values[k - 1][i] + 0.5 * dt * (f.values[k - 1][i] + f.values[k][i]);
    }
    return A;
}

Field node_average_of_centers(const Field& c, const MassGrid& g) {
    Field out(g.num_nodes(), 0.0);
    for (int i = 1; i < g.N; ++i) out[i] = 0.5 * (c[i - 1] + c[i]);
    out[0] = c[0];
    out[g.N] = c[g.N - 1];
    return out;
}

/// Backward-Euler momentum solve against given J and pi histories.
SpaceTimeField solve_momentum_window(const SpaceTimeField& v,
                                     const SpaceTimeField& J,
                                     const SpaceTimeField& pi,
                                     const InitialData& init) {
    const MassGrid& g = init.grid;
    const int N = g.N;
    const double mu = init.params.mu;
    const double dt = v.dt();

    SpaceTimeField V;
    V.grid = g;
    V.times = v.times;
    V.values.resize(v.values.size());
    V.values[0] = init.v0;

    const Field rho_node = node_average_of_centers(init.rho0, g);

    TridiagonalSystem sys;
    sys.sub.assign(N, 0.0);
    sys.diag.assign(N + 1, 0.0);
    sys.super.assign(N, 0.0);
    sys.rhs.assign(N + 1, 0.0);

    for (int k = 1; k < v.num_slices(); ++k) {
        const Field& Jk = J.values[k];
        const Field J_node = node_average_of_centers(Jk, g);
        const Field Jy = ddy_center_to_node(Jk, g, BoundaryDiff::OneSided);
        const Field piy = ddy_center_to_node(pi.values[k], g, BoundaryDiff::OneSided);
        const Field vy_c = ddy_node_to_center(v.values[k], g);
        const Field vy_node = node_average_of_centers(vy_c, g);

        sys.diag[0] = 1.0;
        sys.super[0] = 0.0;
        sys.rhs[0] = 0.0;
        sys.diag[N] = 1.0;
        sys.sub[N - 1] = 0.0;
        sys.rhs[N] = 0.0;
        for (int i = 1; i < N; ++i) {
            const double denom = J_node[i] * rho_node[i];
            const double alpha = mu * dt / (g.dy * g.dy * denom);
            sys.sub[i - 1] = -alpha;
            sys.super[i] = -alpha;
            sys.diag[i] = 1.0 + 2.0 * alpha;
            const double rhs_force = -(mu * Jy[i] * vy_node[i] / (J_node[i] * denom) +
                                       piy[i] / rho_node[i]);
            sys.rhs[i] = V.values[k - 1][i] + dt * rhs_force;
        }
        Field Vk = solve_tridiagonal(sys);
        Vk[0] = 0.0;
        Vk[N] = 0.0;
        V.values[k] = std::move(Vk);
    }
    return V;
}

SpaceTimeField combine_R(const SpaceTimeField& R1, const SpaceTimeField& R2,
                         const PhysParams& p) {
    SpaceTimeField out = R1;
    const double c = p.mu * (p.gamma - 1.0);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        for (std::size_t i = 0; i < out.values[k].size(); ++i)
            out.values[k][i] += c * R2.values[k][i];
    return out;
}

SpaceTimeField difference(const SpaceTimeField& a, const SpaceTimeField& b) {
    SpaceTimeField out = a;
    for (std::size_t k = 0; k < out.values.size(); ++k)
        for (std::size_t i = 0; i < out.values[k].size(); ++i)
            out.values[k][i] -= b.values[k][i];
    return out;
}

}  // namespace

SpaceTimeField make_spacetime(const MassGrid& grid, double T, int K,
                              const Field& slice) {
    if (!(T > 0.0) || K < 1) throw ConfigError("spacetime: need T > 0 and K >= 1");
    SpaceTimeField f;
    f.grid = grid;
    f.times.resize(K + 1);
    for (int k = 0; k <= K; ++k) f.times[k] = T * k / K;
    f.values.assign(K + 1, slice);
    return f;
}

PicardConfig resolve_picard_config(const PicardConfig& cfg, const InitialData& init) {
    PicardConfig r = cfg;
    if (r.C1 <= 0.0) r.C1 = 2.0 * std::max(1.0, 1.0 / std::sqrt(init.grid.L));
    if (r.M <= 0.0) {
        const Field v0y = ddy_node_to_center(init.v0, init.grid);
        const Field v0yy = ddy_center_to_node(v0y, init.grid, BoundaryDiff::OneSided);
        const double a = discrete_norms(v0y, init.grid).l2;
        const double b = discrete_norms(v0yy, init.grid).l2;
        r.M = std::max(r.C_sharp, 2.0 * std::sqrt(a * a + b * b));
    }
    if (r.T_window <= 0.0) r.T_window = compute_T_sharp(r, init.j_floor());
    if (!(r.C_sharp > 0.0) || !(r.tol > 0.0 && r.tol < 1.0) || r.max_iter < 1 ||
        r.max_halvings < 0 || r.K < 1)
        throw ConfigError("picard config: invalid field values");
    return r;
}

double compute_T_sharp(const PicardConfig& cfg, double J_floor) {
    const double m4 = 1.0 / (cfg.M * cfg.M * cfg.M * cfg.M);
    const double c4 = 1.0 / (16.0 * cfg.C_sharp * cfg.C_sharp * cfg.C_sharp * cfg.C_sharp);
    const double jp = J_floor / (2.0 * cfg.C1);
    return std::min(std::min(m4, c4), std::min(1.0, jp * jp));
}

SpaceTimeField map_Q(const SpaceTimeField& v, const Field& J0) {
    if (!is_node_sized(v)) throw ConfigError("map_Q: expected node-valued history");
    const MassGrid& g = v.grid;
    SpaceTimeField J;
    J.grid = g;
    J.times = v.times;
    J.values.resize(v.values.size());
    J.values[0] = J0;
    Field cum(g.num_centers(), 0.0);
    Field vy_prev = ddy_node_to_center(v.values[0], g);
    for (int k = 1; k < v.num_slices(); ++k) {
        Field vy = ddy_node_to_center(v.values[k], g);
        const double dt = v.times[k] - v.times[k - 1];
        Field Jk(g.num_centers());
        for (int i = 0; i < g.num_centers(); ++i) {
            cum[i] += 0.5 * dt * (vy_prev[i] + vy[i]);
            Jk[i] = J0[i] + cum[i];
        }
        J.values[k] = std::move(Jk);
        vy_prev = std::move(vy);
    }
    return J;
}

SpaceTimeField map_R1(const SpaceTimeField& v, const SpaceTimeField& J,
                      const Field& pi0, double gamma) {
    require_positive(J, "map_R1");
    const SpaceTimeField A = cumulative_time_integral(rate_history(v, J));
    SpaceTimeField out;
    out.grid = v.grid;
    out.times = v.times;
    out.values.resize(v.values.size());
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        Field slice(v.grid.num_centers());
        for (int i = 0; i < v.grid.num_centers(); ++i)
            slice[i] = pi0[i] * std::exp(-gamma * A.values[k][i]);
        out.values[k] = std::move(slice);
    }
    return out;
}

SpaceTimeField map_R2(const SpaceTimeField& v, const SpaceTimeField& J,
                      double gamma) {
    require_positive(J, "map_R2");
    const SpaceTimeField r = rate_history(v, J);
    const SpaceTimeField A = cumulative_time_integral(r);
    const MassGrid& g = v.grid;
    const int K = v.num_slices() - 1;
    const double dt = v.dt();

    SpaceTimeField out;
    out.grid = g;
    out.times = v.times;
    out.values.assign(K + 1, Field(g.num_centers(), 0.0));

    double rate_max = 0.0;
    for (const Field& slice : r.values)
        for (double x : slice) rate_max = std::max(rate_max, std::abs(x));
    if (rate_max == 0.0) return out;  // zero integrand everywhere

    for (int k = 1; k <= K; ++k) {
        for (int i = 0; i < g.num_centers(); ++i) {
            double acc = 0.0;
            for (int j = 0; j <= k; ++j) {
                const double w = (j == 0 || j == k) ? 0.5 * dt : dt;
                const double rr = r.values[j][i];
                acc += w * rr * rr * std::exp(-gamma * (A.values[k][i] - A.values[j][i]));
            }
            out.values[k][i] = acc;
        }
    }
    return out;
}

SpaceTimeField map_F(const SpaceTimeField& v, const InitialData& init,
                     const PicardConfig& cfg) {
    (void)cfg;
    const double rho_min = *std::min_element(init.rho0.begin(), init.rho0.end());
    if (!(rho_min > 0.0))
        throw DomainError("map_F: requires strictly positive initial density");
    const SpaceTimeField J = map_Q(v, init.J0);
    require_positive(J, "map_F");
    const SpaceTimeField R1 = map_R1(v, J, init.pi0, init.params.gamma);
    const SpaceTimeField R2 = map_R2(v, J, init.params.gamma);
    const SpaceTimeField pi = combine_R(R1, R2, init.params);
    return solve_momentum_window(v, J, pi, init);
}

double vt_norm(const SpaceTimeField& f) {
    if (f.values.empty()) return 0.0;
    const bool nodes = is_node_sized(f);
    double sup2 = 0.0;
    std::vector<double> dy2(f.values.size(), 0.0);
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double l2 = discrete_norms(f.values[k], f.grid).l2;
        sup2 = std::max(sup2, l2 * l2);
        const Field fy = nodes
                             ? ddy_node_to_center(f.values[k], f.grid)
                             : ddy_center_to_node(f.values[k], f.grid,
                                                  BoundaryDiff::OneSided);
        const double l2y = discrete_norms(fy, f.grid).l2;
        dy2[k] = l2y * l2y;
    }
    double integral = 0.0;
    for (std::size_t k = 1; k < f.values.size(); ++k)
        integral += 0.5 * (f.times[k] - f.times[k - 1]) * (dy2[k] + dy2[k - 1]);
    return std::sqrt(sup2 + integral);
}

SpaceTimeField spacetime_ddy(const SpaceTimeField& v) {
    SpaceTimeField out;
    out.grid = v.grid;
    out.times = v.times;
    out.values.resize(v.values.size());
    for (std::size_t k = 0; k < v.values.size(); ++k)
        out.values[k] = ddy_node_to_center(v.values[k], v.grid);
    return out;
}

PicardResult picard_solve(const InitialData& init, const PicardConfig& cfg_in) {
    const double rho_min = *std::min_element(init.rho0.begin(), init.rho0.end());
    if (!(rho_min > 0.0))
        throw DomainError("picard_solve: requires strictly positive initial density");
    if (init.grid.N < 3)
        throw ConfigError("picard_solve: needs N >= 3 for the window norm");
    const PicardConfig cfg = resolve_picard_config(cfg_in, init);

    PicardResult res;
    res.initial_window = cfg.T_window;
    res.M = cfg.M;
    res.C1 = cfg.C1;

    std::ostringstream history;
    double T = cfg.T_window;
    for (int h = 0; h <= cfg.max_halvings; ++h) {
        res.halvings = h;
        res.window = T;
        res.distances.clear();
        res.ratios.clear();

        SpaceTimeField v_prev = make_spacetime(init.grid, T, cfg.K, init.v0);
        SpaceTimeField J, pi;
        bool window_failed = false;
        for (int iter = 1; iter <= cfg.max_iter && !window_failed; ++iter) {
            J = map_Q(v_prev, init.J0);
            bool positive = true;
            for (const Field& slice : J.values)
                for (double x : slice)
                    if (!(x > 0.0)) positive = false;
            if (!positive) {
                history << "window " << T << ": volume map lost positivity\n";
                window_failed = true;
                break;
            }
            const SpaceTimeField R1 = map_R1(v_prev, J, init.pi0, init.params.gamma);
            const SpaceTimeField R2 = map_R2(v_prev, J, init.params.gamma);
            pi = combine_R(R1, R2, init.params);
            SpaceTimeField v_next = solve_momentum_window(v_prev, J, pi, init);

            const double d = vt_norm(spacetime_ddy(difference(v_next, v_prev)));
            res.distances.push_back(d);
            res.iterations = iter;
            if (res.distances.size() >= 2) {
                const double prev = res.distances[res.distances.size() - 2];
                res.ratios.push_back(prev > 0.0 ? d / prev : 0.0);
            }
            if (d < cfg.tol) {
                res.v = std::move(v_next);
                res.J = map_Q(res.v, init.J0);
                const SpaceTimeField r1 = map_R1(res.v, res.J, init.pi0, init.params.gamma);
                const SpaceTimeField r2 = map_R2(res.v, res.J, init.params.gamma);
                res.pi = combine_R(r1, r2, init.params);
                return res;
            }
            if (iter >= 3 && !res.ratios.empty() && res.ratios.back() >= 1.0) {
                history << "window " << T << ": ratio " << res.ratios.back()
                        << " >= 1 at iteration " << iter << "\n";
                window_failed = true;
                break;
            }
            const double mnorm = vt_norm(spacetime_ddy(v_next));
            if (mnorm > cfg.M) {
                res.membership_violated = true;
                history << "window " << T << ": iterate norm " << mnorm
                        << " exceeded M = " << cfg.M << "\n";
                window_failed = true;
                break;
            }
            v_prev = std::move(v_next);
        }
        if (!window_failed)
            history << "window " << T << ": no convergence within " << cfg.max_iter
                    << " iterations\n";
        T *= 0.5;
    }
    throw NumericalError("picard_solve: no contraction after " +
                         std::to_string(cfg.max_halvings) + " halvings\n" +
                         history.str());
}

PicardResiduals fixed_point_residuals(const PicardResult& result,
                                      const InitialData& init) {
    const MassGrid& g = init.grid;
    const SpaceTimeField& v = result.v;
    const SpaceTimeField& J = result.J;
    const SpaceTimeField& pi = result.pi;
    const double dt = v.dt();
    const double mu = init.params.mu;
    const double gamma = init.params.gamma;
    const Field rho_node = node_average_of_centers(init.rho0, g);

    PicardResiduals res;
    for (int k = 1; k < v.num_slices(); ++k) {
        // volume equation, trapezoidal form
        {
            Field r(g.num_centers());
            const Field vyk = ddy_node_to_center(v.values[k], g);
            const Field vykm = ddy_node_to_center(v.values[k - 1], g);
            for (int i = 0; i < g.num_centers(); ++i)
                r[i] = (J.values[k][i] - J.values[k - 1][i]) / dt -
                       0.5 * (vyk[i] + vykm[i]);
            res.eqJ = std::max(res.eqJ, discrete_norms(r, g).l2);
        }
        // momentum equation in conservative form at the new time level
        {
            Field flux = ddy_node_to_center(v.values[k], g);
            for (int i = 0; i < g.num_centers(); ++i) flux[i] /= J.values[k][i];
            const Field dflux = ddy_center_to_node(flux, g, BoundaryDiff::OneSided);
            const Field piy = ddy_center_to_node(pi.values[k], g, BoundaryDiff::OneSided);
            double sum = 0.0;
            for (int i = 1; i < g.N; ++i) {
                const double r = rho_node[i] * (v.values[k][i] - v.values[k - 1][i]) / dt -
                                 mu * dflux[i] + piy[i];
                sum += r * r * g.dy;
            }
            res.eqV = std::max(res.eqV, std::sqrt(sum));
        }
        // pressure equation at the time midpoint
        {
            Field rk = ddy_node_to_center(v.values[k], g);
            Field rkm = ddy_node_to_center(v.values[k - 1], g);
            Field r(g.num_centers());
            for (int i = 0; i < g.num_centers(); ++i) {
                const double rate_mid = 0.5 * (rk[i] / J.values[k][i] +
                                               rkm[i] / J.values[k - 1][i]);
                const double pi_mid = 0.5 * (pi.values[k][i] + pi.values[k - 1][i]);
                r[i] = (pi.values[k][i] - pi.values[k - 1][i]) / dt +
                       gamma * rate_mid * pi_mid -
                       mu * (gamma - 1.0) * rate_mid * rate_mid;
            }
            res.eqPi = std::max(res.eqPi, discrete_norms(r, g).l2);
        }
    }
    return res;
}

}  // namespace ns1d
