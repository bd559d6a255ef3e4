#include "ns1d/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ns1d/certify.hpp"
#include "ns1d/integrator.hpp"
#include "ns1d/io.hpp"
#include "ns1d/run_config.hpp"

namespace fs = std::filesystem;

namespace ns1d {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerdict = 3;

int report_error(const std::exception& e, int code) {
    std::cerr << "error: " << e.what() << "\n";
    return code;
}

/// Coarsen a fine-level field by one refinement step: centers pairwise
/// averaged, nodes subsampled at even indices.
Field restrict_centers(const Field& fine) {
    Field out(fine.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (fine[2 * i] + fine[2 * i + 1]);
    return out;
}

Field restrict_nodes(const Field& fine) {
    Field out((fine.size() + 1) / 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fine[2 * i];
    return out;
}

std::string order_cell(double coarse, double fine) {
    // both at roundoff: no meaningful order
    if (std::abs(coarse) < 1e-12 && std::abs(fine) < 1e-12) return "exact";
    if (!(fine > 0.0) || !(coarse > 0.0)) return "n/a";
    std::ostringstream os;
    os << std::log2(coarse / fine);
    return os.str();
}

Trajectory run_with_diagnostics(const InitialData& init, const StepConfig& step,
                                int stride, const std::string& out_dir) {
    const Conserved c = conserved_quantities(init);
    const double J_floor = init.j_floor();
    DiagnosticsWriter diag((fs::path(out_dir) / "diagnostics.csv").string());
    const StepObserver observer = [&](const State& s, const Field& int_pi,
                                      const StepDiagnostics& d) {
        const Field G = compute_G(s, init.grid, init.params);
        const Norms nm = discrete_norms(G, init.grid);
        diag.row(d.t, d.mass_residual, d.energy, d.min_J,
                 j_lower_bound(d.t, c, init.params, J_floor), nm.l2, nm.linf,
                 phi_spread_fields(s, int_pi, init), d.max_pi);
    };
    return run(init, step, stride, observer);
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    RunConfig cfg;
    InitialData init;
    try {
        cfg = load_run_config(config_path);
        init = build_initial_data(cfg);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }
    try {
        const Trajectory traj =
            run_with_diagnostics(init, cfg.step, cfg.snapshot_stride, out_dir);
        write_trajectory(out_dir, traj, init, cfg.preset, cfg.snapshot_stride);
    } catch (const NumericalError& e) {
        return report_error(e, kExitSolver);
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }
    return kExitOk;
}

int cmd_certify(const std::string& traj_dir) {
    try {
        const LoadedTrajectory loaded = load_trajectory(traj_dir);
        const CertReport rep = full_report(loaded.traj, loaded.init);
        write_cert_report(traj_dir, rep);
        write_verdicts(traj_dir, rep);
        std::cout << "mass_exact: " << (rep.verdicts.mass_exact ? "pass" : "FAIL")
                  << "\nj_above_floor: "
                  << (rep.verdicts.j_above_floor ? "pass" : "FAIL")
                  << "\nB_in_band: " << (rep.verdicts.B_in_band ? "pass" : "FAIL")
                  << "\npi_nonnegative: "
                  << (rep.verdicts.pi_nonnegative ? "pass" : "FAIL") << "\n";
        return rep.verdicts.all() ? kExitOk : kExitVerdict;
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }
}

int cmd_convergence(const std::string& config_path, int levels,
                    const std::string& out_dir) {
    if (levels < 2) {
        std::cerr << "error: convergence needs at least 2 levels\n";
        return kExitConfig;
    }
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }

    struct Level {
        int N = 0;
        double dt = 0.0;
        Trajectory traj;
        InitialData init;
        double energy_drift = 0.0;
        double phi = 0.0;
        double riccati = 0.0;
    };
    std::vector<Level> lv(levels);
    try {
        for (int l = 0; l < levels; ++l) {
            RunConfig c = cfg;
            c.N = cfg.N << l;
            c.step.dt = cfg.step.dt / (1 << l);
            // stride stays fixed, so the stored sampling interval refines
            // together with dt and sampled residuals can converge
            lv[l].N = c.N;
            lv[l].dt = c.step.dt;
            lv[l].init = build_initial_data(c);
            lv[l].traj = run(lv[l].init, c.step, c.snapshot_stride);
            const Conserved cons = conserved_quantities(lv[l].init);
            const State& fin = lv[l].traj.states.back();
            lv[l].energy_drift = std::abs(current_energy(fin, lv[l].init) - cons.E0) /
                                 std::max(cons.E0, 1e-300);
            lv[l].phi = phi_spread(fin, lv[l].traj, lv[l].init);
            if (lv[l].traj.states.size() >= 3) {
                const auto res = riccati_residual(lv[l].traj, cfg.phys);
                for (std::size_t k = 1; k + 1 < res.size(); ++k)
                    lv[l].riccati = std::max(lv[l].riccati, res[k]);
            }
        }
    } catch (const std::exception& e) {
        return report_error(e, kExitSolver);
    }

    // final-state self-differences between consecutive levels, on the
    // coarser grid after restriction
    std::vector<double> self_diff(levels - 1, 0.0);
    for (int l = 0; l + 1 < levels; ++l) {
        const State& coarse = lv[l].traj.states.back();
        const State& fine = lv[l + 1].traj.states.back();
        const Field vr = restrict_nodes(fine.v);
        const Field Jr = restrict_centers(fine.J);
        Field dv(coarse.v.size()), dJ(coarse.J.size());
        for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = coarse.v[i] - vr[i];
        for (std::size_t i = 0; i < dJ.size(); ++i) dJ[i] = coarse.J[i] - Jr[i];
        const MassGrid& g = lv[l].init.grid;
        self_diff[l] = discrete_norms(dv, g).l2 + discrete_norms(dJ, g).l2;
    }

    std::ostringstream os;
    os << "level,N,dt,self_diff,energy_drift,phi_spread,riccati\n";
    for (int l = 0; l < levels; ++l) {
        os << l << ',' << lv[l].N << ',' << fmt_double(lv[l].dt) << ','
           << (l + 1 < levels ? fmt_double(self_diff[l]) : std::string("-")) << ','
           << fmt_double(lv[l].energy_drift) << ',' << fmt_double(lv[l].phi) << ','
           << fmt_double(lv[l].riccati) << '\n';
    }
    os << "orders\n";
    os << "pair,self_diff,energy_drift,phi_spread,riccati\n";
    for (int l = 0; l + 1 < levels; ++l) {
        os << l << "-" << (l + 1) << ','
           << (l + 2 < levels ? order_cell(self_diff[l], self_diff[l + 1])
                              : std::string("-"))
           << ',' << order_cell(lv[l].energy_drift, lv[l + 1].energy_drift) << ','
           << order_cell(lv[l].phi, lv[l + 1].phi) << ','
           << order_cell(lv[l].riccati, lv[l + 1].riccati) << '\n';
    }
    const std::string table = os.str();
    std::cout << table;
    try {
        std::ofstream f(fs::path(out_dir) / "convergence.csv");
        f << table;
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }
    return kExitOk;
}

int cmd_picard(const std::string& config_path, const std::string& out_dir) {
    RunConfig cfg;
    InitialData init;
    try {
        cfg = load_run_config(config_path);
        init = build_initial_data(cfg);
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }
    PicardResult res;
    try {
        res = picard_solve(init, cfg.picard);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what()
                  << " (the window iteration is defined away from vacuum)\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        return report_error(e, kExitSolver);
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }
    const PicardResiduals resid = fixed_point_residuals(res, init);

    std::cout << "initial window: " << res.initial_window
              << "\nfinal window:   " << res.window
              << "\nhalvings:       " << res.halvings
              << "\niterations:     " << res.iterations << "\nM: " << res.M
              << "  C1: " << res.C1 << "\n";
    std::cout << "distances:";
    for (double d : res.distances) std::cout << ' ' << d;
    std::cout << "\nratios:";
    for (double r : res.ratios) std::cout << ' ' << r;
    std::cout << "\nresiduals: volume " << resid.eqJ << ", momentum " << resid.eqV
              << ", pressure " << resid.eqPi << "\n";

    if (!out_dir.empty()) {
        try {
            fs::create_directories(out_dir);
            nlohmann::json j;
            j["initial_window"] = res.initial_window;
            j["final_window"] = res.window;
            j["halvings"] = res.halvings;
            j["iterations"] = res.iterations;
            j["M"] = res.M;
            j["C1"] = res.C1;
            j["membership_violated"] = res.membership_violated;
            j["distances"] = res.distances;
            j["ratios"] = res.ratios;
            j["residuals"] = {{"volume", resid.eqJ},
                              {"momentum", resid.eqV},
                              {"pressure", resid.eqPi}};
            std::ofstream f(fs::path(out_dir) / "picard.json");
            f << j.dump(2) << "\n";
        } catch (const std::exception& e) {
            return report_error(e, kExitConfig);
        }
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& floors,
              const std::string& out_dir) {
    if (floors.empty()) {
        std::cerr << "error: sweep needs a non-empty floors list\n";
        return kExitConfig;
    }
    RunConfig cfg;
    InitialData init;
    try {
        cfg = load_run_config(config_path);
        init = build_initial_data(cfg);
        for (double n : floors)
            if (!(n > 0.0)) throw ConfigError("sweep: floors must be positive");
    } catch (const std::exception& e) {
        return report_error(e, kExitConfig);
    }

    const VacuumSweep sweep =
        vacuum_sequence_run(init, floors, cfg.step, cfg.snapshot_stride);

    std::ostringstream os;
    os << "n,status,sup_dv_l2,sup_dJ_l2,total\n";
    bool any_ok = false;
    for (const SweepEntry& e : sweep.floored) {
        if (!sweep.reference.ok || !e.ok) {
            os << fmt_double(e.n) << ",failed,-,-,-\n";
            continue;
        }
        any_ok = true;
        const TrajDistance d =
            trajectory_distance(e.traj, sweep.reference.traj, init.grid);
        os << fmt_double(e.n) << ",ok," << fmt_double(d.sup_v_l2) << ','
           << fmt_double(d.sup_J_l2) << ',' << fmt_double(d.total()) << '\n';
    }
    const std::string table = os.str();
    std::cout << table;
    if (!sweep.reference.ok)
        std::cerr << "reference run failed: " << sweep.reference.error << "\n";
    if (!out_dir.empty()) {
        try {
            fs::create_directories(out_dir);
            std::ofstream f(fs::path(out_dir) / "sweep.csv");
            f << table;
        } catch (const std::exception& e) {
            return report_error(e, kExitConfig);
        }
    }
    return any_ok ? kExitOk : kExitSolver;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"1D Lagrangian compressible flow solver and certifier"};
    app.require_subcommand(1);

    std::string config_path, out_dir, traj_dir;
    int levels = 3;
    std::vector<double> floors;

    CLI::App* c_run = app.add_subcommand("run", "integrate and persist a trajectory");
    c_run->add_option("--config", config_path, "JSON config")->required();
    c_run->add_option("--out", out_dir, "output directory")->required();

    CLI::App* c_cert = app.add_subcommand("certify", "evaluate bounds on a trajectory");
    c_cert->add_option("--traj", traj_dir, "trajectory directory")->required();

    CLI::App* c_conv = app.add_subcommand("convergence", "refinement study");
    c_conv->add_option("--config", config_path, "JSON config")->required();
    c_conv->add_option("--levels", levels, "number of refinement levels")->required();
    c_conv->add_option("--out", out_dir, "output directory");

    CLI::App* c_pic = app.add_subcommand("picard", "window fixed-point iteration");
    c_pic->add_option("--config", config_path, "JSON config")->required();
    c_pic->add_option("--out", out_dir, "output directory");

    CLI::App* c_sweep = app.add_subcommand("sweep", "density-floor sequence study");
    c_sweep->add_option("--config", config_path, "JSON config")->required();
    c_sweep->add_option("--floors", floors, "comma-separated floor parameters")
        ->required()
        ->delimiter(',');
    c_sweep->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (c_run->parsed()) return cmd_run(config_path, out_dir);
    if (c_cert->parsed()) return cmd_certify(traj_dir);
    if (c_conv->parsed())
        return cmd_convergence(config_path, levels,
                               out_dir.empty() ? "convergence_out" : out_dir);
    if (c_pic->parsed()) return cmd_picard(config_path, out_dir);
    if (c_sweep->parsed())
        return cmd_sweep(config_path, floors, out_dir);
    return kExitConfig;
}

}  // namespace ns1d
