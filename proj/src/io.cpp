#include "ns1d/io.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace ns1d {

namespace {

using nlohmann::json;

std::string snap_name(std::size_t index, const char* kind) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snap_%06zu_%s.csv", index, kind);
    return buf;
}

void write_lines(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("io: cannot open " + path.string() + " for writing");
    out << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("io: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : out_(path) {
    if (!out_) throw ConfigError("io: cannot open " + path + " for writing");
    out_ << "t,mass_residual,energy,minJ,j_lower,G_l2,G_linf,phi_spread,pi_max\n";
}

void DiagnosticsWriter::row(double t, double mass_residual, double energy,
                            double min_J, double j_lower, double G_l2,
                            double G_linf, double phi_spread, double pi_max) {
    out_ << fmt_double(t) << ',' << fmt_double(mass_residual) << ','
         << fmt_double(energy) << ',' << fmt_double(min_J) << ','
         << fmt_double(j_lower) << ',' << fmt_double(G_l2) << ','
         << fmt_double(G_linf) << ',' << fmt_double(phi_spread) << ','
         << fmt_double(pi_max) << '\n';
}

void write_trajectory(const std::string& dir, const Trajectory& traj,
                      const InitialData& init, const std::string& preset,
                      int snapshot_stride) {
    fs::create_directories(dir);
    const MassGrid& g = init.grid;
    const Conserved c = conserved_quantities(init);

    json manifest;
    manifest["grid"] = {{"L", g.L}, {"N", g.N}};
    manifest["physics"] = {{"mu", init.params.mu}, {"gamma", init.params.gamma}};
    manifest["preset"] = preset;
    manifest["snapshot_stride"] = snapshot_stride;
    manifest["conserved"] = {{"ell0", c.ell0}, {"m0", c.m0}, {"E0", c.E0}};
    manifest["snapshots"] = json::array();

    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const State& s = traj.states[k];
        const std::string cname = snap_name(k, "centers");
        const std::string nname = snap_name(k, "nodes");
        {
            std::ostringstream os;
            os << "y_center,J,pi,rho0,int_pi,int_vy\n";
            for (int i = 0; i < g.num_centers(); ++i)
                os << fmt_double(g.center(i)) << ',' << fmt_double(s.J[i]) << ','
                   << fmt_double(s.pi[i]) << ',' << fmt_double(init.rho0[i]) << ','
                   << fmt_double(traj.int_pi[k][i]) << ','
                   << fmt_double(traj.int_vy[k][i]) << '\n';
            write_lines(fs::path(dir) / cname, os.str());
        }
        {
            std::ostringstream os;
            os << "y_node,v\n";
            for (int i = 0; i < g.num_nodes(); ++i)
                os << fmt_double(g.node(i)) << ',' << fmt_double(s.v[i]) << '\n';
            write_lines(fs::path(dir) / nname, os.str());
        }
        manifest["snapshots"].push_back(
            {{"index", k}, {"t", s.t}, {"centers", cname}, {"nodes", nname}});
    }
    write_lines(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("io: cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("io: empty CSV " + path);
    {
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("io: non-numeric cell \"" + cell + "\" in " + path);
            }
        }
        if (row.size() != table.header.size())
            throw ConfigError("io: ragged row in " + path);
        table.rows.push_back(std::move(row));
    }
    return table;
}

LoadedTrajectory load_trajectory(const std::string& dir) {
    const fs::path root(dir);
    if (!fs::exists(root / "manifest.json"))
        throw ConfigError("io: no manifest.json in " + dir);
    json manifest;
    try {
        manifest = json::parse(slurp(root / "manifest.json"));
    } catch (const std::exception& e) {
        throw ConfigError("io: bad manifest: " + std::string(e.what()));
    }

    MassGrid grid;
    PhysParams params;
    try {
        grid = build_grid(manifest.at("grid").at("L").get<double>(),
                          manifest.at("grid").at("N").get<int>());
        params.mu = manifest.at("physics").at("mu").get<double>();
        params.gamma = manifest.at("physics").at("gamma").get<double>();
        validate_params(params);
    } catch (const json::exception& e) {
        throw ConfigError("io: manifest missing fields: " + std::string(e.what()));
    }

    const auto& snaps = manifest.at("snapshots");
    if (snaps.empty()) throw ConfigError("io: manifest lists no snapshots");

    Trajectory traj;
    traj.grid = grid;
    Field rho0;
    Field v0, pi0, J0;
    for (std::size_t k = 0; k < snaps.size(); ++k) {
        const CsvTable centers =
            read_csv((root / snaps[k].at("centers").get<std::string>()).string());
        const CsvTable nodes =
            read_csv((root / snaps[k].at("nodes").get<std::string>()).string());
        if (static_cast<int>(centers.rows.size()) != grid.num_centers() ||
            static_cast<int>(nodes.rows.size()) != grid.num_nodes())
            throw ConfigError("io: snapshot size does not match grid");
        State s;
        s.t = snaps[k].at("t").get<double>();
        s.J.resize(grid.num_centers());
        s.pi.resize(grid.num_centers());
        s.v.resize(grid.num_nodes());
        Field ipi(grid.num_centers()), ivy(grid.num_centers());
        for (int i = 0; i < grid.num_centers(); ++i) {
            s.J[i] = centers.rows[i][1];
            s.pi[i] = centers.rows[i][2];
            ipi[i] = centers.rows[i][4];
            ivy[i] = centers.rows[i][5];
        }
        for (int i = 0; i < grid.num_nodes(); ++i) s.v[i] = nodes.rows[i][1];
        if (k == 0) {
            rho0.resize(grid.num_centers());
            for (int i = 0; i < grid.num_centers(); ++i) rho0[i] = centers.rows[i][3];
            v0 = s.v;
            pi0 = s.pi;
            J0 = s.J;
        }
        traj.states.push_back(std::move(s));
        traj.int_pi.push_back(std::move(ipi));
        traj.int_vy.push_back(std::move(ivy));
    }
    LoadedTrajectory out{std::move(traj),
                         make_initial_data(grid, params, std::move(rho0),
                                           std::move(v0), std::move(pi0),
                                           std::move(J0))};
    return out;
}

void write_cert_report(const std::string& dir, const CertReport& rep) {
    std::ostringstream os;
    os << "t,mass_residual,energy,energy_drift,minJ,maxJ,j_lower,B_min,B_max,"
          "G_l2,G_linf,Gy_weighted_cum,phi_spread,riccati,pi_min,pi_max,"
          "Jy_l2,piy_l2,t_vyt_cum\n";
    for (const CertRecord& r : rep.records) {
        os << fmt_double(r.t) << ',' << fmt_double(r.mass_residual) << ','
           << fmt_double(r.energy) << ',' << fmt_double(r.energy_drift) << ','
           << fmt_double(r.min_J) << ',' << fmt_double(r.max_J) << ','
           << fmt_double(r.j_lower) << ',' << fmt_double(r.B_min) << ','
           << fmt_double(r.B_max) << ',' << fmt_double(r.G_l2) << ','
           << fmt_double(r.G_linf) << ',' << fmt_double(r.Gy_weighted_cum) << ','
           << fmt_double(r.phi_spread) << ',' << fmt_double(r.riccati) << ','
           << fmt_double(r.pi_min) << ',' << fmt_double(r.pi_max) << ','
           << fmt_double(r.Jy_l2) << ',' << fmt_double(r.piy_l2) << ','
           << fmt_double(r.t_vyt_cum) << '\n';
    }
    write_lines(fs::path(dir) / "cert_report.csv", os.str());
}

void write_verdicts(const std::string& dir, const CertReport& rep) {
    json v;
    v["verdicts"] = {{"mass_exact", rep.verdicts.mass_exact},
                     {"j_above_floor", rep.verdicts.j_above_floor},
                     {"B_in_band", rep.verdicts.B_in_band},
                     {"pi_nonnegative", rep.verdicts.pi_nonnegative},
                     {"all_pass", rep.verdicts.all()}};
    v["band"] = {{"lo", rep.band_lo}, {"hi", rep.band_hi}, {"widen", rep.band_widen}};
    v["conserved"] = {{"ell0", rep.conserved.ell0},
                      {"m0", rep.conserved.m0},
                      {"E0", rep.conserved.E0}};
    v["g_budget"] = {{"sup_G_l2_sq", rep.budget.sup_G_l2_sq},
                     {"int_G_linf4", rep.budget.int_G_linf4},
                     {"int_Gy_weighted", rep.budget.int_Gy_weighted},
                     {"G0_l2_sq", rep.budget.G0_l2_sq},
                     {"ratio", rep.budget.ratio},
                     {"vacuum_cells_excluded", rep.budget.vacuum_cells}};
    write_lines(fs::path(dir) / "verdicts.json", v.dump(2) + "\n");
}

}  // namespace ns1d
