#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "ns1d/certify.hpp"
#include "ns1d/core.hpp"

namespace ns1d {

/// Shortest round-trip-exact decimal form of a double.
std::string fmt_double(double x);

/// Streams the per-step diagnostics rows of a run. Fixed column set:
/// t, mass_residual, energy, minJ, j_lower, G_l2, G_linf, phi_spread, pi_max.
class DiagnosticsWriter {
  public:
    explicit DiagnosticsWriter(const std::string& path);
    void row(double t, double mass_residual, double energy, double min_J,
             double j_lower, double G_l2, double G_linf, double phi_spread,
             double pi_max);

  private:
    std::ofstream out_;
};

/// Writes manifest.json plus one centers/nodes CSV pair per stored state.
/// Center columns: y_center, J, pi, rho0, int_pi, int_vy (the accumulators
/// ride along so a reloaded trajectory can evaluate the time-integral
/// functionals). Node columns: y_node, v.
void write_trajectory(const std::string& dir, const Trajectory& traj,
                      const InitialData& init, const std::string& preset,
                      int snapshot_stride);

struct LoadedTrajectory {
    Trajectory traj;
    InitialData init;
};

/// Rebuilds a trajectory and its initial data from a directory written by
/// write_trajectory. Throws ConfigError on missing or malformed files.
LoadedTrajectory load_trajectory(const std::string& dir);

/// cert_report.csv: one row per stored time.
void write_cert_report(const std::string& dir, const CertReport& rep);

/// verdicts.json: booleans plus band and budget summaries.
void write_verdicts(const std::string& dir, const CertReport& rep);

/// Parsed CSV with a header line; all cells numeric.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace ns1d
