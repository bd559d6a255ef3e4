#pragma once

#include <string>
#include <vector>

namespace ns1d {

// Exit codes: 0 success, 1 configuration/usage error, 2 solver failure,
// 3 certification verdict failure.

int cmd_run(const std::string& config_path, const std::string& out_dir);
int cmd_certify(const std::string& traj_dir);
int cmd_convergence(const std::string& config_path, int levels,
                    const std::string& out_dir);
int cmd_picard(const std::string& config_path, const std::string& out_dir);
int cmd_sweep(const std::string& config_path, const std::vector<double>& floors,
              const std::string& out_dir);

/// Full argv dispatch, shared by the binary and the tests.
int cli_main(int argc, const char* const* argv);

}  // namespace ns1d
