#pragma once

#include <cstdint>
#include <string>

namespace homesched::cli {

// Exit codes shared by every subcommand:
//   0  success / everything certified
//   1  solver did not reach optimality (infeasible, iteration limit, ...)
//   2  a certificate failed where the guarantee applies, or a supplied
//      solution does not match the certified optimum
//   3  I/O, parse or validation error
inline constexpr int kExitOk = 0;
inline constexpr int kExitSolve = 1;
inline constexpr int kExitCertificate = 2;
inline constexpr int kExitInput = 3;

struct CommonOptions {
  double eps_c = -1.0;  // < 0: derive from battery ratings
};

// `profiles_csv` may be empty when the scenario config names a default
// profile in its [profiles] section.
int cmd_solve(const std::string& scenario_cfg, const std::string& profiles_csv,
              const std::string& out_dir, const CommonOptions& common = {});

int cmd_certify(const std::string& scenario_cfg, const std::string& solution_csv,
                const std::string& profiles_csv, const CommonOptions& common = {});

int cmd_oracle(const std::string& scenario_cfg, const std::string& profiles_csv, int k_limit,
               const CommonOptions& common = {});

int cmd_batch(const std::string& profiles_dir, const std::string& scenario_cfg,
              const std::string& out_csv, const std::string& schedules_dir,
              const CommonOptions& common = {});

int cmd_synth(std::uint64_t seed, int houses, int k, const std::string& out_dir);

// `eta_grid` is a comma-separated list of eta_ch:eta_dch pairs,
// e.g. "0.9:0.9,0.95:0.9,1.0:1.0".
int cmd_sweep(const std::string& scenario_cfg, const std::string& profiles_csv,
              const std::string& eta_grid, const std::string& out_csv,
              const CommonOptions& common = {});

int cmd_convert_ausgrid(const std::string& in_csv, const std::string& out_dir,
                        const std::string& date);

}  // namespace homesched::cli
