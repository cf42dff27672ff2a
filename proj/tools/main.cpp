#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "homesched/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"homesched: day-ahead household energy scheduling with a certified battery plan"};
  app.require_subcommand(1);
  app.fallthrough();

  homesched::cli::CommonOptions common;
  app.add_option("--eps-c", common.eps_c,
                 "charge/discharge overlap tolerance in kW (default scales with ratings)");

  std::string scenario, profiles, solution, out_dir, out_csv, schedules_dir, eta_grid, in_csv,
      date;
  int k_limit = 10;
  std::uint64_t seed = 0;
  int houses = 1, k_steps = 24;

  CLI::App* c_solve = app.add_subcommand("solve", "solve and certify one house");
  c_solve->add_option("--scenario", scenario, "scenario config file")->required();
  c_solve->add_option("--profiles", profiles, "profile CSV (overrides the config's [profiles])");
  c_solve->add_option("--out", out_dir, "output directory")->required();

  CLI::App* c_certify = app.add_subcommand("certify", "check a stored schedule");
  c_certify->add_option("--scenario", scenario, "scenario config file")->required();
  c_certify->add_option("--solution", solution, "schedule CSV to check")->required();
  c_certify->add_option("--profiles", profiles, "profile CSV (overrides the config's [profiles])");

  CLI::App* c_oracle = app.add_subcommand("oracle", "enumerate activity patterns exactly");
  c_oracle->add_option("--scenario", scenario, "scenario config file")->required();
  c_oracle->add_option("--profiles", profiles, "profile CSV (overrides the config's [profiles])");
  c_oracle->add_option("--k-limit", k_limit, "max horizon length to enumerate (default 10)");

  CLI::App* c_batch = app.add_subcommand("batch", "solve a directory of profiles");
  c_batch->add_option("--profiles-dir", profiles, "directory of profile CSVs")->required();
  c_batch->add_option("--scenario", scenario, "scenario config file")->required();
  c_batch->add_option("--out", out_csv, "report CSV path")->required();
  c_batch->add_option("--schedules-dir", schedules_dir, "also write per-house schedule CSVs");

  CLI::App* c_synth = app.add_subcommand("synth", "generate synthetic profiles");
  c_synth->add_option("--seed", seed, "RNG seed")->required();
  c_synth->add_option("--houses", houses, "number of houses")->required();
  c_synth->add_option("--k", k_steps, "steps per horizon")->required();
  c_synth->add_option("--out", out_dir, "output directory")->required();

  CLI::App* c_sweep = app.add_subcommand("sweep", "solve across an efficiency grid");
  c_sweep->add_option("--scenario", scenario, "scenario config file")->required();
  c_sweep->add_option("--profiles", profiles, "profile CSV (overrides the config's [profiles])");
  c_sweep->add_option("--eta-grid", eta_grid, "comma list of eta_ch:eta_dch pairs")->required();
  c_sweep->add_option("--out", out_csv, "report CSV path")->required();

  CLI::App* c_convert = app.add_subcommand("convert-ausgrid", "convert half-hourly solar-home data");
  c_convert->add_option("--in", in_csv, "input CSV")->required();
  c_convert->add_option("--out", out_dir, "output directory")->required();
  c_convert->add_option("--date", date, "day to extract (default: first in file)");

  CLI11_PARSE(app, argc, argv);

  using namespace homesched::cli;
  if (app.got_subcommand(c_solve)) return cmd_solve(scenario, profiles, out_dir, common);
  if (app.got_subcommand(c_certify)) return cmd_certify(scenario, solution, profiles, common);
  if (app.got_subcommand(c_oracle)) return cmd_oracle(scenario, profiles, k_limit, common);
  if (app.got_subcommand(c_batch))
    return cmd_batch(profiles, scenario, out_csv, schedules_dir, common);
  if (app.got_subcommand(c_synth)) return cmd_synth(seed, houses, k_steps, out_dir);
  if (app.got_subcommand(c_sweep)) return cmd_sweep(scenario, profiles, eta_grid, out_csv, common);
  if (app.got_subcommand(c_convert)) return cmd_convert_ausgrid(in_csv, out_dir, date);
  return kExitInput;
}
