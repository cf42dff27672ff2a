#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homesched/analysis.hpp"
#include "homesched/model.hpp"
#include "homesched/program_builder.hpp"
#include "homesched/qp_solver.hpp"

namespace homesched {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One house's exogenous series. CSV schema, header exactly:
//   k,d_kw,r_kw,p_buy,p_sell,theta_ex_c
// with k contiguous from 0.
struct ProfileTable {
  std::string house_id;
  std::vector<double> d_kw;
  std::vector<double> r_kw;
  std::vector<double> p_buy;
  std::vector<double> p_sell;
  std::vector<double> theta_ex_c;

  int steps() const { return static_cast<int>(d_kw.size()); }
};

ProfileTable parse_profiles_csv(const std::string& text, const std::string& house_id);
ProfileTable load_profiles(const std::string& path);
std::string profiles_to_csv(const ProfileTable& table);
void save_profiles(const ProfileTable& table, const std::string& path);

// Scenario parameters without the exogenous series. Sections horizon,
// battery, tcl, nd_load, reg mirror the model types field-for-field; an
// optional [profiles] section names a default profile CSV (resolved
// relative to the config file).
struct ScenarioConfig {
  Horizon horizon;
  std::optional<BatteryParams> battery;
  std::optional<TclParams> tcl;  // external_temp_c stays empty, profiles fill it
  std::optional<NonDynLoadParams> nd_load;
  RegularizationParams reg;
  std::optional<std::string> profiles_path;
};

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& origin);
ScenarioConfig load_scenario_config(const std::string& path);
std::string scenario_config_to_string(const ScenarioConfig& cfg);
void save_scenario_config(const ScenarioConfig& cfg, const std::string& path);

// Joins the per-house series onto the config; the profile length must match
// the configured horizon.
HouseholdScenario make_scenario(const ScenarioConfig& cfg, const ProfileTable& profile);

// Deterministic synthetic fleet: bimodal demand, midday solar, three-level
// time-of-use tariff with the buy price above the sell price everywhere, and
// a sinusoidal hot-day outdoor temperature. Same seed, same bytes.
std::vector<ProfileTable> synth_houses(std::uint64_t seed, int n_houses, int K);

// Schedule CSV, header exactly:
//   k,u_ch_kw,u_dch_kw,u_nd_kw,u_tcl_kw,g_kw,soc,temp_c
// soc/temp_c hold the end-of-step state and read "nan" when the component
// is absent.
std::string schedule_to_csv(const ScheduleSolution& sol);
void save_schedule(const ScheduleSolution& sol, const std::string& path);
// Reads the control columns and rebuilds trajectories and costs for the
// given scenario.
ScheduleSolution load_schedule(const std::string& path, const HouseholdScenario& s);
ScheduleSolution parse_schedule_csv(const std::string& text, const HouseholdScenario& s);

std::string certificate_to_json(const CertificateReport& rep);

struct RunRow {
  std::string house_id;
  std::string status;  // solver status, "invalid" or "error"
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bill = std::numeric_limits<double>::quiet_NaN();
  double max_margin_kw = std::numeric_limits<double>::quiet_NaN();
  bool certified = false;
  bool condition_holds = false;
  int iterations = 0;
  double wall_time_ms = 0.0;
  std::string detail;  // not serialized; human-readable failure note
};

// Batch outcome, one row per house, rows sorted by house_id. The CSV
// serialization carries wall_time_ms as the final column; all other columns
// are deterministic for fixed inputs.
struct RunReport {
  std::vector<RunRow> rows;
  double max_margin_kw = 0.0;
  // False when any house solved to optimality under the efficiency condition
  // yet failed its certificate.
  bool all_certified_under_condition = true;
};

std::string run_report_to_csv(const RunReport& report);

struct BatchOptions {
  SolverSettings solver;
  CertifyOptions certify;
  std::string schedules_dir;  // empty: skip per-house schedule CSVs
};

// Solves and certifies every profile against the config; failures stay
// per-house. Writes the report CSV to report_path when non-empty.
RunReport run_batch(const std::vector<ProfileTable>& profiles, const ScenarioConfig& cfg,
                    const std::string& report_path, const BatchOptions& options = {});

struct SweepRow {
  double eta_charge = 0.0;
  double eta_discharge = 0.0;
  double product = 0.0;
  bool theorem_holds = false;
  double max_margin_kw = std::numeric_limits<double>::quiet_NaN();
  std::string status;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct SweepReport {
  std::vector<SweepRow> rows;
  // Every row with theorem_holds must come out non-simultaneous; rows with
  // the efficiency product at one are recorded observationally.
  bool all_ok = true;
};

std::string sweep_report_to_csv(const SweepReport& report);

SweepReport sweep_condition(const HouseholdScenario& base,
                            const std::vector<std::pair<double, double>>& eta_grid,
                            const std::string& out_path, const BatchOptions& options = {});

// Column mapping from the public half-hourly solar-home export: rows are
// (customer, category, date) with 48 half-hour kWh cells; GC+CL aggregate to
// the critical load, GG to generation, both averaged to hourly kW. Tariff
// and outdoor temperature are not part of that dataset and come from the
// options below.
struct AusgridOptions {
  std::string date;  // empty: first date in file order
  double price_offpeak = 0.22;
  double price_shoulder = 0.35;
  double price_peak = 0.55;
  double price_sell = 0.08;
  double theta_mean_c = 28.5;
  double theta_amp_c = 6.5;
};

std::vector<ProfileTable> convert_ausgrid(const std::string& in_path,
                                          const AusgridOptions& options = {});

// 17-significant-digit formatting used by every writer so that every value
// round-trips exactly.
std::string fmt_g17(double v);

}  // namespace homesched
