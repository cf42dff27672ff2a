#include "homesched/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace homesched {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& cell, const std::string& where) {
  const std::string t = trim(cell);
  if (t.empty()) throw ParseError(where + ": empty numeric cell");
  try {
    size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw ParseError(where + ": non-numeric cell '" + cell + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(where + ": non-numeric cell '" + cell + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
  if (!out) throw ParseError("write failed for " + path);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

constexpr const char* kProfileHeader = "k,d_kw,r_kw,p_buy,p_sell,theta_ex_c";
constexpr const char* kScheduleHeader = "k,u_ch_kw,u_dch_kw,u_nd_kw,u_tcl_kw,g_kw,soc,temp_c";

// splitmix64; keeps the generator independent of stdlib distribution details
// so identical seeds give identical bytes everywhere.
std::uint64_t mix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_draw(std::uint64_t& state) { return (mix64(state) >> 11) * 0x1.0p-53; }

double tou_buy_price(double hour, double offpeak, double shoulder, double peak) {
  if (hour >= 14.0 && hour < 20.0) return peak;
  if ((hour >= 7.0 && hour < 14.0) || (hour >= 20.0 && hour < 22.0)) return shoulder;
  return offpeak;
}

const char* bool_str(bool v) { return v ? "true" : "false"; }

}  // namespace

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ProfileTable parse_profiles_csv(const std::string& text, const std::string& house_id) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw ParseError(house_id + ": empty profile file");
  const std::vector<std::string> header = split_csv(lines[0]);
  const std::vector<std::string> expected = split_csv(kProfileHeader);
  if (header.size() != expected.size()) {
    throw ParseError(house_id + " line 1: expected header '" + kProfileHeader + "'");
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    if (trim(header[i]) != expected[i])
      throw ParseError(house_id + " line 1: missing or misplaced column '" + expected[i] + "'");
  }

  ProfileTable t;
  t.house_id = house_id;
  int k = 0;
  for (size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const std::string where = house_id + " line " + std::to_string(li + 1);
    const std::vector<std::string> cells = split_csv(lines[li]);
    if (cells.size() != expected.size())
      throw ParseError(where + ": expected " + std::to_string(expected.size()) + " cells, got " +
                       std::to_string(cells.size()));
    const double kv = parse_double(cells[0], where);
    if (kv != k) throw ParseError(where + ": k must be contiguous from 0");
    const double d = parse_double(cells[1], where);
    const double r = parse_double(cells[2], where);
    const double pb = parse_double(cells[3], where);
    const double ps = parse_double(cells[4], where);
    const double th = parse_double(cells[5], where);
    for (double v : {d, r, pb, ps, th}) {
      if (!std::isfinite(v)) throw ParseError(where + ": non-finite value");
    }
    t.d_kw.push_back(d);
    t.r_kw.push_back(r);
    t.p_buy.push_back(pb);
    t.p_sell.push_back(ps);
    t.theta_ex_c.push_back(th);
    ++k;
  }
  if (t.steps() == 0) throw ParseError(house_id + ": no data rows");
  return t;
}

ProfileTable load_profiles(const std::string& path) {
  return parse_profiles_csv(read_file(path), fs::path(path).stem().string());
}

std::string profiles_to_csv(const ProfileTable& table) {
  std::ostringstream os;
  os << kProfileHeader << "\n";
  for (int k = 0; k < table.steps(); ++k) {
    os << k << ',' << fmt_g17(table.d_kw[k]) << ',' << fmt_g17(table.r_kw[k]) << ','
       << fmt_g17(table.p_buy[k]) << ',' << fmt_g17(table.p_sell[k]) << ','
       << fmt_g17(table.theta_ex_c[k]) << "\n";
  }
  return os.str();
}

void save_profiles(const ProfileTable& table, const std::string& path) {
  write_file(path, profiles_to_csv(table));
}

namespace {

struct ConfigSetter {
  std::map<std::string, double*> numbers;
  std::map<std::string, int*> integers;
};

void apply_kv(ConfigSetter& setter, const std::string& section, const std::string& key,
              const std::string& value, const std::string& where) {
  if (auto it = setter.numbers.find(key); it != setter.numbers.end()) {
    *it->second = parse_double(value, where);
    return;
  }
  if (auto it = setter.integers.find(key); it != setter.integers.end()) {
    const double v = parse_double(value, where);
    if (v != std::floor(v)) throw ParseError(where + ": expected an integer for " + key);
    *it->second = static_cast<int>(v);
    return;
  }
  throw ParseError(where + ": unknown key '" + key + "' in section [" + section + "]");
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  std::string section;
  ConfigSetter setter;
  std::string profiles_path;

  auto enter_section = [&](const std::string& name, const std::string& where) {
    setter = ConfigSetter{};
    if (name == "horizon") {
      setter.integers["steps"] = &cfg.horizon.steps;
      setter.numbers["dt_hours"] = &cfg.horizon.dt_hours;
    } else if (name == "battery") {
      if (!cfg.battery) cfg.battery.emplace();
      BatteryParams& b = *cfg.battery;
      setter.numbers = {{"max_charge_kw", &b.max_charge_kw},
                        {"max_discharge_kw", &b.max_discharge_kw},
                        {"eta_charge", &b.eta_charge},
                        {"eta_discharge", &b.eta_discharge},
                        {"self_discharge_kw", &b.self_discharge_kw},
                        {"capacity_kwh", &b.capacity_kwh},
                        {"soc_init", &b.soc_init},
                        {"soc_min", &b.soc_min},
                        {"soc_max", &b.soc_max}};
    } else if (name == "tcl") {
      if (!cfg.tcl) cfg.tcl.emplace();
      TclParams& t = *cfg.tcl;
      setter.numbers = {{"thermal_capacitance", &t.thermal_capacitance},
                        {"thermal_resistance", &t.thermal_resistance},
                        {"cop", &t.cop},
                        {"setpoint_c", &t.setpoint_c},
                        {"dead_band_c", &t.dead_band_c},
                        {"theta_init_c", &t.theta_init_c},
                        {"max_power_kw", &t.max_power_kw}};
    } else if (name == "nd_load") {
      if (!cfg.nd_load) cfg.nd_load.emplace();
      NonDynLoadParams& d = *cfg.nd_load;
      setter.numbers = {{"min_power_kw", &d.min_power_kw},
                        {"max_power_kw", &d.max_power_kw},
                        {"total", &d.total}};
    } else if (name == "reg") {
      RegularizationParams& r = cfg.reg;
      setter.numbers = {{"charge_quad", &r.charge_quad},       {"charge_lin", &r.charge_lin},
                        {"discharge_quad", &r.discharge_quad}, {"discharge_lin", &r.discharge_lin},
                        {"nd_quad", &r.nd_quad},               {"nd_lin", &r.nd_lin},
                        {"tcl_quad", &r.tcl_quad},             {"tcl_lin", &r.tcl_lin}};
    } else if (name != "profiles") {
      throw ParseError(where + ": unknown section [" + name + "]");
    }
  };

  const std::vector<std::string> lines = split_lines(text);
  for (size_t li = 0; li < lines.size(); ++li) {
    const std::string where = origin + " line " + std::to_string(li + 1);
    std::string line = trim(lines[li]);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      enter_section(section, where);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError(where + ": key outside any section");
    if (section == "profiles") {
      if (key != "path") throw ParseError(where + ": unknown key '" + key + "' in [profiles]");
      profiles_path = value;
      continue;
    }
    apply_kv(setter, section, key, value, where);
  }
  if (!profiles_path.empty()) cfg.profiles_path = profiles_path;
  return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  ScenarioConfig cfg = parse_scenario_config(read_file(path), path);
  if (cfg.profiles_path && fs::path(*cfg.profiles_path).is_relative()) {
    cfg.profiles_path = (fs::path(path).parent_path() / *cfg.profiles_path).string();
  }
  return cfg;
}

std::string scenario_config_to_string(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "[horizon]\n";
  os << "steps = " << cfg.horizon.steps << "\n";
  os << "dt_hours = " << fmt_g17(cfg.horizon.dt_hours) << "\n";
  if (cfg.battery) {
    const BatteryParams& b = *cfg.battery;
    os << "\n[battery]\n";
    os << "max_charge_kw = " << fmt_g17(b.max_charge_kw) << "\n";
    os << "max_discharge_kw = " << fmt_g17(b.max_discharge_kw) << "\n";
    os << "eta_charge = " << fmt_g17(b.eta_charge) << "\n";
    os << "eta_discharge = " << fmt_g17(b.eta_discharge) << "\n";
    os << "self_discharge_kw = " << fmt_g17(b.self_discharge_kw) << "\n";
    os << "capacity_kwh = " << fmt_g17(b.capacity_kwh) << "\n";
    os << "soc_init = " << fmt_g17(b.soc_init) << "\n";
    os << "soc_min = " << fmt_g17(b.soc_min) << "\n";
    os << "soc_max = " << fmt_g17(b.soc_max) << "\n";
  }
  if (cfg.tcl) {
    const TclParams& t = *cfg.tcl;
    os << "\n[tcl]\n";
    os << "thermal_capacitance = " << fmt_g17(t.thermal_capacitance) << "\n";
    os << "thermal_resistance = " << fmt_g17(t.thermal_resistance) << "\n";
    os << "cop = " << fmt_g17(t.cop) << "\n";
    os << "setpoint_c = " << fmt_g17(t.setpoint_c) << "\n";
    os << "dead_band_c = " << fmt_g17(t.dead_band_c) << "\n";
    os << "theta_init_c = " << fmt_g17(t.theta_init_c) << "\n";
    os << "max_power_kw = " << fmt_g17(t.max_power_kw) << "\n";
  }
  if (cfg.nd_load) {
    const NonDynLoadParams& d = *cfg.nd_load;
    os << "\n[nd_load]\n";
    os << "min_power_kw = " << fmt_g17(d.min_power_kw) << "\n";
    os << "max_power_kw = " << fmt_g17(d.max_power_kw) << "\n";
    os << "total = " << fmt_g17(d.total) << "\n";
  }
  os << "\n[reg]\n";
  os << "charge_quad = " << fmt_g17(cfg.reg.charge_quad) << "\n";
  os << "charge_lin = " << fmt_g17(cfg.reg.charge_lin) << "\n";
  os << "discharge_quad = " << fmt_g17(cfg.reg.discharge_quad) << "\n";
  os << "discharge_lin = " << fmt_g17(cfg.reg.discharge_lin) << "\n";
  os << "nd_quad = " << fmt_g17(cfg.reg.nd_quad) << "\n";
  os << "nd_lin = " << fmt_g17(cfg.reg.nd_lin) << "\n";
  os << "tcl_quad = " << fmt_g17(cfg.reg.tcl_quad) << "\n";
  os << "tcl_lin = " << fmt_g17(cfg.reg.tcl_lin) << "\n";
  if (cfg.profiles_path) {
    os << "\n[profiles]\n";
    os << "path = " << *cfg.profiles_path << "\n";
  }
  return os.str();
}

void save_scenario_config(const ScenarioConfig& cfg, const std::string& path) {
  write_file(path, scenario_config_to_string(cfg));
}

HouseholdScenario make_scenario(const ScenarioConfig& cfg, const ProfileTable& profile) {
  if (profile.steps() != cfg.horizon.steps) {
    throw ParseError("profile '" + profile.house_id + "' has " + std::to_string(profile.steps()) +
                     " rows but the configured horizon has " + std::to_string(cfg.horizon.steps));
  }
  HouseholdScenario s;
  s.horizon = cfg.horizon;
  s.tariff.buy = profile.p_buy;
  s.tariff.sell = profile.p_sell;
  s.battery = cfg.battery;
  s.tcl = cfg.tcl;
  if (s.tcl) s.tcl->external_temp_c = profile.theta_ex_c;
  s.nd_load = cfg.nd_load;
  s.reg = cfg.reg;
  s.critical_kw = profile.d_kw;
  s.renewable_kw = profile.r_kw;
  return s;
}

std::vector<ProfileTable> synth_houses(std::uint64_t seed, int n_houses, int K) {
  if (n_houses < 1) throw std::invalid_argument("synth_houses: n_houses must be >= 1");
  if (K < 1) throw std::invalid_argument("synth_houses: K must be >= 1");
  std::vector<ProfileTable> out;
  out.reserve(n_houses);
  int width = 3;
  for (int v = n_houses - 1; v >= 1000 && width < 9; v /= 10) ++width;

  for (int h = 0; h < n_houses; ++h) {
    std::uint64_t state = seed * 0x9E3779B97F4A7C15ull + (static_cast<std::uint64_t>(h) + 1) *
                                                             0xD1B54A32D192ED03ull;
    const double demand_scale = 0.7 + 0.8 * unit_draw(state);
    const double morning_amp = 0.6 + 1.0 * unit_draw(state);
    const double evening_amp = 0.9 + 1.4 * unit_draw(state);
    const double solar_amp = 1.0 + 3.0 * unit_draw(state);
    const double morning_jitter = unit_draw(state) - 0.5;
    const double evening_jitter = unit_draw(state) - 0.5;

    ProfileTable t;
    {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "house_%0*d", width, h);
      t.house_id = buf;
    }
    for (int k = 0; k < K; ++k) {
      const double hour = (k + 0.5) * 24.0 / K;
      auto bump = [](double x, double center, double width_h) {
        const double z = (x - center) / width_h;
        return std::exp(-0.5 * z * z);
      };
      double d = 0.3 * demand_scale + morning_amp * bump(hour, 7.5 + morning_jitter, 1.6) +
                 evening_amp * bump(hour, 19.0 + evening_jitter, 2.2) +
                 0.1 * unit_draw(state);
      d = std::clamp(d, 0.2, 3.0);
      double r = 0.0;
      if (hour > 6.0 && hour < 19.0) {
        const double s2 = std::sin(M_PI * (hour - 6.0) / 13.0);
        r = solar_amp * s2 * s2;
      }
      r = std::clamp(r, 0.0, 4.0);
      const double p = tou_buy_price(hour, 0.22, 0.35, 0.55);
      const double theta = 28.5 + 6.5 * std::sin(2.0 * M_PI * (hour - 9.0) / 24.0);
      t.d_kw.push_back(d);
      t.r_kw.push_back(r);
      t.p_buy.push_back(p);
      t.p_sell.push_back(0.08);
      t.theta_ex_c.push_back(theta);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string schedule_to_csv(const ScheduleSolution& sol) {
  std::ostringstream os;
  os << kScheduleHeader << "\n";
  const size_t K = sol.u_charge_kw.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t k = 0; k < K; ++k) {
    const double soc = sol.soc.empty() ? nan : sol.soc[k + 1];
    const double temp = sol.temp_c.empty() ? nan : sol.temp_c[k + 1];
    os << k << ',' << fmt_g17(sol.u_charge_kw[k]) << ',' << fmt_g17(sol.u_discharge_kw[k]) << ','
       << fmt_g17(sol.u_nd_kw[k]) << ',' << fmt_g17(sol.u_tcl_kw[k]) << ','
       << fmt_g17(sol.grid_kw[k]) << ',' << fmt_g17(soc) << ',' << fmt_g17(temp) << "\n";
  }
  return os.str();
}

void save_schedule(const ScheduleSolution& sol, const std::string& path) {
  write_file(path, schedule_to_csv(sol));
}

ScheduleSolution parse_schedule_csv(const std::string& text, const HouseholdScenario& s) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw ParseError("schedule: empty file");
  if (trim(lines[0]) != kScheduleHeader)
    throw ParseError("schedule line 1: expected header '" + std::string(kScheduleHeader) + "'");
  std::vector<double> uc, ud, un, ut;
  int k = 0;
  for (size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const std::string where = "schedule line " + std::to_string(li + 1);
    const std::vector<std::string> cells = split_csv(lines[li]);
    if (cells.size() != 8) throw ParseError(where + ": expected 8 cells");
    if (parse_double(cells[0], where) != k) throw ParseError(where + ": k must be contiguous");
    uc.push_back(parse_double(cells[1], where));
    ud.push_back(parse_double(cells[2], where));
    un.push_back(parse_double(cells[3], where));
    ut.push_back(parse_double(cells[4], where));
    ++k;
  }
  return schedule_from_controls(s, std::move(uc), std::move(ud), std::move(un), std::move(ut));
}

ScheduleSolution load_schedule(const std::string& path, const HouseholdScenario& s) {
  return parse_schedule_csv(read_file(path), s);
}

std::string certificate_to_json(const CertificateReport& rep) {
  nlohmann::ordered_json j;
  j["passed"] = rep.passed;
  j["kkt_ok"] = rep.kkt_ok;
  j["has_battery"] = rep.has_battery;
  j["kkt"] = {{"stationarity", rep.kkt.stationarity},
              {"complementarity", rep.kkt.complementarity},
              {"primal_ineq", rep.kkt.primal_ineq},
              {"primal_eq", rep.kkt.primal_eq},
              {"dual_feasibility", rep.kkt.dual_feasibility}};
  if (rep.has_battery) {
    j["condition"] = {{"holds", rep.condition.holds},
                      {"margin", rep.condition.margin},
                      {"reg_witness", rep.condition.reg_witness}};
    j["eps_c"] = rep.eps_c;
    j["complementarity"] = {{"max_margin_kw", rep.complementarity.max_margin_kw},
                            {"non_simultaneous", rep.complementarity.non_simultaneous},
                            {"margins_kw", rep.complementarity.margins_kw}};
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const StationarityStep& st : rep.stationarity.steps) {
      steps.push_back({{"residual", st.residual},
                       {"delta", st.delta},
                       {"v_e", st.v_e},
                       {"at_kink", st.at_kink},
                       {"proof_margin", st.proof_margin}});
    }
    j["stationarity"] = {{"max_abs_residual", rep.stationarity.max_abs_residual},
                         {"steps", std::move(steps)}};
  }
  j["flags"] = rep.flags;
  return j.dump(2) + "\n";
}

std::string run_report_to_csv(const RunReport& report) {
  std::ostringstream os;
  os << "house_id,status,objective,bill,max_margin_kw,certified,iterations,wall_time_ms\n";
  for (const RunRow& r : report.rows) {
    os << r.house_id << ',' << r.status << ',' << fmt_g17(r.objective) << ',' << fmt_g17(r.bill)
       << ',' << fmt_g17(r.max_margin_kw) << ',' << bool_str(r.certified) << ',' << r.iterations
       << ',' << fmt_g17(r.wall_time_ms) << "\n";
  }
  return os.str();
}

RunReport run_batch(const std::vector<ProfileTable>& profiles, const ScenarioConfig& cfg,
                    const std::string& report_path, const BatchOptions& options) {
  std::vector<const ProfileTable*> order;
  order.reserve(profiles.size());
  for (const ProfileTable& p : profiles) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const ProfileTable* a, const ProfileTable* b) { return a->house_id < b->house_id; });

  RunReport report;
  for (const ProfileTable* profile : order) {
    RunRow row;
    row.house_id = profile->house_id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const HouseholdScenario scenario = make_scenario(cfg, *profile);
      const ValidationReport valid = validate_scenario(scenario);
      if (!valid.ok()) {
        row.status = "invalid";
        row.detail = valid.to_string();
      } else {
        const QuadraticProgram qp = build_qp(scenario);
        const QPResult res = solve(qp, options.solver);
        row.status = to_string(res.status);
        row.iterations = res.iterations;
        if (res.status == SolveStatus::Optimal) {
          const ScheduleSolution sol = extract_solution(qp, res.primal, scenario);
          const CertificateReport cert = certify(scenario, sol, qp, res, options.certify);
          row.objective = sol.objective;
          row.bill = sol.bill;
          row.certified = cert.passed;
          if (cert.has_battery) {
            row.max_margin_kw = cert.complementarity.max_margin_kw;
            row.condition_holds = cert.condition.holds;
            report.max_margin_kw = std::max(report.max_margin_kw, row.max_margin_kw);
          }
          if (row.condition_holds && !cert.passed) report.all_certified_under_condition = false;
          if (!options.schedules_dir.empty()) {
            save_schedule(sol, (fs::path(options.schedules_dir) /
                                (profile->house_id + "_schedule.csv"))
                                   .string());
          }
        } else {
          row.detail = res.note;
        }
      }
    } catch (const std::exception& e) {
      row.status = "error";
      row.detail = e.what();
    }
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report.rows.push_back(std::move(row));
  }
  if (!report_path.empty()) write_file(report_path, run_report_to_csv(report));
  return report;
}

std::string sweep_report_to_csv(const SweepReport& report) {
  std::ostringstream os;
  os << "eta_ch,eta_dch,product,theorem_holds,max_margin_kw,status,objective\n";
  for (const SweepRow& r : report.rows) {
    os << fmt_g17(r.eta_charge) << ',' << fmt_g17(r.eta_discharge) << ',' << fmt_g17(r.product)
       << ',' << bool_str(r.theorem_holds) << ',' << fmt_g17(r.max_margin_kw) << ',' << r.status
       << ',' << fmt_g17(r.objective) << "\n";
  }
  return os.str();
}

SweepReport sweep_condition(const HouseholdScenario& base,
                            const std::vector<std::pair<double, double>>& eta_grid,
                            const std::string& out_path, const BatchOptions& options) {
  if (!base.battery) throw std::invalid_argument("sweep_condition: scenario has no battery");
  if (eta_grid.empty()) throw std::invalid_argument("sweep_condition: empty grid");

  SweepReport report;
  for (const auto& [eta_ch, eta_dch] : eta_grid) {
    SweepRow row;
    row.eta_charge = eta_ch;
    row.eta_discharge = eta_dch;
    row.product = eta_ch * eta_dch;
    row.theorem_holds = row.product < 1.0;

    HouseholdScenario s = base;
    s.battery->eta_charge = eta_ch;
    s.battery->eta_discharge = eta_dch;
    const ValidationReport valid = validate_scenario(s);
    if (!valid.ok()) {
      row.status = "invalid";
      if (row.theorem_holds) report.all_ok = false;
      report.rows.push_back(std::move(row));
      continue;
    }
    const QuadraticProgram qp = build_qp(s);
    const QPResult res = solve(qp, options.solver);
    row.status = to_string(res.status);
    if (res.status == SolveStatus::Optimal) {
      const ScheduleSolution sol = extract_solution(qp, res.primal, s);
      const CertificateReport cert = certify(s, sol, qp, res, options.certify);
      row.max_margin_kw = cert.complementarity.max_margin_kw;
      row.objective = sol.objective;
      if (row.theorem_holds && !cert.complementarity.non_simultaneous) report.all_ok = false;
    } else if (row.theorem_holds) {
      report.all_ok = false;  // cannot demonstrate the guarantee for this row
    }
    report.rows.push_back(std::move(row));
  }
  if (!out_path.empty()) write_file(out_path, sweep_report_to_csv(report));
  return report;
}

std::vector<ProfileTable> convert_ausgrid(const std::string& in_path,
                                          const AusgridOptions& options) {
  const std::vector<std::string> lines = split_lines(read_file(in_path));
  if (lines.empty()) throw ParseError(in_path + ": empty file");
  const std::vector<std::string> header = split_csv(lines[0]);

  int col_customer = -1, col_category = -1, col_date = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    if (name == "Customer") col_customer = static_cast<int>(i);
    if (name == "Consumption Category") col_category = static_cast<int>(i);
    if (name == "date") col_date = static_cast<int>(i);
  }
  if (col_customer < 0 || col_category < 0 || col_date < 0)
    throw ParseError(in_path + ": expected columns Customer, Consumption Category, date");
  const int first_time_col = col_date + 1;
  if (static_cast<int>(header.size()) < first_time_col + 48)
    throw ParseError(in_path + ": expected 48 half-hourly columns after 'date'");

  std::string date = options.date;
  struct HalfHour {
    std::array<double, 48> load{};
    std::array<double, 48> gen{};
  };
  std::map<std::string, HalfHour> houses;

  for (size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const std::string where = in_path + " line " + std::to_string(li + 1);
    const std::vector<std::string> cells = split_csv(lines[li]);
    if (static_cast<int>(cells.size()) < first_time_col + 48)
      throw ParseError(where + ": short row");
    const std::string row_date = trim(cells[col_date]);
    if (date.empty()) date = row_date;
    if (row_date != date) continue;
    const std::string customer = trim(cells[col_customer]);
    const std::string category = trim(cells[col_category]);
    HalfHour& hh = houses[customer];
    for (int c = 0; c < 48; ++c) {
      const double kwh = parse_double(cells[first_time_col + c], where);
      if (category == "GG")
        hh.gen[c] += kwh;
      else if (category == "GC" || category == "CL")
        hh.load[c] += kwh;
      // other categories ignored
    }
  }
  if (houses.empty()) throw ParseError(in_path + ": no rows matched date '" + date + "'");

  std::vector<ProfileTable> out;
  for (const auto& [customer, hh] : houses) {
    ProfileTable t;
    t.house_id = "house_" + customer;
    for (int k = 0; k < 24; ++k) {
      const double hour = k + 0.5;
      // kWh over the hour equals mean kW over the hour
      t.d_kw.push_back(hh.load[2 * k] + hh.load[2 * k + 1]);
      t.r_kw.push_back(hh.gen[2 * k] + hh.gen[2 * k + 1]);
      t.p_buy.push_back(tou_buy_price(hour, options.price_offpeak, options.price_shoulder,
                                      options.price_peak));
      t.p_sell.push_back(options.price_sell);
      t.theta_ex_c.push_back(options.theta_mean_c +
                             options.theta_amp_c * std::sin(2.0 * M_PI * (hour - 9.0) / 24.0));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace homesched
