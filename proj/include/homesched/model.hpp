#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace homesched {

// Discrete day-ahead horizon: `steps` intervals of `dt_hours` each.
struct Horizon {
  int steps = 24;
  double dt_hours = 1.0;
};

// Time-of-use tariff in currency/kWh. The purchase price must dominate the
// feed-in price and both must stay strictly positive at every step.
struct Tariff {
  std::vector<double> buy;
  std::vector<double> sell;
};

// Energy-reservoir battery. State of charge is normalized to [0, 1].
struct BatteryParams {
  double max_charge_kw = 3.0;
  double max_discharge_kw = 3.0;
  double eta_charge = 0.95;
  double eta_discharge = 0.95;
  double self_discharge_kw = 0.0;
  double capacity_kwh = 10.0;
  double soc_init = 0.5;
  double soc_min = 0.1;
  double soc_max = 0.9;
};

// First-order thermal model of a cooling load (air conditioner).
// One step: theta' = decay(dt)*theta + dt*(leak()*theta_ex - gain()*u).
struct TclParams {
  double thermal_capacitance = 10.0;  // kWh/degC
  double thermal_resistance = 2.0;    // degC/kW
  double cop = 3.0;
  double setpoint_c = 24.0;
  double dead_band_c = 2.0;
  double theta_init_c = 24.0;
  double max_power_kw = 2.0;
  std::vector<double> external_temp_c;  // one entry per step

  double leak() const { return 1.0 / (thermal_resistance * thermal_capacitance); }
  double decay(double dt_hours) const { return 1.0 - leak() * dt_hours; }
  double gain() const { return cop / thermal_capacitance; }
  double comfort_min_c() const { return setpoint_c - dead_band_c; }
  double comfort_max_c() const { return setpoint_c + dead_band_c; }
};

// Deferrable appliance: per-step power is box-constrained and the sum of the
// per-step powers over the horizon is fixed.
struct NonDynLoadParams {
  double min_power_kw = 0.0;
  double max_power_kw = 0.0;
  double total = 0.0;  // required sum of u_nd over all steps [kW * steps]
};

// Quadratic/linear usage penalties per control channel; all nonnegative so
// the program stays convex.
struct RegularizationParams {
  double charge_quad = 0.0;
  double charge_lin = 0.0;
  double discharge_quad = 0.0;
  double discharge_lin = 0.0;
  double nd_quad = 0.0;
  double nd_lin = 0.0;
  double tcl_quad = 0.0;
  double tcl_lin = 0.0;
};

// Everything needed to schedule one house over one horizon. Absent optional
// components contribute nothing to the grid exchange.
struct HouseholdScenario {
  Horizon horizon;
  Tariff tariff;
  std::optional<BatteryParams> battery;
  std::optional<TclParams> tcl;
  std::optional<NonDynLoadParams> nd_load;
  RegularizationParams reg;
  std::vector<double> critical_kw;   // fixed demand d_k >= 0
  std::vector<double> renewable_kw;  // on-site generation r_k >= 0
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Checks every standing assumption on the scenario data. Violations are
// returned, never thrown; a passing scenario is accepted by build_qp.
ValidationReport validate_scenario(const HouseholdScenario& s);

// Thrown by operations that require a valid scenario and got violations.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(ValidationReport r);
  ValidationReport report;
};

struct ConditionReport {
  bool holds = false;
  double margin = 0.0;       // 1 - eta_charge*eta_discharge
  double reg_witness = 0.0;  // charge_lin + eta_charge*eta_discharge*discharge_lin
};

// Evaluates the efficiency-product test that guarantees the relaxed optimum
// never charges and discharges in the same step. The report also carries the
// linear-regularization witness, an empirical probe only: guarantees asserted
// elsewhere rely solely on `holds`. Throws std::invalid_argument when the
// scenario has no battery.
ConditionReport theorem_condition(const HouseholdScenario& s);

// One step of the battery state of charge. Pure; controls in kW.
double step_soc(double soc, double u_charge_kw, double u_discharge_kw,
                const BatteryParams& b, double dt_hours);

// One step of the indoor temperature under cooling power u_tcl_kw.
double step_temperature(double theta_c, double u_tcl_kw, double external_temp_c,
                        const TclParams& t, double dt_hours);

}  // namespace homesched
