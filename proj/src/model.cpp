#include "homesched/model.hpp"

#include <cmath>
#include <sstream>

namespace homesched {

namespace {

bool finite(double v) { return std::isfinite(v); }

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (violations.empty()) return "ok";
  std::ostringstream os;
  for (size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

ScenarioError::ScenarioError(ValidationReport r)
    : std::runtime_error("invalid scenario: " + r.to_string()), report(std::move(r)) {}

ValidationReport validate_scenario(const HouseholdScenario& s) {
  ValidationReport rep;
  auto bad = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

  const int K = s.horizon.steps;
  if (K < 1) bad("horizon: steps must be >= 1");
  if (!finite(s.horizon.dt_hours) || s.horizon.dt_hours <= 0.0)
    bad("horizon: dt_hours must be positive and finite");
  if (K < 1) return rep;  // series checks below need a usable length
  const size_t n = static_cast<size_t>(K);

  if (s.tariff.buy.size() != n || s.tariff.sell.size() != n) {
    bad("tariff: series length != steps");
  } else if (!all_finite(s.tariff.buy) || !all_finite(s.tariff.sell)) {
    bad("tariff: non-finite price");
  } else {
    for (size_t k = 0; k < n; ++k) {
      if (s.tariff.sell[k] <= 0.0) {
        bad("tariff: sell price must be strictly positive");
        break;
      }
    }
    for (size_t k = 0; k < n; ++k) {
      if (s.tariff.buy[k] < s.tariff.sell[k]) {
        bad("tariff: buy price must be >= sell price");
        break;
      }
    }
  }

  if (s.critical_kw.size() != n) {
    bad("critical_kw: series length != steps");
  } else if (!all_finite(s.critical_kw)) {
    bad("critical_kw: non-finite entry");
  } else {
    for (double d : s.critical_kw) {
      if (d < 0.0) {
        bad("critical_kw: negative entry");
        break;
      }
    }
  }
  if (s.renewable_kw.size() != n) {
    bad("renewable_kw: series length != steps");
  } else if (!all_finite(s.renewable_kw)) {
    bad("renewable_kw: non-finite entry");
  } else {
    for (double r : s.renewable_kw) {
      if (r < 0.0) {
        bad("renewable_kw: negative entry");
        break;
      }
    }
  }

  if (s.battery) {
    const BatteryParams& b = *s.battery;
    if (!finite(b.max_charge_kw) || !finite(b.max_discharge_kw) || !finite(b.eta_charge) ||
        !finite(b.eta_discharge) || !finite(b.self_discharge_kw) || !finite(b.capacity_kwh) ||
        !finite(b.soc_init) || !finite(b.soc_min) || !finite(b.soc_max)) {
      bad("battery: non-finite parameter");
    } else {
      if (b.eta_charge <= 0.0 || b.eta_charge > 1.0) bad("battery: eta_charge must be in (0, 1]");
      if (b.eta_discharge <= 0.0 || b.eta_discharge > 1.0)
        bad("battery: eta_discharge must be in (0, 1]");
      if (b.max_charge_kw < 0.0) bad("battery: max_charge_kw must be >= 0");
      if (b.max_discharge_kw < 0.0) bad("battery: max_discharge_kw must be >= 0");
      if (b.self_discharge_kw < 0.0) bad("battery: self_discharge_kw must be >= 0");
      if (b.capacity_kwh <= 0.0) bad("battery: capacity_kwh must be > 0");
      if (!(b.soc_min >= 0.0 && b.soc_min < b.soc_max && b.soc_max <= 1.0))
        bad("battery: require 0 <= soc_min < soc_max <= 1");
      else if (b.soc_init < b.soc_min || b.soc_init > b.soc_max)
        bad("battery: soc_init outside [soc_min, soc_max]");
    }
  }

  if (s.tcl) {
    const TclParams& t = *s.tcl;
    if (!finite(t.thermal_capacitance) || !finite(t.thermal_resistance) || !finite(t.cop) ||
        !finite(t.setpoint_c) || !finite(t.dead_band_c) || !finite(t.theta_init_c) ||
        !finite(t.max_power_kw)) {
      bad("tcl: non-finite parameter");
    } else {
      if (t.thermal_capacitance <= 0.0) bad("tcl: thermal_capacitance must be > 0");
      if (t.thermal_resistance <= 0.0) bad("tcl: thermal_resistance must be > 0");
      if (t.cop <= 0.0) bad("tcl: cop must be > 0");
      if (t.dead_band_c <= 0.0) bad("tcl: dead_band_c must be > 0");
      if (t.max_power_kw < 0.0) bad("tcl: max_power_kw must be >= 0");
      if (t.thermal_capacitance > 0.0 && t.thermal_resistance > 0.0 && finite(s.horizon.dt_hours)) {
        const double decay = t.decay(s.horizon.dt_hours);
        // Reject step sizes that would make the discretization unstable.
        if (!(decay > 0.0 && decay < 1.0)) bad("tcl: decay factor must lie in (0, 1); reduce dt");
      }
      if (t.theta_init_c < t.comfort_min_c() || t.theta_init_c > t.comfort_max_c())
        bad("tcl: theta_init_c outside comfort band");
      if (t.external_temp_c.size() != n)
        bad("tcl: external_temp_c length != steps");
      else if (!all_finite(t.external_temp_c))
        bad("tcl: non-finite external temperature");
    }
  }

  if (s.nd_load) {
    const NonDynLoadParams& d = *s.nd_load;
    if (!finite(d.min_power_kw) || !finite(d.max_power_kw) || !finite(d.total)) {
      bad("nd_load: non-finite parameter");
    } else {
      if (!(d.min_power_kw >= 0.0 && d.min_power_kw <= d.max_power_kw))
        bad("nd_load: require 0 <= min_power_kw <= max_power_kw");
      else if (d.total < K * d.min_power_kw || d.total > K * d.max_power_kw)
        bad("nd_load: total outside [steps*min_power_kw, steps*max_power_kw]");
    }
  }

  const double reg_coeffs[] = {s.reg.charge_quad, s.reg.charge_lin,  s.reg.discharge_quad,
                               s.reg.discharge_lin, s.reg.nd_quad,   s.reg.nd_lin,
                               s.reg.tcl_quad,      s.reg.tcl_lin};
  for (double v : reg_coeffs) {
    if (!finite(v) || v < 0.0) {
      bad("reg: coefficients must be nonnegative and finite");
      break;
    }
  }

  return rep;
}

ConditionReport theorem_condition(const HouseholdScenario& s) {
  if (!s.battery) throw std::invalid_argument("theorem_condition: no battery");
  const BatteryParams& b = *s.battery;
  const double product = b.eta_charge * b.eta_discharge;
  ConditionReport rep;
  rep.margin = 1.0 - product;
  rep.holds = product < 1.0;
  rep.reg_witness = s.reg.charge_lin + product * s.reg.discharge_lin;
  return rep;
}

double step_soc(double soc, double u_charge_kw, double u_discharge_kw, const BatteryParams& b,
                double dt_hours) {
  return soc + dt_hours *
                   (b.eta_charge * u_charge_kw - u_discharge_kw / b.eta_discharge -
                    b.self_discharge_kw) /
                   b.capacity_kwh;
}

double step_temperature(double theta_c, double u_tcl_kw, double external_temp_c,
                        const TclParams& t, double dt_hours) {
  return t.decay(dt_hours) * theta_c +
         dt_hours * (t.leak() * external_temp_c - t.gain() * u_tcl_kw);
}

}  // namespace homesched
