#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "homesched/model.hpp"

namespace homesched::testing {

// Thin wrapper so draws do not depend on libstdc++ distribution internals.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
};

struct ScenarioGenOptions {
  int k_min = 4;
  int k_max = 24;
  double eta_product_min = 0.5;
  double eta_product_max = 0.99;
  double reg_max = 0.1;
  double p_tcl = 0.4;
  double p_nd = 0.4;
  double p_self_discharge = 0.3;
  bool vary_dt = true;
};

// Random scenario that is feasible by construction: the battery can always
// counteract its self-discharge, the external temperature never drops below
// the comfort floor (cooling-only plant), and the TCL rating covers the
// hottest step with headroom.
inline HouseholdScenario random_scenario(Rng& rng, const ScenarioGenOptions& opt = {}) {
  HouseholdScenario s;
  const int K = rng.uniform_int(opt.k_min, opt.k_max);
  const double dt = opt.vary_dt ? (rng.coin(0.25) ? 0.5 : 1.0) : 1.0;
  s.horizon = {K, dt};

  s.tariff.buy.resize(K);
  s.tariff.sell.resize(K);
  s.critical_kw.resize(K);
  s.renewable_kw.resize(K);
  for (int k = 0; k < K; ++k) {
    const double p = rng.uniform(0.2, 0.7);
    s.tariff.buy[k] = p;
    s.tariff.sell[k] = rng.coin(0.1) ? p : p * rng.uniform(0.2, 0.95);
    s.critical_kw[k] = rng.uniform(0.0, 3.0);
    s.renewable_kw[k] = rng.coin(0.6) ? rng.uniform(0.0, 4.0) : 0.0;
  }

  BatteryParams b;
  const double product = rng.uniform(opt.eta_product_min, opt.eta_product_max);
  b.eta_charge = rng.uniform(std::max(product, 0.6), 1.0);
  b.eta_discharge = product / b.eta_charge;
  b.max_charge_kw = rng.uniform(1.0, 4.0);
  b.max_discharge_kw = rng.uniform(1.0, 4.0);
  b.capacity_kwh = rng.uniform(5.0, 15.0);
  b.soc_min = rng.uniform(0.0, 0.3);
  b.soc_max = rng.uniform(0.7, 1.0);
  b.soc_init = rng.uniform(b.soc_min + 0.1 * (b.soc_max - b.soc_min),
                           b.soc_max - 0.1 * (b.soc_max - b.soc_min));
  b.self_discharge_kw =
      rng.coin(opt.p_self_discharge) ? rng.uniform(0.0, 0.5 * b.eta_charge * b.max_charge_kw) : 0.0;
  s.battery = b;

  auto reg_draw = [&] { return rng.coin() ? rng.uniform(0.0, opt.reg_max) : 0.0; };
  s.reg.charge_quad = reg_draw();
  s.reg.charge_lin = reg_draw();
  s.reg.discharge_quad = reg_draw();
  s.reg.discharge_lin = reg_draw();
  s.reg.nd_quad = reg_draw();
  s.reg.nd_lin = reg_draw();
  s.reg.tcl_quad = reg_draw();
  s.reg.tcl_lin = reg_draw();

  if (rng.coin(opt.p_tcl)) {
    TclParams t;
    t.thermal_resistance = rng.uniform(1.5, 3.0);
    t.thermal_capacitance = rng.uniform(8.0, 12.0);
    t.cop = rng.uniform(2.5, 3.5);
    t.setpoint_c = rng.uniform(22.0, 25.0);
    t.dead_band_c = rng.uniform(1.5, 3.0);
    t.theta_init_c = t.setpoint_c + rng.uniform(-0.5, 0.5) * t.dead_band_c;
    t.external_temp_c.resize(K);
    double hottest = t.comfort_min_c();
    for (int k = 0; k < K; ++k) {
      t.external_temp_c[k] = t.comfort_min_c() + rng.uniform(0.0, 14.0);
      hottest = std::max(hottest, t.external_temp_c[k]);
    }
    // Rating that can hold the band at the hottest step, with headroom.
    const double needed = t.leak() * std::max(hottest - t.comfort_max_c(), 0.0) / t.gain();
    t.max_power_kw = 1.5 * needed + 0.2;
    s.tcl = t;
  }

  if (rng.coin(opt.p_nd)) {
    NonDynLoadParams d;
    d.min_power_kw = rng.uniform(0.0, 0.3);
    d.max_power_kw = d.min_power_kw + rng.uniform(0.2, 1.5);
    const double frac = rng.uniform(0.1, 0.9);
    d.total = K * (d.min_power_kw + frac * (d.max_power_kw - d.min_power_kw));
    s.nd_load = d;
  }

  return s;
}

}  // namespace homesched::testing
