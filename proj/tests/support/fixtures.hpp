#pragma once

#include "homesched/model.hpp"

namespace homesched::testing {

// Battery-only house with a flat two-price tariff; the workhorse fixture.
inline HouseholdScenario battery_house(int K = 2, double dt = 1.0) {
  HouseholdScenario s;
  s.horizon = {K, dt};
  s.tariff.buy.assign(K, 0.5);
  s.tariff.sell.assign(K, 0.2);
  BatteryParams b;
  b.max_charge_kw = 3.0;
  b.max_discharge_kw = 3.0;
  b.eta_charge = 0.9;
  b.eta_discharge = 0.9;
  b.self_discharge_kw = 0.0;
  b.capacity_kwh = 10.0;
  b.soc_init = 0.5;
  b.soc_min = 0.1;
  b.soc_max = 0.9;
  s.battery = b;
  s.critical_kw.assign(K, 0.0);
  s.renewable_kw.assign(K, 0.0);
  return s;
}

// Adds a price spread over time so the optimum actually moves energy around.
inline HouseholdScenario arbitrage_house(int K = 6, double dt = 1.0) {
  HouseholdScenario s = battery_house(K, dt);
  for (int k = 0; k < K; ++k) {
    const bool late = k >= K / 2;
    s.tariff.buy[k] = late ? 0.6 : 0.15;
    s.tariff.sell[k] = late ? 0.4 : 0.05;
    s.critical_kw[k] = late ? 1.0 : 0.2;
  }
  return s;
}

}  // namespace homesched::testing
