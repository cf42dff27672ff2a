#pragma once

#include <string>
#include <vector>

#include "homesched/model.hpp"
#include "homesched/program_builder.hpp"
#include "homesched/qp_solver.hpp"

namespace homesched {

// Tolerance for treating a charge/discharge pair as non-simultaneous,
// scaled to the battery's power ratings.
double default_eps_c(const BatteryParams& b);

struct ComplementarityReport {
  std::vector<double> margins_kw;  // min(u_ch_k, u_dch_k)
  double max_margin_kw = 0.0;
  double eps_c = 0.0;
  bool non_simultaneous = false;
};

// Per-step overlap of charging and discharging. Throws std::invalid_argument
// when the scenario has no battery (callers gate on presence).
ComplementarityReport check_complementarity(const ScheduleSolution& sol, double eps_c);

// Subgradient set of the two-price bill with respect to the grid exchange:
// {buy} when g > 0, {sell} when g < 0, the whole [sell, buy] segment at g = 0.
struct PriceInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool is_point() const { return lo == hi; }
};

PriceInterval bill_subgradient_interval(double g_kw, double price_buy, double price_sell,
                                        double g_tol = 0.0);

// Stationarity identity for the battery pair at one step, after eliminating
// the shared state-of-charge multipliers:
//   dt*[v_e*(1 - eta_ch*eta_dch) + v_r_ch + eta_ch*eta_dch*v_r_dch]
//     + (lam_ch_hi - lam_ch_lo) + eta_ch*eta_dch*(lam_dch_hi - lam_dch_lo) = 0
// with v_e the bill subgradient at the step's grid exchange. Where the bill
// is kinked (g = 0) the reported delta picks the subgradient that minimizes
// the residual, clipped to [0, 1].
struct StationarityStep {
  double residual = 0.0;
  double delta = 0.0;      // reported witness, always in [0, 1]
  double delta_raw = 0.0;  // unclipped minimizer (diagnostic)
  double v_e = 0.0;        // price subgradient actually used
  bool at_kink = false;    // |g| <= g_zero_tol
  double proof_margin = 0.0;  // strictly-positive part with lower-bound duals dropped
};

struct StationarityReport {
  std::vector<StationarityStep> steps;
  double max_abs_residual = 0.0;
};

// Requires an Optimal result for the QP built from the same scenario; throws
// std::invalid_argument otherwise (missing battery, missing duals).
StationarityReport battery_stationarity_residual(const HouseholdScenario& s,
                                                 const ScheduleSolution& sol,
                                                 const QuadraticProgram& qp, const QPResult& res,
                                                 double g_zero_tol = 1e-9);

struct CertifyOptions {
  double eps_c = -1.0;  // < 0 means derive from the battery ratings
  double tol_stationarity = 1e-6;
  double tol_comp_slack = 1e-7;
  double tol_primal = 1e-8;
  double tol_dual_feas = 1e-10;
  double tol_battery_stationarity = 1e-6;
  double g_zero_tol = 1e-9;
};

struct CertificateReport {
  bool has_battery = false;
  ConditionReport condition;  // meaningful only when has_battery
  ComplementarityReport complementarity;
  StationarityReport stationarity;
  ResidualReport kkt;
  bool kkt_ok = false;
  bool passed = false;
  double eps_c = 0.0;
  // Steps where both controls exceed eps_c; each entry explains what broke
  // (solver tolerance vs a violated precondition). Never silently empty when
  // an overlap exists.
  std::vector<std::string> flags;
};

// Full certificate for a solved instance: recomputed KKT residuals, the
// complementarity margins, the per-step battery stationarity identity and
// the condition report. passed == (KKT-grade residuals within tolerance) and
// (condition holds implies non-simultaneous). Refuses non-Optimal results by
// throwing std::invalid_argument.
CertificateReport certify(const HouseholdScenario& s, const ScheduleSolution& sol,
                          const QuadraticProgram& qp, const QPResult& res,
                          const CertifyOptions& opts = {});

}  // namespace homesched
