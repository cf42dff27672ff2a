#include "homesched/program_builder.hpp"

#include <cmath>
#include <stdexcept>

namespace homesched {

const char* to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Charge: return "u_ch";
    case VarKind::Discharge: return "u_dch";
    case VarKind::NdLoad: return "u_nd";
    case VarKind::Tcl: return "u_tcl";
    case VarKind::Epigraph: return "t";
  }
  return "?";
}

const char* to_string(RowKind kind) {
  switch (kind) {
    case RowKind::ChargeLo: return "ch_lo";
    case RowKind::ChargeHi: return "ch_hi";
    case RowKind::DischargeLo: return "dch_lo";
    case RowKind::DischargeHi: return "dch_hi";
    case RowKind::NdLo: return "nd_lo";
    case RowKind::NdHi: return "nd_hi";
    case RowKind::TclLo: return "tcl_lo";
    case RowKind::TclHi: return "tcl_hi";
    case RowKind::SocLo: return "soc_lo";
    case RowKind::SocHi: return "soc_hi";
    case RowKind::TempLo: return "temp_lo";
    case RowKind::TempHi: return "temp_hi";
    case RowKind::EpiBuy: return "epi_buy";
    case RowKind::EpiSell: return "epi_sell";
  }
  return "?";
}

VariableIndex::VariableIndex(const HouseholdScenario& s) {
  steps_ = s.horizon.steps;
  int next = 0;
  auto place = [&](VarKind kind, bool present) {
    if (present) {
      offset_[static_cast<int>(kind)] = next;
      next += steps_;
    }
  };
  place(VarKind::Charge, s.battery.has_value());
  place(VarKind::Discharge, s.battery.has_value());
  place(VarKind::NdLoad, s.nd_load.has_value());
  place(VarKind::Tcl, s.tcl.has_value());
  place(VarKind::Epigraph, true);
  count_ = next;
}

int VariableIndex::at(int k, VarKind kind) const {
  const int off = offset_[static_cast<int>(kind)];
  if (off < 0) throw std::out_of_range(std::string("variable kind absent: ") + to_string(kind));
  if (k < 0 || k >= steps_) throw std::out_of_range("step out of range");
  return off + k;
}

std::pair<int, VarKind> VariableIndex::decode(int column) const {
  if (column < 0 || column >= count_) throw std::out_of_range("column out of range");
  for (int i = 0; i < kVarKindCount; ++i) {
    if (offset_[i] >= 0 && column >= offset_[i] && column < offset_[i] + steps_) {
      return {column - offset_[i], static_cast<VarKind>(i)};
    }
  }
  throw std::out_of_range("column not mapped");  // unreachable for a consistent index
}

double QuadraticProgram::objective(const Eigen::VectorXd& x) const {
  return 0.5 * x.cwiseProduct(q_diag).dot(x) + c.dot(x);
}

int QuadraticProgram::row_of(RowKind kind, int k) const {
  for (size_t i = 0; i < row_tags.size(); ++i) {
    if (row_tags[i].kind == kind && row_tags[i].k == k) return static_cast<int>(i);
  }
  return -1;
}

QuadraticProgram build_qp(const HouseholdScenario& s) {
  ValidationReport rep = validate_scenario(s);
  if (!rep.ok()) throw ScenarioError(std::move(rep));

  const int K = s.horizon.steps;
  const double dt = s.horizon.dt_hours;

  QuadraticProgram qp;
  qp.index = VariableIndex(s);
  const int n = qp.index.count();

  int rows_per_step = 2;  // the two epigraph rows
  if (s.battery) rows_per_step += 6;
  if (s.nd_load) rows_per_step += 2;
  if (s.tcl) rows_per_step += 4;
  const int m = rows_per_step * K;

  qp.q_diag = Eigen::VectorXd::Zero(n);
  qp.c = Eigen::VectorXd::Zero(n);
  qp.a_ineq = Eigen::MatrixXd::Zero(m, n);
  qp.b_ineq = Eigen::VectorXd::Zero(m);
  qp.row_tags.reserve(m);

  int r = 0;
  auto add_row = [&](RowKind kind, int k) -> int {
    qp.row_tags.push_back({kind, k});
    return r++;
  };

  for (int k = 0; k < K; ++k) {
    if (s.battery) {
      const BatteryParams& b = *s.battery;
      const int ich = qp.index.at(k, VarKind::Charge);
      const int idch = qp.index.at(k, VarKind::Discharge);
      int row = add_row(RowKind::ChargeLo, k);
      qp.a_ineq(row, ich) = -1.0;
      row = add_row(RowKind::ChargeHi, k);
      qp.a_ineq(row, ich) = 1.0;
      qp.b_ineq(row) = b.max_charge_kw;
      row = add_row(RowKind::DischargeLo, k);
      qp.a_ineq(row, idch) = -1.0;
      row = add_row(RowKind::DischargeHi, k);
      qp.a_ineq(row, idch) = 1.0;
      qp.b_ineq(row) = b.max_discharge_kw;
    }
    if (s.nd_load) {
      const NonDynLoadParams& d = *s.nd_load;
      const int ind = qp.index.at(k, VarKind::NdLoad);
      int row = add_row(RowKind::NdLo, k);
      qp.a_ineq(row, ind) = -1.0;
      qp.b_ineq(row) = -d.min_power_kw;
      row = add_row(RowKind::NdHi, k);
      qp.a_ineq(row, ind) = 1.0;
      qp.b_ineq(row) = d.max_power_kw;
    }
    if (s.tcl) {
      const TclParams& t = *s.tcl;
      const int itcl = qp.index.at(k, VarKind::Tcl);
      int row = add_row(RowKind::TclLo, k);
      qp.a_ineq(row, itcl) = -1.0;
      row = add_row(RowKind::TclHi, k);
      qp.a_ineq(row, itcl) = 1.0;
      qp.b_ineq(row) = t.max_power_kw;
    }
    if (s.battery) {
      // Bounds on the forward-rolled state of charge after step k:
      //   x_{k+1} = soc_init - (k+1)*dt*u_sd/E
      //             + sum_{j<=k} (dt*eta_ch/E) u_ch_j - (dt/(eta_dch*E)) u_dch_j
      const BatteryParams& b = *s.battery;
      const double coef_ch = dt * b.eta_charge / b.capacity_kwh;
      const double coef_dch = dt / (b.eta_discharge * b.capacity_kwh);
      const double base = b.soc_init - (k + 1) * dt * b.self_discharge_kw / b.capacity_kwh;
      int row = add_row(RowKind::SocLo, k);
      for (int j = 0; j <= k; ++j) {
        qp.a_ineq(row, qp.index.at(j, VarKind::Charge)) = -coef_ch;
        qp.a_ineq(row, qp.index.at(j, VarKind::Discharge)) = coef_dch;
      }
      qp.b_ineq(row) = base - b.soc_min;
      row = add_row(RowKind::SocHi, k);
      for (int j = 0; j <= k; ++j) {
        qp.a_ineq(row, qp.index.at(j, VarKind::Charge)) = coef_ch;
        qp.a_ineq(row, qp.index.at(j, VarKind::Discharge)) = -coef_dch;
      }
      qp.b_ineq(row) = b.soc_max - base;
    }
    if (s.tcl) {
      // Same idea for the rolled temperature:
      //   theta_{k+1} = decay^{k+1} theta0
      //                 + sum_{j<=k} decay^{k-j} dt (leak*theta_ex_j - gain*u_j)
      const TclParams& t = *s.tcl;
      const double decay = t.decay(dt);
      double freeresp = std::pow(decay, k + 1) * t.theta_init_c;
      for (int j = 0; j <= k; ++j)
        freeresp += std::pow(decay, k - j) * dt * t.leak() * t.external_temp_c[j];
      int row = add_row(RowKind::TempLo, k);
      for (int j = 0; j <= k; ++j)
        qp.a_ineq(row, qp.index.at(j, VarKind::Tcl)) = std::pow(decay, k - j) * dt * t.gain();
      qp.b_ineq(row) = freeresp - t.comfort_min_c();
      row = add_row(RowKind::TempHi, k);
      for (int j = 0; j <= k; ++j)
        qp.a_ineq(row, qp.index.at(j, VarKind::Tcl)) = -std::pow(decay, k - j) * dt * t.gain();
      qp.b_ineq(row) = t.comfort_max_c() - freeresp;
    }
    // Epigraph rows: t_k >= price * dt * g_k for both prices, with the
    // constant part of g_k folded into the right-hand side.
    const double g_const = s.critical_kw[k] - s.renewable_kw[k];
    const int it = qp.index.at(k, VarKind::Epigraph);
    const double prices[2] = {s.tariff.buy[k], s.tariff.sell[k]};
    const RowKind kinds[2] = {RowKind::EpiBuy, RowKind::EpiSell};
    for (int branch = 0; branch < 2; ++branch) {
      const double price = prices[branch];
      const int row = add_row(kinds[branch], k);
      if (s.battery) {
        qp.a_ineq(row, qp.index.at(k, VarKind::Charge)) = price * dt;
        qp.a_ineq(row, qp.index.at(k, VarKind::Discharge)) = -price * dt;
      }
      if (s.nd_load) qp.a_ineq(row, qp.index.at(k, VarKind::NdLoad)) = price * dt;
      if (s.tcl) qp.a_ineq(row, qp.index.at(k, VarKind::Tcl)) = price * dt;
      qp.a_ineq(row, it) = -1.0;
      qp.b_ineq(row) = -price * dt * g_const;
    }

    // Objective: unit weight on each epigraph variable, dt-scaled
    // regularization on the controls.
    qp.c(it) = 1.0;
    if (s.battery) {
      qp.q_diag(qp.index.at(k, VarKind::Charge)) = 2.0 * dt * s.reg.charge_quad;
      qp.c(qp.index.at(k, VarKind::Charge)) = dt * s.reg.charge_lin;
      qp.q_diag(qp.index.at(k, VarKind::Discharge)) = 2.0 * dt * s.reg.discharge_quad;
      qp.c(qp.index.at(k, VarKind::Discharge)) = dt * s.reg.discharge_lin;
    }
    if (s.nd_load) {
      qp.q_diag(qp.index.at(k, VarKind::NdLoad)) = 2.0 * dt * s.reg.nd_quad;
      qp.c(qp.index.at(k, VarKind::NdLoad)) = dt * s.reg.nd_lin;
    }
    if (s.tcl) {
      qp.q_diag(qp.index.at(k, VarKind::Tcl)) = 2.0 * dt * s.reg.tcl_quad;
      qp.c(qp.index.at(k, VarKind::Tcl)) = dt * s.reg.tcl_lin;
    }
  }

  if (s.nd_load) {
    qp.a_eq = Eigen::MatrixXd::Zero(1, n);
    qp.b_eq = Eigen::VectorXd::Zero(1);
    for (int k = 0; k < K; ++k) qp.a_eq(0, qp.index.at(k, VarKind::NdLoad)) = 1.0;
    qp.b_eq(0) = s.nd_load->total;
    qp.notes.push_back("nd_hi rows cap u_nd by nd_load.max_power_kw");
    qp.notes.push_back("equality row fixes sum_k u_nd_k to nd_load.total");
  } else {
    qp.a_eq = Eigen::MatrixXd::Zero(0, n);
    qp.b_eq = Eigen::VectorXd::Zero(0);
  }

  return qp;
}

ScheduleSolution schedule_from_controls(const HouseholdScenario& s,
                                        std::vector<double> u_charge_kw,
                                        std::vector<double> u_discharge_kw,
                                        std::vector<double> u_nd_kw,
                                        std::vector<double> u_tcl_kw) {
  const int K = s.horizon.steps;
  const double dt = s.horizon.dt_hours;
  const size_t n = static_cast<size_t>(K);
  auto fit = [&](std::vector<double>& v, const char* name) {
    if (v.empty()) v.assign(n, 0.0);
    if (v.size() != n)
      throw std::invalid_argument(std::string("schedule_from_controls: bad length for ") + name);
  };
  fit(u_charge_kw, "u_charge_kw");
  fit(u_discharge_kw, "u_discharge_kw");
  fit(u_nd_kw, "u_nd_kw");
  fit(u_tcl_kw, "u_tcl_kw");

  ScheduleSolution sol;
  sol.u_charge_kw = std::move(u_charge_kw);
  sol.u_discharge_kw = std::move(u_discharge_kw);
  sol.u_nd_kw = std::move(u_nd_kw);
  sol.u_tcl_kw = std::move(u_tcl_kw);
  sol.grid_kw.assign(n, 0.0);
  for (int k = 0; k < K; ++k) {
    sol.grid_kw[k] = sol.u_charge_kw[k] - sol.u_discharge_kw[k] + sol.u_nd_kw[k] +
                     sol.u_tcl_kw[k] + s.critical_kw[k] - s.renewable_kw[k];
  }

  if (s.battery) {
    sol.soc.assign(n + 1, 0.0);
    sol.soc[0] = s.battery->soc_init;
    for (int k = 0; k < K; ++k)
      sol.soc[k + 1] =
          step_soc(sol.soc[k], sol.u_charge_kw[k], sol.u_discharge_kw[k], *s.battery, dt);
  }
  if (s.tcl) {
    sol.temp_c.assign(n + 1, 0.0);
    sol.temp_c[0] = s.tcl->theta_init_c;
    for (int k = 0; k < K; ++k)
      sol.temp_c[k + 1] =
          step_temperature(sol.temp_c[k], sol.u_tcl_kw[k], s.tcl->external_temp_c[k], *s.tcl, dt);
  }

  for (int k = 0; k < K; ++k) {
    const double energy = dt * sol.grid_kw[k];
    sol.bill += std::max(s.tariff.buy[k] * energy, s.tariff.sell[k] * energy);
    const double uc = sol.u_charge_kw[k], ud = sol.u_discharge_kw[k];
    const double un = sol.u_nd_kw[k], ut = sol.u_tcl_kw[k];
    sol.reg_cost += dt * (s.reg.charge_quad * uc * uc + s.reg.charge_lin * uc +
                          s.reg.discharge_quad * ud * ud + s.reg.discharge_lin * ud +
                          s.reg.nd_quad * un * un + s.reg.nd_lin * un +
                          s.reg.tcl_quad * ut * ut + s.reg.tcl_lin * ut);
  }
  sol.objective = sol.bill + sol.reg_cost;
  return sol;
}

ScheduleSolution extract_solution(const QuadraticProgram& qp, const Eigen::VectorXd& primal,
                                  const HouseholdScenario& s) {
  if (primal.size() != qp.cols())
    throw std::invalid_argument("extract_solution: primal length mismatch");
  const int K = s.horizon.steps;
  const size_t n = static_cast<size_t>(K);
  std::vector<double> uc(n, 0.0), ud(n, 0.0), un(n, 0.0), ut(n, 0.0);
  for (int k = 0; k < K; ++k) {
    if (qp.index.has(VarKind::Charge)) uc[k] = primal(qp.index.at(k, VarKind::Charge));
    if (qp.index.has(VarKind::Discharge)) ud[k] = primal(qp.index.at(k, VarKind::Discharge));
    if (qp.index.has(VarKind::NdLoad)) un[k] = primal(qp.index.at(k, VarKind::NdLoad));
    if (qp.index.has(VarKind::Tcl)) ut[k] = primal(qp.index.at(k, VarKind::Tcl));
  }
  return schedule_from_controls(s, std::move(uc), std::move(ud), std::move(un), std::move(ut));
}

double objective_value(const HouseholdScenario& s, const ScheduleSolution& sol) {
  const int K = s.horizon.steps;
  const double dt = s.horizon.dt_hours;
  double bill = 0.0, reg = 0.0;
  for (int k = 0; k < K; ++k) {
    const double energy = dt * sol.grid_kw[k];
    bill += std::max(s.tariff.buy[k] * energy, s.tariff.sell[k] * energy);
    const double uc = sol.u_charge_kw[k], ud = sol.u_discharge_kw[k];
    const double un = sol.u_nd_kw[k], ut = sol.u_tcl_kw[k];
    reg += dt * (s.reg.charge_quad * uc * uc + s.reg.charge_lin * uc +
                 s.reg.discharge_quad * ud * ud + s.reg.discharge_lin * ud +
                 s.reg.nd_quad * un * un + s.reg.nd_lin * un + s.reg.tcl_quad * ut * ut +
                 s.reg.tcl_lin * ut);
  }
  return bill + reg;
}

}  // namespace homesched
