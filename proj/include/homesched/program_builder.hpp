#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "homesched/model.hpp"

namespace homesched {

// Decision-variable kinds, one slot per step for each present kind.
enum class VarKind { Charge = 0, Discharge = 1, NdLoad = 2, Tcl = 3, Epigraph = 4 };

constexpr int kVarKindCount = 5;

const char* to_string(VarKind kind);

// Bijective map between (step, kind) pairs and column indices. Variables are
// laid out in contiguous blocks per kind, present kinds only, epigraph last.
class VariableIndex {
 public:
  VariableIndex() = default;
  explicit VariableIndex(const HouseholdScenario& s);

  int count() const { return count_; }
  int steps() const { return steps_; }
  bool has(VarKind kind) const { return offset_[static_cast<int>(kind)] >= 0; }

  // Column of variable `kind` at step `k`; throws std::out_of_range when the
  // kind is absent or k is outside the horizon.
  int at(int k, VarKind kind) const;

  // Inverse of at(); throws std::out_of_range on bad columns.
  std::pair<int, VarKind> decode(int column) const;

 private:
  int steps_ = 0;
  int count_ = 0;
  std::array<int, kVarKindCount> offset_{-1, -1, -1, -1, -1};
};

// Inequality-row identities. Lo rows are lower bounds written as
// (bound - expr) <= 0, Hi rows upper bounds written as (expr - bound) <= 0;
// their duals push the expression up respectively down. Epi rows pin the
// per-step cost variable above each branch of the tariff.
enum class RowKind {
  ChargeLo,
  ChargeHi,
  DischargeLo,
  DischargeHi,
  NdLo,
  NdHi,
  TclLo,
  TclHi,
  SocLo,
  SocHi,
  TempLo,
  TempHi,
  EpiBuy,
  EpiSell,
};

const char* to_string(RowKind kind);

struct RowTag {
  RowKind kind;
  int k;
};

// Convex QP in standard form:
//   minimize 0.5 x'Qx + c'x  s.t.  A x <= b,  E x = f
// with Q diagonal PSD. Rows carry their identity in row_tags.
struct QuadraticProgram {
  Eigen::VectorXd q_diag;  // diagonal of Q, elementwise >= 0
  Eigen::VectorXd c;
  Eigen::MatrixXd a_ineq;
  Eigen::VectorXd b_ineq;
  Eigen::MatrixXd a_eq;  // 0 or 1 rows
  Eigen::VectorXd b_eq;
  VariableIndex index;
  std::vector<RowTag> row_tags;
  std::vector<std::string> notes;  // builder reading of ambiguous inputs

  int cols() const { return static_cast<int>(c.size()); }
  int rows() const { return static_cast<int>(b_ineq.size()); }
  int eq_rows() const { return static_cast<int>(b_eq.size()); }

  double objective(const Eigen::VectorXd& x) const;

  // First matching row, -1 when absent.
  int row_of(RowKind kind, int k) const;
};

// Per-step schedule with reconstructed trajectories and cost breakdown.
// Control series always have length K (zero where the component is absent);
// soc/temp have length K+1 when the component is present, else empty.
struct ScheduleSolution {
  std::vector<double> u_charge_kw;
  std::vector<double> u_discharge_kw;
  std::vector<double> u_nd_kw;
  std::vector<double> u_tcl_kw;
  std::vector<double> grid_kw;  // net exchange g_k, >0 buys
  std::vector<double> soc;
  std::vector<double> temp_c;
  double bill = 0.0;
  double reg_cost = 0.0;
  double objective = 0.0;
};

// Assembles the scheduling problem as a QP over controls only: state bounds
// are written on the affine forward-rolled dynamics, and the nonsmooth
// two-price bill is replaced by one epigraph variable per step, each with
// unit objective weight and two lower-bounding rows (so at any optimum the
// epigraph variable equals the larger branch). Prices apply to energy, i.e.
// g_k * dt; regularization terms are scaled by dt as well.
// Throws ScenarioError when validate_scenario(s) reports violations.
QuadraticProgram build_qp(const HouseholdScenario& s);

// Reads controls out of a primal vector and reconstructs trajectories with
// step_soc/step_temperature; the bill is recomputed from the two-price rule,
// never from the epigraph variables. Throws std::invalid_argument on a
// length mismatch.
ScheduleSolution extract_solution(const QuadraticProgram& qp, const Eigen::VectorXd& primal,
                                  const HouseholdScenario& s);

// Rebuilds a full schedule (grid exchange, trajectories, cost breakdown)
// from control series alone; controls for absent components must be zero or
// empty. Throws std::invalid_argument on a length mismatch.
ScheduleSolution schedule_from_controls(const HouseholdScenario& s,
                                        std::vector<double> u_charge_kw,
                                        std::vector<double> u_discharge_kw,
                                        std::vector<double> u_nd_kw,
                                        std::vector<double> u_tcl_kw);

// Total cost of a schedule: energy bill plus dt-scaled regularization,
// independent of any epigraph machinery.
double objective_value(const HouseholdScenario& s, const ScheduleSolution& sol);

}  // namespace homesched
