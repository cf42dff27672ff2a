#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>

#include "homesched/program_builder.hpp"

namespace homesched {

enum class SolveStatus { Optimal, PrimalInfeasible, IterationLimit, NumericalFailure };

const char* to_string(SolveStatus status);

struct SolverSettings {
  double tol_primal = 1e-8;  // scaled primal residual
  double tol_dual = 1e-8;    // scaled dual residual
  double tol_gap = 1e-8;     // relative duality gap
  int max_iter = 200;
  double infeasibility_threshold = 1e-6;  // Farkas certificate tolerance
  bool polish = true;  // snap the converged iterate onto its active set
};

struct QPResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd primal;     // x
  Eigen::VectorXd ineq_dual;  // lambda, one per inequality row, >= 0 at Optimal
  Eigen::VectorXd eq_dual;    // nu
  int iterations = 0;
  // Scaled residuals matching the solver tolerances above.
  double r_primal = std::numeric_limits<double>::infinity();
  double r_dual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  // Infeasibility witness (presolve reasoning or a scaled Farkas vector).
  std::string note;
  Eigen::VectorXd farkas;
};

// Solves min 0.5 x'Qx + c'x s.t. A x <= b, E x = f with a dense primal-dual
// interior-point method (predictor-corrector on the inequality block).
// Deterministic: identical inputs give identical results. Numerical trouble
// is reported through the status, never thrown.
QPResult solve(const QuadraticProgram& qp, const SolverSettings& settings = {});

// Unscaled KKT residuals, recomputed from the problem data alone.
struct ResidualReport {
  double stationarity = 0.0;     // ||Qx + c + A'lambda + E'nu||_inf
  double complementarity = 0.0;  // max_i |lambda_i * (Ax - b)_i|
  double primal_ineq = 0.0;      // max_i (Ax - b)_i, clamped at 0
  double primal_eq = 0.0;        // ||Ex - f||_inf
  double dual_feasibility = 0.0; // max_i (-lambda_i), clamped at 0

  double worst() const;
};

ResidualReport kkt_residuals(const QuadraticProgram& qp, const QPResult& result);

}  // namespace homesched
