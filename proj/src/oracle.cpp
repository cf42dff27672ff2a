#include "homesched/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace homesched {

OracleResult solve_exact(const HouseholdScenario& s, int k_limit, const SolverSettings& settings) {
  if (!s.battery) throw std::invalid_argument("solve_exact: no battery");
  const int K = s.horizon.steps;
  if (K > k_limit) throw std::invalid_argument("solve_exact: horizon exceeds k_limit");
  if (K > 30) throw std::invalid_argument("solve_exact: horizon too long to enumerate");

  const QuadraticProgram base = build_qp(s);
  OracleResult out;
  out.all.reserve(static_cast<size_t>(1) << K);

  for (std::uint32_t pattern = 0; pattern < (1u << K); ++pattern) {
    QuadraticProgram qp = base;
    for (int k = 0; k < K; ++k) {
      const bool forbid_discharge = (pattern >> k) & 1u;
      const int row = qp.row_of(forbid_discharge ? RowKind::DischargeHi : RowKind::ChargeHi, k);
      qp.b_ineq(row) = 0.0;  // upper bound 0 pins the forbidden side at zero
    }
    PatternResult pr;
    pr.pattern = pattern;
    QPResult res = solve(qp, settings);
    pr.status = res.status;
    if (res.status == SolveStatus::Optimal) {
      // Clear the interior-point dust on the pinned side so the reported
      // schedule meets the never-simultaneous rule exactly.
      Eigen::VectorXd primal = res.primal;
      for (int k = 0; k < K; ++k) {
        const bool forbid_discharge = (pattern >> k) & 1u;
        primal(qp.index.at(k, forbid_discharge ? VarKind::Discharge : VarKind::Charge)) = 0.0;
      }
      pr.solution = extract_solution(qp, primal, s);
      pr.objective = pr.solution->objective;
      ++out.feasible_count;
      if (!out.best || pr.objective < out.best->objective) out.best = pr;
    }
    out.all.push_back(std::move(pr));
  }
  return out;
}

GapReport compare(const HouseholdScenario& s, const ScheduleSolution& relaxed,
                  const PatternResult& exact) {
  GapReport rep;
  rep.relaxed_objective = objective_value(s, relaxed);
  rep.exact_objective = exact.objective;
  rep.gap = (rep.relaxed_objective - rep.exact_objective) / (1.0 + std::abs(rep.exact_objective));
  const double scale = 1.0 + std::abs(rep.exact_objective);
  rep.relaxation_bound_ok = rep.relaxed_objective <= rep.exact_objective + 1e-7 * scale;
  return rep;
}

}  // namespace homesched
