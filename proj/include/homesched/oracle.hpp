#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "homesched/program_builder.hpp"
#include "homesched/qp_solver.hpp"

namespace homesched {

// One charge/discharge activity pattern over the horizon. Bit k set means
// discharging is forbidden at step k (charging stays box-constrained); bit k
// clear forbids charging instead. Every pattern solution therefore satisfies
// u_ch*u_dch = 0 exactly at each step.
struct PatternResult {
  std::uint32_t pattern = 0;
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;  // meaningful only when status == Optimal
  std::optional<ScheduleSolution> solution;
};

struct OracleResult {
  std::optional<PatternResult> best;  // empty when every pattern is infeasible
  std::vector<PatternResult> all;
  int feasible_count = 0;
};

// Exact reference for the never-simultaneous problem on short horizons:
// enumerates all 2^K activity patterns, solves each restricted QP, and keeps
// the cheapest feasible one (ties break to the lowest pattern index).
// Infeasible patterns are skipped. Throws std::invalid_argument when the
// scenario has no battery or K exceeds k_limit.
OracleResult solve_exact(const HouseholdScenario& s, int k_limit = 10,
                         const SolverSettings& settings = {});

struct GapReport {
  double relaxed_objective = 0.0;
  double exact_objective = 0.0;
  double gap = 0.0;  // (relaxed - exact) / (1 + |exact|), sign preserved
  // The relaxed problem only drops a constraint, so its optimum can never
  // sit above the pattern optimum (beyond solver tolerance).
  bool relaxation_bound_ok = false;
};

GapReport compare(const HouseholdScenario& s, const ScheduleSolution& relaxed,
                  const PatternResult& exact);

}  // namespace homesched
