#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pvint/lp.hpp"

namespace pvint::milp {

/// minimize cost' x over the LP constraints with `integer[j]` columns restricted to integers.
struct Problem {
  lp::Problem lp;
  std::vector<bool> integer;
};

struct Options {
  double gap_tol = 1e-6;        ///< relative gap, measured against |incumbent|
  double absolute_gap = 1e-6;   ///< absolute gap in objective units
  double integrality_tol = 1e-6;
  double time_limit_seconds = lp::kInf;
  long node_limit = 10'000'000;
  lp::Options lp;
  /// Known feasible point (with its objective) used as the starting incumbent.
  std::optional<Eigen::VectorXd> initial_solution;
  bool verbose = false;
};

enum class Status { optimal, infeasible, unbounded, time_limit, node_limit, numerical };

[[nodiscard]] const char* to_string(Status s);

struct Result {
  Status status = Status::numerical;
  bool has_solution = false;
  double objective = lp::kInf;  ///< incumbent objective
  double bound = -lp::kInf;     ///< proven lower bound
  Eigen::VectorXd x;
  long nodes = 0;
  long lp_iterations = 0;
  long lp_failures = 0;  ///< node LPs that could not be solved and were dropped
};

/// Branch and bound with LP relaxation bounds, warm-started dual simplex at
/// every node, best-first node selection with depth-first dives, and
/// reduced-cost fixing. Branches on the fractional variable whose fractional
/// part is closest to 0.5, lowest column index first on ties, so the search is
/// deterministic.
[[nodiscard]] Result solve(const Problem& problem, const Options& options = {});

/// Largest bound, row or integrality violation of `x`.
[[nodiscard]] double max_violation(const Problem& problem, const Eigen::VectorXd& x);

}  // namespace pvint::milp
