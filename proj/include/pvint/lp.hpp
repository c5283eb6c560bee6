#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

namespace pvint::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize cost' x  subject to  row_lower <= A x <= row_upper,  col_lower <= x <= col_upper.
struct Problem {
  Eigen::SparseMatrix<double> a;  ///< rows x cols, column major
  Eigen::VectorXd cost;
  Eigen::VectorXd col_lower, col_upper;
  Eigen::VectorXd row_lower, row_upper;

  [[nodiscard]] Eigen::Index rows() const { return a.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return a.cols(); }
};

enum class Status { optimal, infeasible, unbounded, cutoff, iteration_limit, time_limit, numerical };

[[nodiscard]] const char* to_string(Status s);

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, at_zero };

/// Basis snapshot for warm starts: one entry per structural column followed by
/// one per row (the row's logical variable).
struct Basis {
  std::vector<VarStatus> status;
  [[nodiscard]] bool empty() const { return status.empty(); }
};

struct Options {
  double primal_tolerance = 1e-7;
  double dual_tolerance = 1e-7;
  double pivot_tolerance = 1e-9;
  long max_iterations = 1'000'000;
  int refactor_interval = 100;
  /// Stop with Status::cutoff once the (monotone) dual objective exceeds this value.
  double objective_cutoff = kInf;
  double time_limit_seconds = kInf;
  /// Replaces infinite column bounds while solving; a solution resting on one
  /// of these is reported as unbounded.
  double infinite_bound_box = 1e9;
};

struct Solution {
  Status status = Status::numerical;
  double objective = 0.0;
  Eigen::VectorXd x;             ///< structural values
  Eigen::VectorXd row_activity;  ///< A x
  Eigen::VectorXd reduced_costs;
  Basis basis;
  long iterations = 0;
};

/// Bounded-variable dual simplex over a sparse LU basis factorization with
/// product-form updates, dual steepest-edge pricing and a bound-flipping ratio
/// test. Every structural column must carry at least one finite bound after
/// boxing (infinite bounds are boxed by Options::infinite_bound_box).
class DualSimplex {
 public:
  explicit DualSimplex(const Problem& problem);
  ~DualSimplex();
  DualSimplex(const DualSimplex&) = delete;
  DualSimplex& operator=(const DualSimplex&) = delete;

  /// Solves with the given column bounds (same size as the problem's), starting
  /// from `warm` when it is non-empty and consistent.
  Solution solve(const Eigen::VectorXd& col_lower, const Eigen::VectorXd& col_upper,
                 const Basis& warm, const Options& options = {});

  Solution solve(const Options& options = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
[[nodiscard]] Solution solve(const Problem& problem, const Options& options = {});

}  // namespace pvint::lp
