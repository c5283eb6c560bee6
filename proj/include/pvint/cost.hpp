#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "pvint/unitcommit.hpp"

namespace pvint::cost {

struct IntegrationCostResult {
  double sigma_p = 0.0;             ///< MW
  double cv = 0.0;                  ///< sigma_p over mean PV output during PV steps
  double cost_with_error = 0.0;     ///< JPY, fuel plus start-up
  double cost_without_error = 0.0;  ///< JPY, fuel plus start-up at sigma_p = 0
  double pv_energy = 0.0;           ///< MWh
  double epsilon = 0.0;             ///< JPY/kWh
  bool feasible = true;             ///< false marks a skipped grid point
  uc::SolveStatus status = uc::SolveStatus::optimal;
};

/// PV energy sum_t pv_t * step_hours in MWh.
[[nodiscard]] double pv_energy(const Eigen::VectorXd& pv, double step_hours);

/// epsilon = (cost_with - cost_without) / (pv_energy * 1000) in JPY/kWh.
/// Throws InputError when the PV energy is not positive.
[[nodiscard]] IntegrationCostResult integration_cost(double cost_with, double cost_without,
                                                     const Eigen::VectorXd& pv, double step_hours,
                                                     double sigma_p = 0.0);

/// Same, from two solved runs. The instances must agree in everything except
/// sigma_p; otherwise InputError.
[[nodiscard]] IntegrationCostResult integration_cost(const uc::Schedule& with, const uc::Instance& instance_with,
                                                     const uc::Schedule& without,
                                                     const uc::Instance& instance_without);

/// Copy of `instance` with sigma_p_t = sigma_p on steps with PV output and 0 elsewhere.
[[nodiscard]] uc::Instance with_sigma_p(const uc::Instance& instance, double sigma_p);

/// Mean PV output over steps with positive PV, MW.
[[nodiscard]] double mean_daytime_pv(const Eigen::VectorXd& pv);

struct SweepOptions {
  uc::SolveOptions solve;
  int threads = 1;  ///< grid points solved concurrently
};

/// Solves the base instance at every grid value of sigma_p (MW). The grid must
/// be strictly ascending and start at 0. Infeasible or failed points are kept
/// in place with feasible = false.
[[nodiscard]] std::vector<IntegrationCostResult> sweep(const uc::Instance& base, const std::vector<double>& grid,
                                                       const SweepOptions& options = {});

/// CSV with header sigma_p,cv,cost_with,cost_without,epsilon,status; skipped
/// points leave the numeric cost columns empty.
void write_sweep(std::ostream& out, const std::vector<IntegrationCostResult>& results);

}  // namespace pvint::cost
