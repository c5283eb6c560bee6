#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pvint/rmt.hpp"
#include "pvint/timeseries.hpp"

namespace pvint {

struct CapacityAllocation {
  std::vector<std::string> site_ids;
  Eigen::VectorXd capacities;     ///< MW
  Eigen::VectorXd demand_shares;  ///< sums to 1
  double total_capacity = 0.0;
};

/// c_i = total * share_i. Shares must be non-negative and sum to 1 (within 1e-9).
[[nodiscard]] CapacityAllocation allocate_capacity(double total_mw,
                                                   const Eigen::VectorXd& demand_shares,
                                                   std::vector<std::string> site_ids = {});

/// System-wide error ignoring cross-correlation: sqrt(sum c_i^2 sigma_i^2), in MW.
[[nodiscard]] double sigma_uncorrelated(const CapacityAllocation& alloc,
                                        const Eigen::VectorXd& sigma_sites);

/// System-wide error with pairwise correlation rho (diagonal ignored). A
/// numerically negative variance is clamped to 0 and reported on stderr.
[[nodiscard]] double sigma_correlated(const CapacityAllocation& alloc,
                                      const Eigen::VectorXd& sigma_sites,
                                      const Eigen::MatrixXd& rho);

/// Sample standard deviation of sum_i c_i e_i over `samples` draws of
/// e ~ N(0, diag(sigma) rho diag(sigma)). Deterministic for a given seed.
/// Throws InputError when rho is not positive semidefinite.
[[nodiscard]] double sigma_monte_carlo(const CapacityAllocation& alloc, const Eigen::VectorXd& sigma_sites,
                                       const Eigen::MatrixXd& rho, long samples, std::uint64_t seed);

struct ForecastErrorEstimate {
  Eigen::VectorXd sigma_sites;  ///< per-capacity standard deviation of z_i
  Eigen::MatrixXd rho;          ///< genuine correlation with unit diagonal
  double sigma_system_uncorrelated = 0.0;
  double sigma_system_correlated = 0.0;
  double cv_uncorrelated = 0.0;
  double cv_correlated = 0.0;
  double mean_output = 0.0;  ///< MW, CV denominator
};

/// Lower-limit forecast error: sigma_i is the sample standard deviation of the
/// de-trended series and rho is the genuine correlation C^t with its diagonal
/// set to 1. A zero mean output leaves the CVs at 0.
[[nodiscard]] ForecastErrorEstimate estimate(const DetrendedSeries& series,
                                             const CorrelationSplit& split,
                                             const CapacityAllocation& alloc, double mean_output);

/// Sum_i c_i <y_i> over the samples of a load-factor panel.
[[nodiscard]] double mean_system_output(const PanelSeries& panel, const CapacityAllocation& alloc);

struct MonthlyErrorRow {
  int month = 0;
  double error_wo = 0.0;
  double cv_wo = 0.0;
  double error_w = 0.0;
  double cv_w = 0.0;
};

/// CSV with header month,error_wo,cv_wo,error_w,cv_w.
void write_monthly_table(std::ostream& out, const std::vector<MonthlyErrorRow>& rows);

}  // namespace pvint
