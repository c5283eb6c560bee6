#include "pvint/forecast_error.hpp"

#include <cmath>
#include <random>
#include <iostream>

#include "pvint/csv.hpp"
#include "pvint/error.hpp"

namespace pvint {

CapacityAllocation allocate_capacity(double total_mw, const Eigen::VectorXd& demand_shares,
                                     std::vector<std::string> site_ids) {
  if (!(total_mw >= 0.0)) throw InputError("total capacity must be non-negative");
  if (demand_shares.size() == 0) throw InputError("no demand shares given");
  if ((demand_shares.array() < 0.0).any()) throw InputError("negative demand share");
  const double sum = demand_shares.sum();
  if (!(sum > 0.0)) throw InputError("demand shares sum to zero");
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InputError("demand shares sum to " + csv::format(sum) + ", expected 1");
  }
  if (site_ids.empty()) {
    for (Eigen::Index i = 0; i < demand_shares.size(); ++i) site_ids.push_back(std::to_string(i + 1));
  }
  if (static_cast<Eigen::Index>(site_ids.size()) != demand_shares.size()) {
    throw InputError("site id count does not match share count");
  }
  CapacityAllocation out;
  out.site_ids = std::move(site_ids);
  out.demand_shares = demand_shares;
  out.capacities = total_mw * demand_shares;
  out.total_capacity = total_mw;
  return out;
}

double sigma_uncorrelated(const CapacityAllocation& alloc, const Eigen::VectorXd& sigma_sites) {
  if (sigma_sites.size() != alloc.capacities.size()) {
    throw InputError("sigma vector length " + std::to_string(sigma_sites.size()) +
                     " does not match " + std::to_string(alloc.capacities.size()) + " sites");
  }
  if ((sigma_sites.array() < 0.0).any()) throw InputError("negative site sigma");
  return (alloc.capacities.array() * sigma_sites.array()).matrix().norm();
}

double sigma_correlated(const CapacityAllocation& alloc, const Eigen::VectorXd& sigma_sites,
                        const Eigen::MatrixXd& rho) {
  const Eigen::Index n = alloc.capacities.size();
  if (sigma_sites.size() != n) throw InputError("sigma vector length does not match sites");
  if (rho.rows() != n || rho.cols() != n) throw InputError("rho dimension does not match sites");
  if ((sigma_sites.array() < 0.0).any()) throw InputError("negative site sigma");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::abs(rho(i, j) - rho(j, i)) > 1e-12) throw InputError("rho is not symmetric");

  const Eigen::VectorXd x = alloc.capacities.cwiseProduct(sigma_sites);
  double var = x.squaredNorm();
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) var += 2.0 * x(i) * x(j) * rho(i, j);
  if (var < 0.0) {
    std::cerr << "warning: system variance " << var << " is negative; clamped to 0\n";
    var = 0.0;
  }
  return std::sqrt(var);
}

double mean_system_output(const PanelSeries& panel, const CapacityAllocation& alloc) {
  if (panel.n_sites() != alloc.capacities.size()) {
    throw InputError("panel has " + std::to_string(panel.n_sites()) + " sites, allocation has " +
                     std::to_string(alloc.capacities.size()));
  }
  return alloc.capacities.dot(panel.values.rowwise().mean());
}

ForecastErrorEstimate estimate(const DetrendedSeries& series, const CorrelationSplit& split,
                               const CapacityAllocation& alloc, double mean_output) {
  const Eigen::Index n = series.n_sites();
  if (alloc.capacities.size() != n) {
    throw InputError("allocation covers " + std::to_string(alloc.capacities.size()) +
                     " sites, panel has " + std::to_string(n));
  }
  if (split.genuine.rows() != n) throw InputError("correlation split dimension mismatch");
  if (series.length() < 2) throw InputError("estimate needs at least two samples");

  ForecastErrorEstimate out;
  const auto len = static_cast<double>(series.length());
  const Eigen::MatrixXd centered = series.values.colwise() - series.values.rowwise().mean();
  out.sigma_sites = (centered.rowwise().squaredNorm() / (len - 1.0)).cwiseSqrt();
  out.rho = split.genuine;
  out.rho.diagonal().setOnes();
  out.sigma_system_uncorrelated = sigma_uncorrelated(alloc, out.sigma_sites);
  out.sigma_system_correlated = sigma_correlated(alloc, out.sigma_sites, out.rho);
  out.mean_output = mean_output;
  if (mean_output != 0.0) {
    out.cv_uncorrelated = out.sigma_system_uncorrelated / mean_output;
    out.cv_correlated = out.sigma_system_correlated / mean_output;
  }
  return out;
}

void write_monthly_table(std::ostream& out, const std::vector<MonthlyErrorRow>& rows) {
  out << "month,error_wo,cv_wo,error_w,cv_w\n";
  for (const auto& r : rows) {
    out << r.month << ',' << csv::format(r.error_wo) << ',' << csv::format(r.cv_wo) << ','
        << csv::format(r.error_w) << ',' << csv::format(r.cv_w) << '\n';
  }
}

double sigma_monte_carlo(const CapacityAllocation& alloc, const Eigen::VectorXd& sigma_sites,
                         const Eigen::MatrixXd& rho, long samples, std::uint64_t seed) {
  const Eigen::Index n = alloc.capacities.size();
  if (sigma_sites.size() != n || rho.rows() != n || rho.cols() != n) {
    throw InputError("Monte Carlo inputs have mismatched dimensions");
  }
  if (samples < 2) throw InputError("Monte Carlo needs at least two samples");
  const Eigen::VectorXd scale = alloc.capacities.cwiseProduct(sigma_sites);
  const Eigen::MatrixXd cov = scale.asDiagonal() * rho * scale.asDiagonal();
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  const double floor = -1e-12 * std::max(1.0, cov.diagonal().maxCoeff());
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < floor).any()) {
    throw InputError("correlation matrix is not positive semidefinite");
  }
  // cov = P' L D L' P, so P' L sqrt(D) g has the target covariance.
  const Eigen::MatrixXd lower = ldlt.matrixL();
  const Eigen::VectorXd root = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd factor = ldlt.transpositionsP().transpose() * (lower * root.asDiagonal());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd g(n);
  double mean = 0.0;
  double m2 = 0.0;
  for (long k = 0; k < samples; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) g(i) = gauss(rng);
    const double total = (factor * g).sum();
    const double delta = total - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (total - mean);
  }
  return std::sqrt(m2 / static_cast<double>(samples - 1));
}

}  // namespace pvint
