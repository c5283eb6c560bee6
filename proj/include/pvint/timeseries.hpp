#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pvint {

enum class CapacityBasis {
  per_capacity,  ///< load factor in [0, 1]
  absolute_mw,   ///< output in MW, >= 0
  fluctuation,   ///< zero-mean short-term fluctuation (synthetic or pre-filtered), unbounded
};

/// Rectangular panel of per-site output series: row i is site i, column t is sample t.
///
/// Timestamps are strictly increasing. Raw panels are evenly spaced by
/// `sample_hours`; after night removal the retained daytime samples keep their
/// wall-clock stamps (gaps at night) and are treated as one contiguous series
/// by the analysis routines.
struct PanelSeries {
  std::vector<std::string> sites;
  std::vector<std::int64_t> timestamps;  ///< seconds since epoch, wall clock read as UTC
  double sample_hours = 1.0;
  Eigen::MatrixXd values;  ///< N x L
  CapacityBasis basis = CapacityBasis::per_capacity;

  [[nodiscard]] Eigen::Index n_sites() const { return values.rows(); }
  [[nodiscard]] Eigen::Index length() const { return values.cols(); }

  /// Throws InputError when a panel invariant is broken.
  void validate() const;
};

/// De-trended output z_i(t). `base` points at the panel the trend was removed
/// from; it is null for series that were loaded from disk or generated directly
/// as fluctuations.
struct DetrendedSeries {
  std::shared_ptr<const PanelSeries> base;
  std::vector<std::string> sites;
  std::vector<std::int64_t> timestamps;
  double sample_hours = 1.0;
  Eigen::MatrixXd values;
  double cutoff_hours = 6.0;  ///< 0 marks a series that was never filtered

  [[nodiscard]] Eigen::Index n_sites() const { return values.rows(); }
  [[nodiscard]] Eigen::Index length() const { return values.cols(); }
};

enum class DistributionFamily { normal, laplace };

struct DistributionFit {
  DistributionFamily family = DistributionFamily::normal;
  double mu = 0.0;
  double sigma = 1.0;  ///< standard deviation; for laplace sigma == sqrt(2) * b
  double kurtosis_sample = 3.0;

  [[nodiscard]] double laplace_scale() const;  ///< b = sigma / sqrt(2)
};

/// Keeps samples whose hour of day lies in [day_start, day_end).
[[nodiscard]] PanelSeries remove_night(const PanelSeries& panel, double day_start = 6.0,
                                       double day_end = 18.0);

/// Hard spectral high-pass: every Fourier bin whose period exceeds `cutoff_hours`
/// (the zero-frequency bin included) is zeroed and the row transformed back.
/// The filter is applied to the sample sequence as-is, so night gaps are closed.
[[nodiscard]] Eigen::VectorXd highpass_fourier(std::span<const double> row, double sample_hours,
                                               double cutoff_hours);

[[nodiscard]] DetrendedSeries detrend_fourier(const PanelSeries& panel, double cutoff_hours = 6.0);
[[nodiscard]] DetrendedSeries detrend_fourier(std::shared_ptr<const PanelSeries> panel,
                                              double cutoff_hours = 6.0);

/// Wraps a fluctuation panel without filtering (cutoff_hours = 0).
[[nodiscard]] DetrendedSeries as_fluctuation(const PanelSeries& panel);

/// Biased sample autocorrelation for lags 0..max_lag; lag 0 is exactly 1.
[[nodiscard]] std::vector<double> autocorrelation(std::span<const double> series,
                                                  std::size_t max_lag);

[[nodiscard]] DistributionFit fit_fluctuation(std::span<const double> series,
                                              DistributionFamily family);

[[nodiscard]] double eval_cdf(const DistributionFit& fit, double x);
[[nodiscard]] double eval_pdf(const DistributionFit& fit, double x);

/// Inverse CDF; p must lie in (0, 1).
[[nodiscard]] double eval_quantile(const DistributionFit& fit, double p);

/// Standard normal quantile, accurate to ~1e-15 relative.
[[nodiscard]] double normal_quantile(double p);

struct SynthConfig {
  int n_sites = 47;
  int n_samples = 420;
  double common_factor_loading = 0.6;  ///< a_i, same for all sites
  int regional_blocks = 0;             ///< sites are split into this many contiguous blocks
  double regional_loading = 0.0;       ///< b_ir for the site's own block, 0 elsewhere
  double noise_sigma = 0.8;
  std::uint64_t seed = 0;
  /// When set, emit a raw load-factor panel with a diurnal envelope and night
  /// samples (n_samples counts daytime samples and must be a multiple of 12).
  bool diurnal = false;
};

/// z_i(t) = a f(t) + b g_{r(i)}(t) + s e_i(t) with independent N(0,1) innovations.
/// Deterministic for a given seed.
[[nodiscard]] PanelSeries synth_panel(const SynthConfig& config);

}  // namespace pvint
