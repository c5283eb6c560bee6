#include "pvint/timeseries.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <cstdio>
#include <random>

#include "pvint/csv.hpp"
#include "pvint/error.hpp"

namespace pvint {

void PanelSeries::validate() const {
  const auto n = static_cast<std::size_t>(values.rows());
  if (n == 0) throw InputError("panel has no sites");
  if (sites.size() != n) throw InputError("panel site list does not match row count");
  if (values.cols() < 2) throw InputError("panel needs at least two samples");
  if (timestamps.size() != static_cast<std::size_t>(values.cols())) {
    throw InputError("panel timestamp count does not match column count");
  }
  if (!(sample_hours > 0.0)) throw InputError("panel sample interval must be positive");
  for (std::size_t t = 1; t < timestamps.size(); ++t) {
    if (timestamps[t] <= timestamps[t - 1]) {
      throw InputError("timestamps not strictly increasing at sample " + std::to_string(t));
    }
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index t = 0; t < values.cols(); ++t) {
      const double v = values(i, t);
      if (!std::isfinite(v)) {
        throw InputError("non-finite value at site " + sites[static_cast<std::size_t>(i)] +
                         ", sample " + std::to_string(t));
      }
      const bool ok = basis == CapacityBasis::per_capacity ? (v >= 0.0 && v <= 1.0)
                      : basis == CapacityBasis::absolute_mw ? v >= 0.0
                                                            : true;
      if (!ok) {
        throw InputError("value out of range at site " + sites[static_cast<std::size_t>(i)] +
                         ", sample " + std::to_string(t));
      }
    }
  }
}

double DistributionFit::laplace_scale() const { return sigma / std::numbers::sqrt2; }

PanelSeries remove_night(const PanelSeries& panel, double day_start, double day_end) {
  if (!(day_start < day_end) || day_start < 0.0 || day_end > 24.0) {
    throw InputError("daytime window must satisfy 0 <= start < end <= 24");
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < panel.length(); ++t) {
    const double h = timefmt::hour_of_day(panel.timestamps[static_cast<std::size_t>(t)]);
    if (h >= day_start && h < day_end) keep.push_back(t);
  }
  if (keep.empty()) throw InputError("daytime window excludes every sample");

  PanelSeries out;
  out.sites = panel.sites;
  out.sample_hours = panel.sample_hours;
  out.basis = panel.basis;
  out.values.resize(panel.n_sites(), static_cast<Eigen::Index>(keep.size()));
  out.timestamps.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.values.col(static_cast<Eigen::Index>(k)) = panel.values.col(keep[k]);
    out.timestamps.push_back(panel.timestamps[static_cast<std::size_t>(keep[k])]);
  }
  return out;
}

Eigen::VectorXd highpass_fourier(std::span<const double> row, double sample_hours,
                                 double cutoff_hours) {
  const auto n = row.size();
  if (n < 4) throw InputError("detrending needs at least 4 samples");
  if (!(cutoff_hours > 2.0 * sample_hours)) {
    throw InputError("cutoff period must exceed twice the sample interval");
  }
  std::vector<double> time(row.begin(), row.end());
  std::vector<std::complex<double>> freq;
  Eigen::FFT<double> fft;
  fft.fwd(freq, time);

  // Bin k and n-k describe the same frequency k / (n * dt); keep k only when its
  // period n*dt/k is no longer than the cutoff.
  const double record_hours = static_cast<double>(n) * sample_hours;
  for (std::size_t k = 0; k < n; ++k) {
    const auto f = static_cast<double>(std::min(k, n - k));
    const bool keep = f > 0.0 && record_hours <= f * cutoff_hours * (1.0 + 1e-12);
    if (!keep) freq[k] = 0.0;
  }
  fft.inv(time, freq);
  return Eigen::Map<const Eigen::VectorXd>(time.data(), static_cast<Eigen::Index>(n));
}

DetrendedSeries detrend_fourier(std::shared_ptr<const PanelSeries> panel, double cutoff_hours) {
  if (!panel) throw InputError("null panel");
  DetrendedSeries out;
  out.sites = panel->sites;
  out.timestamps = panel->timestamps;
  out.sample_hours = panel->sample_hours;
  out.cutoff_hours = cutoff_hours;
  out.values.resize(panel->n_sites(), panel->length());
  for (Eigen::Index i = 0; i < panel->n_sites(); ++i) {
    const Eigen::VectorXd row = panel->values.row(i).transpose();
    out.values.row(i) = highpass_fourier({row.data(), static_cast<std::size_t>(row.size())},
                                         panel->sample_hours, cutoff_hours)
                            .transpose();
  }
  out.base = std::move(panel);
  return out;
}

DetrendedSeries detrend_fourier(const PanelSeries& panel, double cutoff_hours) {
  return detrend_fourier(std::make_shared<const PanelSeries>(panel), cutoff_hours);
}

DetrendedSeries as_fluctuation(const PanelSeries& panel) {
  DetrendedSeries out;
  out.sites = panel.sites;
  out.timestamps = panel.timestamps;
  out.sample_hours = panel.sample_hours;
  out.values = panel.values;
  out.cutoff_hours = 0.0;
  return out;
}

std::vector<double> autocorrelation(std::span<const double> series, std::size_t max_lag) {
  const auto n = series.size();
  if (n < 2 || 2 * max_lag >= n) throw InputError("autocorrelation needs max_lag < L/2");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double denom = 0.0;
  for (double v : series) denom += (v - mean) * (v - mean);
  if (!(denom > 0.0)) throw InputError("autocorrelation of a constant series is undefined");

  std::vector<double> acf(max_lag + 1);
  acf[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) num += (series[t] - mean) * (series[t + k] - mean);
    acf[k] = std::clamp(num / denom, -1.0, 1.0);
  }
  return acf;
}

DistributionFit fit_fluctuation(std::span<const double> series, DistributionFamily family) {
  const auto n = series.size();
  if (n < 30) throw InputError("distribution fit needs at least 30 samples");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : series) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  if (!(m2 > 0.0)) throw InputError("distribution fit of a zero-variance series");
  const double sigma = std::sqrt(m2 / static_cast<double>(n - 1));
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  return {family, mean, sigma, m4 / (m2 * m2)};
}

double eval_cdf(const DistributionFit& fit, double x) {
  const double d = x - fit.mu;
  if (fit.family == DistributionFamily::normal) {
    return 0.5 * std::erfc(-d / (std::numbers::sqrt2 * fit.sigma));
  }
  const double b = fit.laplace_scale();
  const double tail = 0.5 * std::exp(-std::abs(d) / b);
  return d >= 0.0 ? 1.0 - tail : tail;
}

double eval_pdf(const DistributionFit& fit, double x) {
  const double d = x - fit.mu;
  if (fit.family == DistributionFamily::normal) {
    return std::exp(-d * d / (2.0 * fit.sigma * fit.sigma)) /
           (std::sqrt(2.0 * std::numbers::pi) * fit.sigma);
  }
  const double b = fit.laplace_scale();
  return std::exp(-std::abs(d) / b) / (2.0 * b);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("quantile probability must lie in (0, 1)");
  // Acklam's rational approximation followed by one Halley step on erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double eval_quantile(const DistributionFit& fit, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("quantile probability must lie in (0, 1)");
  if (fit.family == DistributionFamily::normal) return fit.mu + fit.sigma * normal_quantile(p);
  const double b = fit.laplace_scale();
  return p >= 0.5 ? fit.mu - b * std::log(2.0 * (1.0 - p)) : fit.mu + b * std::log(2.0 * p);
}

PanelSeries synth_panel(const SynthConfig& config) {
  if (config.n_sites <= 0) throw InputError("synthetic panel needs at least one site");
  if (config.n_samples < 2) throw InputError("synthetic panel needs at least two samples");
  if (config.common_factor_loading < 0.0 || config.common_factor_loading > 1.0 ||
      config.regional_loading < 0.0 || config.regional_loading > 1.0) {
    throw InputError("factor loadings must lie in [0, 1]");
  }
  if (config.noise_sigma < 0.0) throw InputError("noise sigma must be non-negative");
  if (config.regional_blocks < 0 || config.regional_blocks > config.n_sites) {
    throw InputError("regional block count must lie in [0, n_sites]");
  }
  if (config.diurnal && config.n_samples % 12 != 0) {
    throw InputError("diurnal panels need a multiple of 12 daytime samples");
  }

  const Eigen::Index n = config.n_sites;
  const Eigen::Index len = config.n_samples;
  const int blocks = config.regional_blocks;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Draw order is fixed: common factor, regional factors, then site noise row by row.
  Eigen::VectorXd common(len);
  for (Eigen::Index t = 0; t < len; ++t) common(t) = gauss(rng);
  Eigen::MatrixXd regional(blocks, len);
  for (int r = 0; r < blocks; ++r)
    for (Eigen::Index t = 0; t < len; ++t) regional(r, t) = gauss(rng);

  Eigen::MatrixXd z(n, len);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int block = blocks > 0 ? static_cast<int>(i * blocks / n) : -1;
    for (Eigen::Index t = 0; t < len; ++t) {
      double v = config.common_factor_loading * common(t) + config.noise_sigma * gauss(rng);
      if (block >= 0) v += config.regional_loading * regional(block, t);
      z(i, t) = v;
    }
  }

  PanelSeries panel;
  panel.sites.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%03d", static_cast<int>(i + 1));
    panel.sites.emplace_back(buf);
  }
  panel.sample_hours = 1.0;
  const std::int64_t start = timefmt::parse_iso8601("2013-05-01T00:00:00");

  if (!config.diurnal) {
    panel.basis = CapacityBasis::fluctuation;
    panel.values = std::move(z);
    for (Eigen::Index t = 0; t < len; ++t) panel.timestamps.push_back(start + 6 * 3600 + t * 3600);
    return panel;
  }

  // Raw load factor: half-sine daylight envelope from 06:00 to 18:00, zero at night.
  panel.basis = CapacityBasis::per_capacity;
  const Eigen::Index days = len / 12;
  panel.values = Eigen::MatrixXd::Zero(n, days * 24);
  Eigen::Index k = 0;
  for (Eigen::Index h = 0; h < days * 24; ++h) {
    panel.timestamps.push_back(start + h * 3600);
    const auto hour = h % 24;
    if (hour < 6 || hour >= 18) continue;
    const double env = std::sin(std::numbers::pi * (static_cast<double>(hour - 6) + 0.5) / 12.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      panel.values(i, h) = std::clamp(0.7 * env + 0.05 * z(i, k), 0.0, 1.0);
    }
    ++k;
  }
  return panel;
}

}  // namespace pvint
