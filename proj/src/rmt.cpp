#include "pvint/rmt.hpp"

#include <cmath>
#include <numbers>

namespace pvint {

MpBounds mp_bounds(double q) {
  if (!(q > 0.0)) throw InputError("Marchenko-Pastur ratio Q must be positive");
  const double s = 1.0 / std::sqrt(q);
  return {q, (1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
}

MpBounds mp_bounds(Eigen::Index n_sites, Eigen::Index n_samples) {
  if (n_sites <= 0 || n_samples <= 0) throw InputError("N and L must be positive");
  return mp_bounds(static_cast<double>(n_samples) / static_cast<double>(n_sites));
}

double mp_density(double lambda, double q) {
  if (!(q > 1.0)) throw InputError("Marchenko-Pastur density needs Q > 1");
  const auto b = mp_bounds(q);
  if (lambda <= b.lambda_min || lambda >= b.lambda_max) return 0.0;
  return q / (2.0 * std::numbers::pi) *
         std::sqrt((b.lambda_max - lambda) * (lambda - b.lambda_min)) / lambda;
}

double mp_mass(double lo, double hi, double q) {
  if (!(q > 1.0)) throw InputError("Marchenko-Pastur density needs Q > 1");
  const auto b = mp_bounds(q);
  const double a = b.lambda_min;
  const double c = b.lambda_max;
  // Antiderivative of sqrt((c-x)(x-a))/x on [a, c].
  auto prim = [&](double x) {
    x = std::clamp(x, a, c);
    const double r = std::sqrt(std::max(0.0, (c - x) * (x - a)));
    const double g = std::sqrt(a * c);
    // asin written as atan2 of exact factors stays accurate at the support edges.
    const double asin_u = std::atan2(2.0 * x - a - c, 2.0 * r);
    const double asin_w = std::atan2((a + c) * x - 2.0 * a * c, 2.0 * g * r);
    return r + 0.5 * (a + c) * asin_u - g * asin_w;
  };
  if (hi <= lo) return 0.0;
  return q / (2.0 * std::numbers::pi) * (prim(hi) - prim(lo));
}

CorrelationMatrix correlation_matrix(const DetrendedSeries& series) {
  if (series.length() < 2) throw InputError("correlation needs at least two samples");
  for (Eigen::Index i = 0; i < series.n_sites(); ++i) {
    const auto row = series.values.row(i);
    if ((row.array() == row(0)).all()) {
      throw InputError("site " + series.sites[static_cast<std::size_t>(i)] +
                       " has zero variance");
    }
  }
  return {series.sites, correlation(series.values)};
}

EigenDecomposition eigen_decompose(const CorrelationMatrix& c, Eigen::Index n_samples,
                                   const JacobiOptions& options) {
  const auto eig = jacobi_eigen(c.entries, options);
  const auto bounds = mp_bounds(c.dim(), n_samples);
  EigenDecomposition out;
  out.eigenvalues = eig.values;
  out.eigenvectors = eig.vectors;
  out.samples = n_samples;
  out.q_ratio = bounds.q;
  out.lambda_min = bounds.lambda_min;
  out.lambda_max = bounds.lambda_max;
  out.sweeps = eig.sweeps;
  out.off_norm = eig.off_norm;
  return out;
}

Eigen::Index count_genuine(const EigenDecomposition& decomp) {
  return (decomp.eigenvalues.array() > decomp.lambda_max).count();
}

CorrelationSplit split_correlation(const EigenDecomposition& decomp, Eigen::Index n_genuine) {
  const Eigen::Index n = decomp.dim();
  if (n_genuine < 0 || n_genuine > n) throw InputError("genuine mode count out of range");
  const auto& v = decomp.eigenvectors;
  const auto& lam = decomp.eigenvalues;
  CorrelationSplit out;
  out.n_genuine = n_genuine;
  const auto top = v.leftCols(n_genuine);
  const auto rest = v.rightCols(n - n_genuine);
  out.genuine = top * lam.head(n_genuine).asDiagonal() * top.transpose();
  out.random = rest * lam.tail(n - n_genuine).asDiagonal() * rest.transpose();
  out.genuine = 0.5 * (out.genuine + out.genuine.transpose()).eval();
  out.random = 0.5 * (out.random + out.random.transpose()).eval();
  return out;
}

ModeProjection project_modes(const Eigen::MatrixXd& z, const EigenDecomposition& decomp,
                             Eigen::Index n_genuine) {
  if (z.rows() != decomp.dim()) {
    throw InputError("panel has " + std::to_string(z.rows()) + " sites but decomposition has " +
                     std::to_string(decomp.dim()));
  }
  if (n_genuine < 0 || n_genuine > decomp.dim()) throw InputError("mode count out of range");
  const auto basis = decomp.eigenvectors.leftCols(n_genuine);
  ModeProjection out;
  out.coefficients = basis.transpose() * z;
  out.reconstructed = basis * out.coefficients;
  return out;
}

ModeProjection project_modes(const DetrendedSeries& series, const EigenDecomposition& decomp,
                             Eigen::Index n_genuine) {
  return project_modes(series.values, decomp, n_genuine);
}

Histogram eigen_histogram(const Eigen::VectorXd& eigenvalues, double bin_width) {
  if (!(bin_width > 0.0)) throw InputError("histogram bin width must be positive");
  Histogram h;
  h.bin_width = bin_width;
  if (eigenvalues.size() == 0) return h;
  const double first = std::floor(eigenvalues.minCoeff() / bin_width) * bin_width;
  const auto bins =
      static_cast<std::size_t>(std::floor((eigenvalues.maxCoeff() - first) / bin_width)) + 1;
  std::vector<double> counts(bins, 0.0);
  for (double v : eigenvalues) {
    auto k = static_cast<std::size_t>(std::floor((v - first) / bin_width));
    counts[std::min(k, bins - 1)] += 1.0;
  }
  const double norm = static_cast<double>(eigenvalues.size()) * bin_width;
  for (std::size_t k = 0; k < bins; ++k) {
    h.bin_left.push_back(first + static_cast<double>(k) * bin_width);
    h.density.push_back(counts[k] / norm);
  }
  return h;
}

}  // namespace pvint
