#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "pvint/error.hpp"
#include "pvint/timeseries.hpp"

namespace pvint {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Equal-time Pearson correlation of the rows of `z`, with time averages taken
/// over the full record. The result is exactly symmetric with a unit diagonal.
/// Throws InputError naming the row index of a zero-variance row.
template <typename Derived>
MatrixX<typename Derived::Scalar> correlation(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = z.rows();
  const Eigen::Index len = z.cols();
  if (len < 2) throw InputError("correlation needs at least two samples");
  MatrixX<Scalar> centered = z.colwise() - z.rowwise().mean();
  VectorX<Scalar> scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar var = centered.row(i).squaredNorm() / static_cast<Scalar>(len);
    if (!(var > Scalar(0))) {
      throw InputError("zero-variance row " + std::to_string(i));
    }
    scale(i) = Scalar(1) / std::sqrt(var * static_cast<Scalar>(len));
  }
  centered = scale.asDiagonal() * centered;
  MatrixX<Scalar> c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = Scalar(1);
    for (Eigen::Index j = 0; j < i; ++j) {
      const Scalar v = std::clamp(centered.row(i).dot(centered.row(j)), Scalar(-1), Scalar(1));
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

template <typename Scalar>
struct SymmetricEigen {
  VectorX<Scalar> values;   ///< descending
  MatrixX<Scalar> vectors;  ///< column k pairs with values(k); orthonormal
  int sweeps = 0;
  Scalar off_norm = 0;  ///< Frobenius norm of the off-diagonal part at exit
};

struct JacobiOptions {
  double tolerance = 1e-12;  ///< stop once the off-diagonal Frobenius norm drops below this
  int max_sweeps = 100;
};

/// Flips each column so its largest-magnitude component (first one on ties) is positive.
template <typename Scalar>
void normalize_signs(MatrixX<Scalar>& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, k)) > std::abs(vectors(best, k))) best = i;
    }
    if (vectors(best, k) < Scalar(0)) vectors.col(k) = -vectors.col(k);
  }
}

/// Cyclic Jacobi eigensolver for a dense real symmetric matrix.
///
/// Eigenvalues come back in non-increasing order; eigenvectors are sign
/// normalized, and runs of equal eigenvalues are ordered by descending
/// lexicographic eigenvector so the output is deterministic.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      const JacobiOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  if (n != input.cols()) throw InputError("eigen solver needs a square matrix");
  MatrixX<Scalar> a = input;
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);

  auto off_norm = [&] {
    Scalar s = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) s += a(i, j) * a(i, j);
    return std::sqrt(Scalar(2) * s);
  };

  SymmetricEigen<Scalar> out;
  Scalar off = off_norm();
  const auto tol = static_cast<Scalar>(options.tolerance);
  while (off >= tol) {
    if (out.sweeps == options.max_sweeps) {
      throw NumericalError("Jacobi eigensolver did not converge: off-diagonal norm " +
                           std::to_string(static_cast<double>(off)) + " after " +
                           std::to_string(out.sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++out.sweeps;
    off = off_norm();
  }
  out.off_norm = off;

  normalize_signs(v);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });
  // Order runs of tied eigenvalues by eigenvector, lexicographically descending.
  auto lex_greater = [&](Eigen::Index x, Eigen::Index y) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v(i, x) != v(i, y)) return v(i, x) > v(i, y);
    }
    return false;
  };
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo + 1;
    const Scalar ref = a(order[lo], order[lo]);
    const Scalar tie = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                       std::max(Scalar(1), std::abs(ref));
    while (hi < order.size() && ref - a(order[hi], order[hi]) <= tie) ++hi;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
                     order.begin() + static_cast<std::ptrdiff_t>(hi), lex_greater);
    lo = hi;
  }
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Marchenko-Pastur support for the ratio Q = L / N.
struct MpBounds {
  double q = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

[[nodiscard]] MpBounds mp_bounds(double q);
[[nodiscard]] MpBounds mp_bounds(Eigen::Index n_sites, Eigen::Index n_samples);

/// Marchenko-Pastur eigenvalue density for unit-variance noise; 0 outside the
/// support. Throws InputError when q <= 1.
[[nodiscard]] double mp_density(double lambda, double q);

/// Probability mass of the density on [a, b], computed in closed form.
[[nodiscard]] double mp_mass(double a, double b, double q);

struct CorrelationMatrix {
  std::vector<std::string> sites;
  Eigen::MatrixXd entries;

  [[nodiscard]] Eigen::Index dim() const { return entries.rows(); }
};

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   ///< descending
  Eigen::MatrixXd eigenvectors;  ///< column k is mode k
  Eigen::Index samples = 0;
  double q_ratio = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int sweeps = 0;
  double off_norm = 0.0;

  [[nodiscard]] Eigen::Index dim() const { return eigenvalues.size(); }
};

/// Genuine (top modes) and random (remaining modes) parts of a correlation matrix.
struct CorrelationSplit {
  Eigen::MatrixXd genuine;
  Eigen::MatrixXd random;
  Eigen::Index n_genuine = 0;
};

struct ModeProjection {
  Eigen::MatrixXd coefficients;   ///< n_genuine x L, a_k(t) = <k|z(t)>
  Eigen::MatrixXd reconstructed;  ///< N x L, sum of retained modes
};

[[nodiscard]] CorrelationMatrix correlation_matrix(const DetrendedSeries& series);

[[nodiscard]] EigenDecomposition eigen_decompose(const CorrelationMatrix& c,
                                                 Eigen::Index n_samples,
                                                 const JacobiOptions& options = {});

/// Number of eigenvalues strictly above lambda_max.
[[nodiscard]] Eigen::Index count_genuine(const EigenDecomposition& decomp);

[[nodiscard]] CorrelationSplit split_correlation(const EigenDecomposition& decomp,
                                                 Eigen::Index n_genuine);

[[nodiscard]] ModeProjection project_modes(const DetrendedSeries& series,
                                           const EigenDecomposition& decomp,
                                           Eigen::Index n_genuine);
[[nodiscard]] ModeProjection project_modes(const Eigen::MatrixXd& z,
                                           const EigenDecomposition& decomp,
                                           Eigen::Index n_genuine);

struct Histogram {
  double bin_width = 0.1;
  std::vector<double> bin_left;
  std::vector<double> density;  ///< count / (total * bin_width)
};

/// Bins start at floor(min / width) * width.
[[nodiscard]] Histogram eigen_histogram(const Eigen::VectorXd& eigenvalues, double bin_width = 0.1);

}  // namespace pvint
