#pragma once

#include <cmath>
#include <numbers>

namespace oracle {

/// Integral of f over [a, b] after the substitution x = a + (b - a)(1 - cos u)/2,
/// which removes square-root endpoint singularities; composite Simpson in u.
template <typename F>
double integrate_endpoint_singular(F&& f, double a, double b, int panels = 4000) {
  const double h = std::numbers::pi / panels;
  auto g = [&](double u) {
    const double x = a + 0.5 * (b - a) * (1.0 - std::cos(u));
    return f(x) * 0.5 * (b - a) * std::sin(u);
  };
  double s = g(0.0) + g(std::numbers::pi);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * g(k * h);
  return s * h / 3.0;
}

/// Closed-form evaluation of the Marchenko-Pastur density for unit variance.
inline double mp_density(double x, double q) {
  const double lo = std::pow(1.0 - 1.0 / std::sqrt(q), 2);
  const double hi = std::pow(1.0 + 1.0 / std::sqrt(q), 2);
  if (x <= lo || x >= hi) return 0.0;
  return q / (2.0 * std::numbers::pi * x) * std::sqrt((hi - x) * (x - lo));
}

}  // namespace oracle
