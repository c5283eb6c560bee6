#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

/// O(L^2) direct transform high-pass: bins whose period L*dt/min(k, L-k)
/// exceeds the cutoff (and the zero bin) are dropped before the direct inverse.
inline std::vector<double> dft_highpass(const std::vector<double>& x, double dt, double cutoff) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> spec(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      s += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    const auto f = static_cast<double>(std::min(k, n - k));
    const bool keep = f > 0.0 && static_cast<double>(n) * dt / f <= cutoff * (1.0 + 1e-12);
    spec[k] = keep ? s : 0.0;
  }
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      s += spec[k] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[t] = s.real() / static_cast<double>(n);
  }
  return out;
}

}  // namespace oracle
