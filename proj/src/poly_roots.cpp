#include "perbif/poly_roots.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace perbif {

using cplx = std::complex<double>;

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, int max_iter) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) throw std::invalid_argument("polynomial_roots: degree must be >= 1");
  if (coeffs[deg] == 0.0)
    throw std::invalid_argument("polynomial_roots: vanishing leading coefficient");

  std::vector<cplx> monic(coeffs.begin(), coeffs.end());
  for (auto& c : monic) c /= coeffs[deg];
  if (deg == 1) return {-monic[0]};

  // Fujiwara bound for the starting circle.
  double bound = 0.0;
  for (int j = 0; j < deg; ++j) {
    const double b = std::pow(std::abs(monic[j]), 1.0 / (deg - j));
    bound = std::max(bound, b);
  }
  bound = 2.0 * std::max(bound, 1e-300);

  std::vector<cplx> z(deg);
  for (int k = 0; k < deg; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.25) / deg + 0.4;
    z[k] = std::polar(0.5 * bound, th);
  }

  auto eval = [&](cplx x, cplx& p, cplx& dp) {
    p = monic[deg];
    dp = 0.0;
    for (int j = deg - 1; j >= 0; --j) {
      dp = dp * x + p;
      p = p * x + monic[j];
    }
  };

  for (int it = 0; it < max_iter; ++it) {
    double max_step = 0.0;
    for (int k = 0; k < deg; ++k) {
      cplx p, dp;
      eval(z[k], p, dp);
      if (p == 0.0) continue;
      const cplx ratio = p / dp;
      cplx s = 0.0;
      for (int j = 0; j < deg; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    if (max_step < 1e-15) break;
  }
  return z;
}

}  // namespace perbif
