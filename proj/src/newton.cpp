#include <cmath>
#include <numbers>

#include "iteration.hpp"
#include "solver.hpp"

namespace perbif::detail {

namespace {

// Newton orbit of F = P^n - z from one starting point; false if it does not
// settle within max_iter steps.
bool newton_orbit(const PolynomialMap& map, cplx& z, int n, long long max_iter) {
  for (long long it = 0; it < max_iter; ++it) {
    const auto ev = iterate(map, z, n);
    if (!ev.huge && ev.dF == 0.0) return false;
    const cplx step = ev.newton;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
    z -= step;
    if (std::abs(step) <= 1e-11 * scale_of(z)) {
      z = polish(map, z, n);
      return true;
    }
  }
  return false;
}

}  // namespace

Certified solve_by_newton(const PolynomialMap& map, int n, const SolverOptions& opts) {
  const long long D = level_degree(map.degree(), n);
  const double logD = std::log(static_cast<double>(D));
  const long long count =
      std::max<long long>(16, static_cast<long long>(std::ceil(opts.start_constant * D * logD * logD)));
  const double radius0 = 2.0 * periodic_point_bound(map);
  // the far-field phase contracts by about (1 - 1/D) per step
  const long long max_iter = 200 + 6 * D;
  constexpr int kBatches = 8;
  constexpr int kBatchOrder[kBatches] = {0, 4, 2, 6, 1, 5, 3, 7};

  std::vector<cplx> candidates;
  Certified cert;
  for (int round = 0; round < opts.max_rounds; ++round) {
    const double radius = radius0 * std::pow(1.25, round);
    const double offset = (0.13 + 0.37 * round) * 2.0 * std::numbers::pi / static_cast<double>(count);
    for (int b = 0; b < kBatches; ++b) {
      for (long long k = kBatchOrder[b]; k < count; k += kBatches) {
        cplx z = std::polar(radius, offset + 2.0 * std::numbers::pi * static_cast<double>(k) /
                                                 static_cast<double>(count));
        if (newton_orbit(map, z, n, max_iter)) candidates.push_back(z);
      }
      cert = certify(map, n, candidates, opts);
      if (cert.complete) return cert;
    }
  }
  return cert;
}

}  // namespace perbif::detail
