#pragma once

#include <optional>
#include <span>
#include <vector>

#include "perbif/cycles.hpp"

namespace perbif::detail {

/// Result of grouping raw root candidates into certified periodic points.
struct Certified {
  std::vector<PeriodicPoint> clusters;  // sorted by lex_less
  long long total = 0;                  // sum of multiplicities
  bool complete = false;
  std::vector<int> cluster_of;          // candidate -> cluster, -1 if rejected
  std::vector<char> overclaimed;        // per cluster: more candidates than roots
};

long long level_degree(int d, int n);

/// Newton polish of F = P^n - z; stops once the step is at rounding level.
cplx polish(const PolynomialMap& map, cplx z, int n, int max_iter = 60);

bool accept_residual(const PolynomialMap& map, cplx z, int n, const SolverOptions& opts);

Certified certify(const PolynomialMap& map, int n, std::span<const cplx> candidates,
                  const SolverOptions& opts);

/// Periodic points of z^d/d (the family at parameter 0), closed form.
std::vector<cplx> power_map_periodic_points(int d, int n);

struct TrackOptions {
  double alpha_max = 0.05;
  double h_init = 1.0;
  double h_max = 1.0;
  double h_min = 1e-10;
  long long max_steps = 200000;
  /// path from -> to is  from + (s + i*bend*s*(1-s)) * (to - from)
  double bend = 0.0;
};

/// Moves every root of F at `from` to a root at `to` by predictor-corrector
/// path tracking; `ok[i]` is false if path i stalled.
struct TrackResult {
  std::vector<cplx> z;
  std::vector<char> ok;
};
TrackResult track_roots(const ParamPoint& from, const ParamPoint& to,
                        std::span<const cplx> start, int n, const TrackOptions& topt,
                        std::span<const int> subset = {});

/// Complete root set continued from `from` to `to`, re-tracking suspicious
/// paths with tighter step control. Raw per-path endpoints are kept so the
/// caller can continue tracking from them.
struct Continued {
  std::vector<cplx> raw;
  Certified cert;
};
Continued continue_roots(const ParamPoint& from, const ParamPoint& to,
                                        std::span<const cplx> start, int n,
                                        const SolverOptions& opts, double bend = 0.0,
                                        double h_init = 1.0);

/// Full solve by continuation from the power map at parameter 0.
Continued solve_by_continuation(const PolynomialMap& map, int n, const SolverOptions& opts);

/// Full solve by Newton's method from a circle of starting points.
Certified solve_by_newton(const PolynomialMap& map, int n, const SolverOptions& opts);

}  // namespace perbif::detail
