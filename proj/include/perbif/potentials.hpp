#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "perbif/cycles.hpp"
#include "perbif/family.hpp"

namespace perbif {

/// log of a complex number kept as (ln|.|, arg) so products never overflow.
struct LogComplex {
  double log_abs = 0.0;  // may be -inf
  double arg = 0.0;      // in (-pi, pi]

  LogComplex& operator+=(const LogComplex& o);
};

/// sum_j log(w - w_{n,j}) over the spectrum, i.e. log p_n(lambda, w).
LogComplex p_n_log(const MultiplierSpectrum& s, cplx w);
LogComplex p_n_log(std::span<const cplx> values, cplx w);

/// d^{-n} ln|p_n(w)|
double L_n(const MultiplierSpectrum& s, cplx w, int d, int n);
/// d^{-n} sum_j ln+|w - w_{n,j}|
double L_n_plus(const MultiplierSpectrum& s, cplx w, int d, int n);
/// Circle average of L_n over |w| = r in closed form: d^{-n} sum_j ln max(|w_{n,j}|, r).
double L_n_r(const MultiplierSpectrum& s, double r, int d, int n);

struct GreenOptions {
  int depth = 400;
  /// slack added to ln+ norm(lambda) in the escape radius
  double c0 = 3.0;
  /// iterations past escape before the tail is read off
  int tail_steps = 5;
};

enum class GreenStatus { escaped, bounded, undecided };

struct GreenResult {
  double value = 0.0;  // NaN when undecided
  GreenStatus status = GreenStatus::undecided;
  int escape_index = -1;
};

class Undecided : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ln of the radius around delta(lambda) beyond which orbits escape:
/// ln 4 + max(g_hat, ln+ norm + c0).
double log_escape_radius(const PolynomialMap& map, const GreenOptions& opts,
                         double g_hat = -std::numeric_limits<double>::infinity());

GreenResult green_eval(const PolynomialMap& map, cplx z, const GreenOptions& opts = {});
/// Green function value; throws Undecided when the orbit is not resolved.
double green(const PolynomialMap& map, cplx z, const GreenOptions& opts = {});

/// max of the Green function over the marked critical points.
GreenResult G_cap_eval(const PolynomialMap& map, const GreenOptions& opts = {});
double G_cap(const PolynomialMap& map, const GreenOptions& opts = {});

enum class LyapunovMethod { repelling_cycles, equilibrium_measure, critical_green };

struct LyapunovEstimate {
  double value = 0.0;
  LyapunovMethod method = LyapunovMethod::repelling_cycles;
  int order = 0;  // level n, sample depth, or Green depth
  double error_hint = 0.0;
};

/// d^{-n} sum over repelling exact-period-n cycles of ln|rho|.
LyapunovEstimate lyapunov_repelling(const PolynomialMap& map, int n,
                                    const SolverOptions& opts = {});
LyapunovEstimate lyapunov_from_cycles(std::span<const CycleRecord> cycles, int d, int n);

/// Backward-orbit Monte Carlo estimate of the integral of ln|P'| against the
/// equilibrium measure. Each of `samples` chains starts on a circle outside
/// the filled Julia set, discards depth/2 pullbacks and averages ln|P'| over
/// the remaining ones. Deterministic given the seed.
LyapunovEstimate lyapunov_measure(const PolynomialMap& map, int samples, int depth,
                                  std::uint64_t seed);

/// ln d + sum of g over the critical points; throws Undecided.
LyapunovEstimate lyapunov_critical_green(const PolynomialMap& map,
                                         const GreenOptions& opts = {});

}  // namespace perbif
