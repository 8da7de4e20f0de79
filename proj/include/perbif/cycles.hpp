#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "perbif/family.hpp"

namespace perbif {

enum class SolverMethod { automatic, newton, continuation };

struct SolverOptions {
  /// Upper bound on d^n accepted by periodic_points.
  long long max_degree = 1 << 14;
  double cluster_tol = 1e-7;
  double residual_tol = 1e-9;
  double root_of_unity_tol = 1e-6;
  int max_rounds = 3;
  bool include_infinity = false;
  SolverMethod method = SolverMethod::automatic;
  /// `automatic` uses Newton from the starting circle up to this d^n and
  /// parameter continuation from the power map above it.
  long long newton_max_degree = 256;
  /// Starting points per round: ceil(C * D * log^2 D).
  double start_constant = 1.2;
};

class IncompleteSolve : public std::runtime_error {
 public:
  IncompleteSolve(long long expected, long long found);
  long long expected() const { return expected_; }
  long long found() const { return found_; }
  long long shortfall() const { return expected_ - found_; }

 private:
  long long expected_;
  long long found_;
};

class AmbiguousGrouping : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PeriodicPoint {
  cplx z;
  int multiplicity = 1;
  /// radius of the disc used to count the multiplicity; 0 for simple roots
  double count_radius = 0.0;
};

struct CycleRecord {
  cplx representative;
  int exact_period = 1;
  std::vector<cplx> points;  // orbit order starting at the representative
  cplx multiplier;           // product of P' over the cycle points
  int multiplicity = 1;      // as a root of P^n(z) - z
  double count_radius = 0.0;
};

struct MultiplierSpectrum {
  int d = 2;
  int n = 1;
  /// w_{n,j}, repeated according to multiplicity, sorted by (real, imag)
  std::vector<cplx> lambda_values;
  ParamPoint source;
  bool generic = true;
};

/// All d^n solutions of P^n(z) = z with multiplicity, sorted by (real, imag).
std::vector<PeriodicPoint> periodic_points(const PolynomialMap& map, int n,
                                           const SolverOptions& opts = {});

/// Groups level-n periodic points into cycles with exact periods.
std::vector<CycleRecord> classify_cycles(std::span<const PeriodicPoint> points,
                                         const PolynomialMap& map, int n,
                                         const SolverOptions& opts = {});

/// Level-n multiplier multiset from already classified cycles.
MultiplierSpectrum spectrum_from_cycles(std::span<const CycleRecord> cycles,
                                        const PolynomialMap& map, int n,
                                        const SolverOptions& opts = {});

MultiplierSpectrum multiplier_spectrum(const PolynomialMap& map, int n,
                                       const SolverOptions& opts = {});

/// Chain-rule derivative of P^m at z.
cplx orbit_derivative(const PolynomialMap& map, cplx z, int m);

/// Strict weak order used everywhere for reproducible output.
inline bool lex_less(cplx x, cplx y) {
  return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
}

}  // namespace perbif
