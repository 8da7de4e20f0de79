#pragma once

#include <vector>

#include "perbif/family.hpp"

namespace perbif::detail {

/// F(z) = P^n(z) - z and its derivatives, evaluated by iterating the map.
struct IterateEval {
  cplx F{0.0};
  cplx dF{0.0};
  cplx ddF{0.0};  // only with want_second
  cplx dFs{0.0};  // only with a parameter direction
  cplx newton{0.0};  // F / dF
  bool huge = false;  // orbit overflowed; only `newton` is meaningful
};

struct IterateRequest {
  bool want_second = false;
  /// Coefficient derivative along the parameter direction (nullptr: skip).
  const std::vector<cplx>* dcoeffs = nullptr;
};

IterateEval iterate(const PolynomialMap& map, cplx z, int n, const IterateRequest& req = {});

/// Multiplier-style derivative of P^m at z by the chain rule along the orbit.
cplx iterate_derivative(const PolynomialMap& map, cplx z, int m);

/// Winding number of F_n = P^n(z) - z around the circle |z - center| = radius,
/// i.e. the number of level-n periodic points in the disc with multiplicity.
/// Returns -1 if the argument could not be resolved.
int local_multiplicity(const PolynomialMap& map, cplx center, double radius, int n);

inline double scale_of(cplx z) { return std::max(1.0, std::abs(z)); }

}  // namespace perbif::detail
