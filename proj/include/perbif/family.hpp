#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace perbif {

using cplx = std::complex<double>;

/// A parameter (c_1..c_{d-2}, a) of the critically marked family of degree d.
/// c_0 = 0 is implicit.
struct ParamPoint {
  int d = 2;
  std::vector<cplx> c;
  cplx a{0.0, 0.0};

  /// Validating constructor: length(c) == d - 2, all components finite.
  static ParamPoint make(int d, std::vector<cplx> c, cplx a);
  /// Degree-2 shorthand.
  static ParamPoint quadratic(cplx a);

  /// max(|a|, |c_k|)
  double norm() const;
  void validate() const;

  /// t * this (used for rays and homogeneity checks).
  ParamPoint scaled(cplx t) const;
  /// this + t * direction, direction read as a displacement of the same degree.
  ParamPoint shifted(const ParamPoint& direction, cplx t) const;
  bool operator==(const ParamPoint&) const = default;
};

/// Coefficients of P_{c,a}, ascending powers, together with the
/// derivative coefficients used by Horner evaluation of P'.
class PolynomialMap {
 public:
  explicit PolynomialMap(const ParamPoint& p);

  int degree() const { return d_; }
  const ParamPoint& param() const { return param_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  /// (0, c_1, ..., c_{d-2})
  const std::vector<cplx>& critical_points() const { return crit_; }

  cplx operator()(cplx z) const {
    cplx p = coeffs_[d_];
    for (int j = d_ - 1; j >= 0; --j) p = p * z + coeffs_[j];
    return p;
  }
  cplx derivative(cplx z) const {
    cplx p = dcoeffs_[d_ - 1];
    for (int j = d_ - 2; j >= 0; --j) p = p * z + dcoeffs_[j];
    return p;
  }
  cplx second_derivative(cplx z) const {
    cplx p = ddcoeffs_[d_ - 2];
    for (int j = d_ - 3; j >= 0; --j) p = p * z + ddcoeffs_[j];
    return p;
  }
  /// P(z) and P'(z) in one pass.
  void eval(cplx z, cplx& p, cplx& dp) const {
    p = coeffs_[d_];
    dp = 0.0;
    for (int j = d_ - 1; j >= 0; --j) {
      dp = dp * z + p;
      p = p * z + coeffs_[j];
    }
  }

 private:
  int d_;
  ParamPoint param_;
  std::vector<cplx> coeffs_;
  std::vector<cplx> dcoeffs_;
  std::vector<cplx> ddcoeffs_;
  std::vector<cplx> crit_;
};

PolynomialMap build_map(const ParamPoint& p);

/// Ascending coefficients of P_{c,a}.
std::vector<cplx> map_coefficients(const ParamPoint& p);
/// d/dt of the coefficients of P at p + t*direction, evaluated at t = 0.
std::vector<cplx> map_coefficient_derivative(const ParamPoint& p,
                                             const ParamPoint& direction);

struct EscapeOptions {
  double radius = std::numeric_limits<double>::infinity();
  cplx center{0.0, 0.0};
};

/// Orbits whose modulus passes this bound are treated as escaped whatever
/// the radius in EscapeOptions.
inline constexpr double kLogMagnitudeSwitch = 1e100;

struct OrbitRecord {
  std::vector<cplx> points;
  /// sum of ln|P'(z_i)| over the non-escaped points; -inf if one is critical
  double deriv_log_abs = 0.0;
  bool escaped = false;
  std::optional<int> escape_index;
};

OrbitRecord eval_orbit(const PolynomialMap& map, cplx z0, int m,
                       const EscapeOptions& escape = {});

/// alpha_i(c, a) = P_{c,a}(c_i), 0 <= i <= d-2.
cplx alpha(const ParamPoint& p, int i);
/// (sum_k c_k) / (d - 1)
cplx delta(const ParamPoint& p);
/// (alpha_0, ..., alpha_{d-2}) at p / norm(p); throws for p == 0.
std::vector<cplx> infinity_normal_form(const ParamPoint& p);

/// Radius outside of which every orbit of the map increases strictly in
/// modulus; all periodic points lie in the closed disc of this radius.
double periodic_point_bound(const PolynomialMap& map);

/// All d roots of P(z) = target (Aberth iteration on the shifted
/// coefficients, polished by Newton on P itself).
std::vector<cplx> preimages(const PolynomialMap& map, cplx target);

}  // namespace perbif
