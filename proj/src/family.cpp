#include "perbif/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "perbif/poly_roots.hpp"

namespace perbif {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Forward-mode derivative carrier for the coefficient map.
struct Dual {
  cplx v;
  cplx e;
};
Dual operator+(Dual x, Dual y) { return {x.v + y.v, x.e + y.e}; }
Dual operator*(Dual x, Dual y) { return {x.v * y.v, x.v * y.e + x.e * y.v}; }
Dual operator*(double s, Dual x) { return {s * x.v, s * x.e}; }

template <class S>
std::vector<S> coefficients_impl(int d, const std::vector<S>& c, S a, S one, S zero) {
  // sigma_i(c) via the product expansion of prod_k (z + c_k).
  std::vector<S> sigma(d - 1, zero);
  sigma[0] = one;
  for (std::size_t k = 0; k < c.size(); ++k)
    for (std::size_t i = k + 1; i >= 1; --i) sigma[i] = sigma[i] + c[k] * sigma[i - 1];

  std::vector<S> out(d + 1, zero);
  for (int j = 2; j <= d; ++j) {
    const double sign = ((d - j) % 2 == 0) ? 1.0 : -1.0;
    out[j] = (sign / j) * sigma[d - j];
  }
  S ad = one;
  for (int k = 0; k < d; ++k) ad = ad * a;
  out[0] = ad;
  return out;
}

}  // namespace

ParamPoint ParamPoint::make(int d, std::vector<cplx> c, cplx a) {
  ParamPoint p;
  p.d = d;
  p.c = std::move(c);
  p.a = a;
  p.validate();
  return p;
}

ParamPoint ParamPoint::quadratic(cplx a) { return make(2, {}, a); }

void ParamPoint::validate() const {
  if (d < 2) throw std::invalid_argument("ParamPoint: degree must be >= 2");
  if (static_cast<int>(c.size()) != d - 2)
    throw std::invalid_argument("ParamPoint: expected " + std::to_string(d - 2) +
                                " critical parameters, got " + std::to_string(c.size()));
  if (!finite(a)) throw std::invalid_argument("ParamPoint: non-finite a");
  for (cplx ck : c)
    if (!finite(ck)) throw std::invalid_argument("ParamPoint: non-finite c_k");
}

double ParamPoint::norm() const {
  double m = std::abs(a);
  for (cplx ck : c) m = std::max(m, std::abs(ck));
  return m;
}

ParamPoint ParamPoint::scaled(cplx t) const {
  ParamPoint p = *this;
  for (cplx& ck : p.c) ck *= t;
  p.a *= t;
  return p;
}

ParamPoint ParamPoint::shifted(const ParamPoint& direction, cplx t) const {
  if (direction.d != d || direction.c.size() != c.size())
    throw std::invalid_argument("ParamPoint::shifted: degree mismatch");
  ParamPoint p = *this;
  for (std::size_t k = 0; k < c.size(); ++k) p.c[k] += t * direction.c[k];
  p.a += t * direction.a;
  return p;
}

std::vector<cplx> map_coefficients(const ParamPoint& p) {
  return coefficients_impl<cplx>(p.d, p.c, p.a, cplx(1.0), cplx(0.0));
}

std::vector<cplx> map_coefficient_derivative(const ParamPoint& p,
                                             const ParamPoint& direction) {
  if (direction.d != p.d || direction.c.size() != p.c.size())
    throw std::invalid_argument("map_coefficient_derivative: degree mismatch");
  std::vector<Dual> c(p.c.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = {p.c[k], direction.c[k]};
  const auto dual = coefficients_impl<Dual>(p.d, c, Dual{p.a, direction.a},
                                            Dual{1.0, 0.0}, Dual{0.0, 0.0});
  std::vector<cplx> out(dual.size());
  for (std::size_t j = 0; j < dual.size(); ++j) out[j] = dual[j].e;
  return out;
}

PolynomialMap::PolynomialMap(const ParamPoint& p) : d_(p.d), param_(p) {
  p.validate();
  coeffs_ = map_coefficients(p);
  dcoeffs_.resize(d_);
  for (int j = 1; j <= d_; ++j) dcoeffs_[j - 1] = static_cast<double>(j) * coeffs_[j];
  ddcoeffs_.resize(d_ - 1);
  for (int j = 1; j < d_; ++j) ddcoeffs_[j - 1] = static_cast<double>(j) * dcoeffs_[j];
  crit_.reserve(d_ - 1);
  crit_.push_back(0.0);
  crit_.insert(crit_.end(), p.c.begin(), p.c.end());
}

PolynomialMap build_map(const ParamPoint& p) { return PolynomialMap(p); }

OrbitRecord eval_orbit(const PolynomialMap& map, cplx z0, int m,
                       const EscapeOptions& escape) {
  if (m < 0) throw std::invalid_argument("eval_orbit: negative iteration count");
  OrbitRecord rec;
  rec.points.reserve(static_cast<std::size_t>(m) + 1);
  cplx z = z0;
  rec.points.push_back(z);
  for (int i = 0;; ++i) {
    if (std::abs(z - escape.center) > escape.radius || std::abs(z) > kLogMagnitudeSwitch) {
      rec.escaped = true;
      rec.escape_index = i;
      break;
    }
    if (i == m) break;
    cplx p, dp;
    map.eval(z, p, dp);
    const double ad = std::abs(dp);
    rec.deriv_log_abs += ad == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(ad);
    z = p;
    rec.points.push_back(z);
  }
  return rec;
}

cplx alpha(const ParamPoint& p, int i) {
  if (i < 0 || i > p.d - 2) throw std::out_of_range("alpha: critical index out of range");
  const auto coeffs = map_coefficients(p);
  const cplx ci = i == 0 ? cplx(0.0) : p.c[i - 1];
  cplx v = coeffs[p.d];
  for (int j = p.d - 1; j >= 0; --j) v = v * ci + coeffs[j];
  return v;
}

cplx delta(const ParamPoint& p) {
  cplx s = 0.0;
  for (cplx ck : p.c) s += ck;
  return s / static_cast<double>(p.d - 1);
}

std::vector<cplx> infinity_normal_form(const ParamPoint& p) {
  const double nrm = p.norm();
  if (nrm == 0.0) throw std::invalid_argument("infinity_normal_form: parameter is zero");
  const ParamPoint unit = p.scaled(1.0 / nrm);
  std::vector<cplx> out(p.d - 1);
  for (int i = 0; i <= p.d - 2; ++i) out[i] = alpha(unit, i);
  return out;
}

double periodic_point_bound(const PolynomialMap& map) {
  // Smallest r with r^{d-1}/d - sum_{j=2}^{d-1} |b_j| r^{j-1} - |b_0|/r >= 1;
  // beyond it |P(z)|/|z| > 1 and increasing in |z|.
  const int d = map.degree();
  const auto& b = map.coeffs();
  auto ratio = [&](double r) {
    double v = std::pow(r, d - 1) / d - std::abs(b[0]) / r;
    for (int j = 2; j < d; ++j) v -= std::abs(b[j]) * std::pow(r, j - 1);
    return v;
  };
  double hi = 1.0;
  while (ratio(hi) < 1.0) hi *= 2.0;
  double lo = hi / 2.0;
  if (ratio(lo) >= 1.0) lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) >= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

std::vector<cplx> preimages(const PolynomialMap& map, cplx target) {
  std::vector<cplx> shifted = map.coeffs();
  shifted[0] -= target;
  auto roots = polynomial_roots(shifted);
  for (cplx& z : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx p, dp;
      map.eval(z, p, dp);
      if (dp == 0.0) break;
      const cplx step = (p - target) / dp;
      z -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
  }
  return roots;
}

}  // namespace perbif
