#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include "perbif/family.hpp"

namespace oracle {

using perbif::cplx;
using perbif::PolynomialMap;
using mp = boost::multiprecision::cpp_complex_50;

// Ascending coefficients of P^n(z) - z expanded in 50-digit arithmetic.
inline std::vector<mp> iterate_expansion(const PolynomialMap& map, int n) {
  std::vector<mp> P;
  for (cplx c : map.coeffs()) P.emplace_back(c.real(), c.imag());
  std::vector<mp> acc = {mp(0), mp(1)};  // z
  for (int k = 0; k < n; ++k) {
    // Horner: P(acc) = (...(b_d acc + b_{d-1}) acc + ...) + b_0
    std::vector<mp> r = {P.back()};
    for (int j = static_cast<int>(P.size()) - 2; j >= 0; --j) {
      std::vector<mp> t(r.size() + acc.size() - 1, mp(0));
      for (std::size_t x = 0; x < r.size(); ++x)
        for (std::size_t y = 0; y < acc.size(); ++y) t[x + y] += r[x] * acc[y];
      t[0] += P[j];
      r = std::move(t);
    }
    acc = std::move(r);
  }
  acc[1] -= mp(1);
  return acc;
}

// All roots by Aberth iteration at 50 digits.
inline std::vector<cplx> oracle_roots(const std::vector<mp>& a) {
  const int D = static_cast<int>(a.size()) - 1;
  std::vector<mp> z(D);
  for (int k = 0; k < D; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.25) / D;
    z[k] = mp(3.0 * std::cos(th), 3.0 * std::sin(th));
  }
  for (int it = 0; it < 2000; ++it) {
    double worst = 0.0;
    for (int k = 0; k < D; ++k) {
      mp p = a[D], dp = 0;
      for (int j = D - 1; j >= 0; --j) {
        dp = dp * z[k] + p;
        p = p * z[k] + a[j];
      }
      const mp ratio = p / dp;
      mp s = 0;
      for (int j = 0; j < D; ++j)
        if (j != k) s += mp(1) / (z[k] - z[j]);
      const mp step = ratio / (mp(1) - ratio * s);
      z[k] -= step;
      worst = std::max(worst, static_cast<double>(abs(step)));
    }
    if (worst < 1e-40) break;
  }
  std::vector<cplx> out;
  for (const auto& x : z) out.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  return out;
}

// Greedy multiset match: every expected value has a distinct partner within tol.
inline bool multiset_close(std::vector<cplx> got, std::vector<cplx> want, double tol) {
  if (got.size() != want.size()) return false;
  for (cplx w : want) {
    auto best = got.end();
    double bd = tol;
    for (auto it = got.begin(); it != got.end(); ++it)
      if (std::abs(*it - w) <= bd * std::max(1.0, std::abs(w))) {
        bd = std::abs(*it - w) / std::max(1.0, std::abs(w));
        best = it;
      }
    if (best == got.end()) return false;
    got.erase(best);
  }
  return true;
}

}  // namespace oracle
