#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "perbif/arith.hpp"
#include "perbif/cycles.hpp"
#include "oracles/expansion.hpp"

using namespace perbif;
using oracle::mp;
using oracle::iterate_expansion;
using oracle::multiset_close;
using oracle::oracle_roots;

namespace {

std::vector<cplx> expanded(const std::vector<PeriodicPoint>& pts) {
  std::vector<cplx> out;
  for (const auto& p : pts)
    for (int k = 0; k < p.multiplicity; ++k) out.push_back(p.z);
  return out;
}

ParamPoint random_param(std::mt19937_64& rng, int d, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<cplx> c;
  for (int k = 0; k < d - 2; ++k) c.emplace_back(u(rng), u(rng));
  return ParamPoint::make(d, c, cplx(u(rng), u(rng)));
}

long long level_total(const std::vector<PeriodicPoint>& pts) {
  long long s = 0;
  for (const auto& p : pts) s += p.multiplicity;
  return s;
}

}  // namespace

TEST_CASE("power map spectra") {
  const PolynomialMap m(ParamPoint::quadratic(0.0));
  const auto s1 = multiplier_spectrum(m, 1);
  REQUIRE(s1.lambda_values.size() == 2);
  CHECK(std::abs(s1.lambda_values[0]) < 1e-12);
  CHECK(std::abs(s1.lambda_values[1] - 2.0) < 1e-12);
  const auto s2 = multiplier_spectrum(m, 2);
  REQUIRE(s2.lambda_values.size() == 1);
  CHECK(std::abs(s2.lambda_values[0] - 4.0) < 1e-12);
  // z^3/3: repelling multipliers 3^n, one per cycle
  const PolynomialMap m3(ParamPoint::make(3, {0.0}, 0.0));
  const auto s3 = multiplier_spectrum(m3, 3);
  CHECK(s3.lambda_values.size() == static_cast<std::size_t>(dynatomic_count(3, 3).n_cycles));
  for (cplx w : s3.lambda_values) CHECK(std::abs(w - 27.0) < 1e-9);
}

TEST_CASE("periodic points match a 50-digit expansion oracle") {
  std::mt19937_64 rng(17);
  for (int d : {2, 3}) {
    const int nmax = 4;
    for (int n = 1; n <= nmax; ++n)
      for (int trial = 0; trial < (d == 2 ? 4 : 2); ++trial) {
        const PolynomialMap m(random_param(rng, d, 1.0));
        const auto pts = periodic_points(m, n);
        const auto want = oracle_roots(iterate_expansion(m, n));
        INFO("d=" << d << " n=" << n);
        CHECK(level_total(pts) == static_cast<long long>(want.size()));
        CHECK(multiset_close(expanded(pts), want, 1e-6));
      }
  }
}

TEST_CASE("multipliers are invariant under the conjugacy to u^2 + c") {
  // z = 2u sends z^2/2 + a^2 to u^2 + a^2/2; spectra of u^2 + c come from the
  // 50-digit expansion of its iterates
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    const cplx a(u(rng), u(rng));
    const PolynomialMap m(ParamPoint::quadratic(a));
    const auto spec = multiplier_spectrum(m, n);
    const cplx c = a * a / 2.0;
    // roots of the u^2 + c iterate, multipliers by the chain rule
    std::vector<mp> coeff = {mp(0), mp(1)};
    for (int k = 0; k < n; ++k) {
      std::vector<mp> sq(2 * coeff.size() - 1, mp(0));
      for (std::size_t x = 0; x < coeff.size(); ++x)
        for (std::size_t y = 0; y < coeff.size(); ++y) sq[x + y] += coeff[x] * coeff[y];
      sq[0] += mp(c.real(), c.imag());
      coeff = std::move(sq);
    }
    coeff[1] -= mp(1);
    const auto roots = oracle_roots(coeff);
    std::vector<cplx> want;
    for (cplx z : roots) {
      // keep exact period n
      cplx w = z;
      int period = 0;
      for (int k = 1; k <= n; ++k) {
        w = w * w + c;
        if (std::abs(w - z) < 1e-8) {
          period = k;
          break;
        }
      }
      if (period != n) continue;
      cplx rho = 1.0;
      w = z;
      for (int k = 0; k < n; ++k) {
        rho *= 2.0 * w;
        w = w * w + c;
      }
      want.push_back(rho);
    }
    // each cycle appears n times among the roots
    std::sort(want.begin(), want.end(), lex_less);
    std::vector<cplx> cycles;
    for (std::size_t k = 0; k < want.size(); k += n) cycles.push_back(want[k]);
    INFO("n=" << n);
    REQUIRE(spec.lambda_values.size() == cycles.size());
    CHECK(multiset_close(spec.lambda_values, cycles, 1e-6));
  }
}

TEST_CASE("level totals are d^n") {
  std::mt19937_64 rng(29);
  for (int n = 1; n <= 10; ++n) {
    const PolynomialMap m(random_param(rng, 2, 1.0));
    CHECK(level_total(periodic_points(m, n)) == (1LL << n));
  }
  for (int n = 1; n <= 6; ++n) {
    const PolynomialMap m(random_param(rng, 3, 1.0));
    long long D = 1;
    for (int k = 0; k < n; ++k) D *= 3;
    CHECK(level_total(periodic_points(m, n)) == D);
  }
}

TEST_CASE("cycles partition the level set") {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 6; ++n) {
    const PolynomialMap m(random_param(rng, 2, 1.0));
    const auto pts = periodic_points(m, n);
    const auto cycles = classify_cycles(pts, m, n);
    long long total = 0;
    for (const auto& c : cycles) {
      CHECK(n % c.exact_period == 0);
      CHECK(static_cast<int>(c.points.size()) == c.exact_period);
      total += static_cast<long long>(c.exact_period) * c.multiplicity;
      // multiplier is the product of P' along the orbit
      CHECK(std::abs(c.multiplier - orbit_derivative(m, c.representative, c.exact_period)) <
            1e-8 * (1.0 + std::abs(c.multiplier)));
    }
    CHECK(total == (1LL << n));
  }
}

TEST_CASE("spectrum sizes at generic parameters") {
  std::mt19937_64 rng(37);
  for (int n = 1; n <= 8; ++n)
    for (int trial = 0; trial < 3; ++trial) {
      const PolynomialMap m(random_param(rng, 2, 1.0));
      const auto s = multiplier_spectrum(m, n);
      CHECK(s.generic);
      CHECK(static_cast<long long>(s.lambda_values.size()) == dynatomic_count(2, n).n_cycles);
      CHECK(std::is_sorted(s.lambda_values.begin(), s.lambda_values.end(), lex_less));
    }
}

TEST_CASE("parabolic parameter: root of unity multiplier counted at the lower level") {
  // a^2 = -3/2 maps to c = -3/4 where the fixed point has multiplier -1 and
  // collides with the 2-cycle
  const PolynomialMap m(ParamPoint::quadratic(cplx(0.0, std::sqrt(1.5))));
  const auto s = multiplier_spectrum(m, 2);
  CHECK(s.lambda_values.size() == 1);
  CHECK(std::abs(s.lambda_values[0] - 1.0) < 1e-5);
  const auto pts = periodic_points(m, 2);
  CHECK(level_total(pts) == 4);
}

TEST_CASE("attracting cycles never exceed d - 1") {
  std::mt19937_64 rng(41);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const PolynomialMap m(random_param(rng, d, 1.0));
      int attracting = 0;
      for (int n = 1; n <= (d == 2 ? 6 : 4); ++n) {
        const auto cyc = classify_cycles(periodic_points(m, n), m, n);
        for (const auto& c : cyc)
          if (c.exact_period == n && std::abs(c.multiplier) < 1.0) ++attracting;
      }
      CHECK(attracting <= d - 1);
    }
  }
}

TEST_CASE("solver limits") {
  const PolynomialMap m(ParamPoint::quadratic(0.3));
  SolverOptions o;
  o.max_degree = 64;
  CHECK_THROWS(periodic_points(m, 7, o));
  CHECK_THROWS(periodic_points(m, 0));
}
