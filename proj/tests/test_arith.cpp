#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "perbif/arith.hpp"

using namespace perbif;

namespace {

// Moebius values from a linear sieve.
std::vector<int> moebius_sieve(int n) {
  std::vector<int> mu(n + 1, 1), primes;
  std::vector<char> composite(n + 1, 0);
  mu[0] = 0;
  for (int i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (int p : primes) {
      if (static_cast<long long>(p) * i > n) break;
      composite[p * i] = 1;
      if (i % p == 0) {
        mu[p * i] = 0;
        break;
      }
      mu[p * i] = -mu[i];
    }
  }
  return mu;
}

// Points of exact period n of u -> u^d on the unit circle, counted by
// brute force over the (d^n - 1)-th roots of unity plus the fixed point 0.
count_t exact_period_points(int d, int n) {
  long long D = 1;
  for (int k = 0; k < n; ++k) D *= d;
  const long long m = D - 1;  // u = e^{2 pi i j / m}, j in [0, m)
  count_t count = (n == 1) ? 1 : 0;  // u = 0
  for (long long j = 0; j < m; ++j) {
    long long x = j;
    int period = 0;
    for (int k = 1; k <= n; ++k) {
      x = (x * d) % m;
      if (x == j) {
        period = k;
        break;
      }
    }
    if (period == n) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("moebius small values") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(2) == -1);
  CHECK(moebius(4) == 0);
  CHECK(moebius(6) == 1);
  CHECK(moebius(30) == -1);
  CHECK_THROWS_AS(moebius(0), std::invalid_argument);
}

TEST_CASE("moebius agrees with a sieve up to 10^4") {
  const auto mu = moebius_sieve(10000);
  for (int n = 1; n <= 10000; ++n) REQUIRE(moebius(n) == mu[n]);
}

TEST_CASE("moebius is multiplicative on coprime pairs") {
  for (std::uint64_t a = 1; a <= 60; ++a)
    for (std::uint64_t b = 1; b <= 60; ++b) {
      std::uint64_t x = a, y = b;
      while (y) {
        const auto t = x % y;
        x = y;
        y = t;
      }
      if (x == 1) CHECK(moebius(a * b) == moebius(a) * moebius(b));
    }
}

TEST_CASE("divisors") {
  CHECK(divisors(1) == std::vector<std::uint64_t>{1});
  CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(49) == std::vector<std::uint64_t>{1, 7, 49});
}

TEST_CASE("dynatomic counts for d = 2") {
  const long long nu[] = {2, 2, 6, 12, 30, 54, 126, 240};
  for (int n = 1; n <= 8; ++n) {
    const auto c = dynatomic_count(2, n);
    CHECK(c.nu == nu[n - 1]);
    if (n >= 2) CHECK(c.n_cycles * n == c.nu);
  }
  CHECK(dynatomic_count(2, 2).n_cycles == 1);
  CHECK(dynatomic_count(2, 3).n_cycles == 2);
  CHECK(dynatomic_count(3, 2).nu == 6);
  CHECK(dynatomic_count(3, 2).n_cycles == 3);
  CHECK(dynatomic_count(2, 1).n_cycles == 2);
}

TEST_CASE("dynatomic counts match brute-force exact-period points") {
  for (int d = 2; d <= 3; ++d)
    for (int n = 1; n <= (d == 2 ? 12 : 7); ++n) {
      // u^d has the extra fixed point 0 at n = 1, matching nu_d(1) = d
      CHECK(dynatomic_count(d, n).nu == exact_period_points(d, n));
    }
}

TEST_CASE("divisor sums of nu give d^n") {
  for (int d = 2; d <= 4; ++d)
    for (int n = 1; n <= 12; ++n) {
      count_t sum = 0;
      for (auto k : divisors(n)) sum += dynatomic_count(d, static_cast<int>(k)).nu;
      CHECK(sum == checked_pow(d, n));
    }
}

TEST_CASE("normalized cycle count trends to one") {
  // d^{-n} n N_d(n) = nu / d^n increases towards 1 along even and odd n
  for (int d = 2; d <= 4; ++d) {
    double prev = 0.0;
    for (int n = 2; n <= 16; n += 2) {
      const auto c = dynatomic_count(d, n);
      const double r = static_cast<double>(c.nu) / static_cast<double>(checked_pow(d, n));
      CHECK(r > prev);
      CHECK(r <= 1.0);
      prev = r;
    }
  }
}

TEST_CASE("wide counts and overflow detection") {
  const auto c = dynatomic_count(4, 24);
  CHECK(c.nu > 0);
  CHECK(c.nu % 24 == 0);
  CHECK(to_string(checked_pow(4, 24)) == "281474976710656");
  CHECK(to_string(checked_pow(2, 100)) == "1267650600228229401496703205376");
  CHECK_THROWS_AS(checked_pow(2, 127), std::overflow_error);
  CHECK_THROWS_AS(dynatomic_count(2, 200), std::overflow_error);
  CHECK_THROWS_AS(dynatomic_count(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(dynatomic_count(2, 0), std::invalid_argument);
}
