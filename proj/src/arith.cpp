#include "perbif/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace perbif {

std::string to_string(count_t v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  // magnitude as unsigned so that the most negative value survives
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

int moebius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("moebius: n must be positive");
  int sign = 1;
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors: n must be positive");
  std::vector<std::uint64_t> lo, hi;
  for (std::uint64_t k = 1; k <= n / k; ++k) {
    if (n % k != 0) continue;
    lo.push_back(k);
    if (k != n / k) hi.push_back(n / k);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

count_t checked_pow(std::uint64_t d, std::uint64_t k) {
  count_t r = 1;
  const count_t base = static_cast<count_t>(d);
  for (std::uint64_t i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(r, base, &r))
      throw std::overflow_error("checked_pow: " + std::to_string(d) + "^" +
                                std::to_string(k) + " exceeds 128 bits");
  }
  return r;
}

DynatomicCount dynatomic_count(int d, int n) {
  if (d < 2) throw std::invalid_argument("dynatomic_count: degree must be >= 2");
  if (n < 1) throw std::invalid_argument("dynatomic_count: period must be >= 1");
  DynatomicCount out{d, n, 0, 0};
  if (n == 1) {
    out.nu = d;
    out.n_cycles = d;
    return out;
  }
  count_t nu = 0;
  for (std::uint64_t k : divisors(static_cast<std::uint64_t>(n))) {
    const int mu = moebius(static_cast<std::uint64_t>(n) / k);
    if (mu == 0) continue;
    const count_t term = checked_pow(static_cast<std::uint64_t>(d), k);
    if (__builtin_add_overflow(nu, mu * term, &nu))
      throw std::overflow_error("dynatomic_count: divisor sum overflows");
  }
  out.nu = nu;
  out.n_cycles = nu / n;
  return out;
}

}  // namespace perbif
