#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace perbif {

// Wide signed integer used for every periodic-point count.
using count_t = __int128;

std::string to_string(count_t v);

/// Möbius function; throws std::invalid_argument for n == 0.
int moebius(std::uint64_t n);

/// Divisors of n in increasing order (n >= 1).
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// d^k in 128-bit arithmetic; throws std::overflow_error instead of wrapping.
count_t checked_pow(std::uint64_t d, std::uint64_t k);

/// Counts attached to the level-n dynatomic divisor of a degree-d polynomial.
///
/// nu is the number of points in the divisor of exact-period-n (generic
/// parameters), n_cycles = nu / n is the number of multipliers at level n.
/// At n = 1 only the d finite fixed points are counted: the superattracting
/// fixed point at infinity is left out.
struct DynatomicCount {
  int d = 0;
  int n = 0;
  count_t nu = 0;
  count_t n_cycles = 0;
};

DynatomicCount dynatomic_count(int d, int n);

}  // namespace perbif
