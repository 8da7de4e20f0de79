#include "perbif/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "iteration.hpp"
#include "perbif/arith.hpp"
#include "solver.hpp"

namespace perbif {

IncompleteSolve::IncompleteSolve(long long expected, long long found)
    : std::runtime_error("incomplete: certified " + std::to_string(found) + " of " +
                         std::to_string(expected) + " periodic points (shortfall " +
                         std::to_string(expected - found) + ")"),
      expected_(expected),
      found_(found) {}

cplx orbit_derivative(const PolynomialMap& map, cplx z, int m) {
  return detail::iterate_derivative(map, z, m);
}

std::vector<PeriodicPoint> periodic_points(const PolynomialMap& map, int n,
                                           const SolverOptions& opts) {
  if (n < 1) throw std::invalid_argument("periodic_points: period must be >= 1");
  const long long D = detail::level_degree(map.degree(), n);
  if (D > opts.max_degree)
    throw std::invalid_argument("periodic_points: d^n = " + std::to_string(D) +
                                " exceeds max_degree " + std::to_string(opts.max_degree));
  SolverMethod method = opts.method;
  if (method == SolverMethod::automatic)
    method = D <= opts.newton_max_degree ? SolverMethod::newton : SolverMethod::continuation;

  if (method == SolverMethod::newton) {
    auto cert = detail::solve_by_newton(map, n, opts);
    if (!cert.complete) {
      // Newton from the circle came up short: fall back to continuation
      // before reporting the shortfall.
      try {
        return detail::solve_by_continuation(map, n, opts).cert.clusters;
      } catch (const IncompleteSolve&) {
        throw IncompleteSolve(D, cert.total);
      }
    }
    return std::move(cert.clusters);
  }
  return detail::solve_by_continuation(map, n, opts).cert.clusters;
}

std::vector<CycleRecord> classify_cycles(std::span<const PeriodicPoint> points,
                                         const PolynomialMap& map, int n,
                                         const SolverOptions& opts) {
  const int m = static_cast<int>(points.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return lex_less(points[x].z, points[y].z); });
  std::vector<double> re(m);
  for (int i = 0; i < m; ++i) re[i] = points[order[i]].z.real();

  // image of each point under P, matched to the nearest certified point
  std::vector<int> image(m, -1);
  for (int i = 0; i < m; ++i) {
    const cplx w = map(points[i].z);
    const double tol = std::max(1e-6, 100.0 * opts.cluster_tol) * detail::scale_of(w);
    auto lo = std::lower_bound(re.begin(), re.end(), w.real() - tol);
    double best = tol;
    for (auto it = lo; it != re.end() && *it <= w.real() + tol; ++it) {
      const int j = order[it - re.begin()];
      const double dist = std::abs(points[j].z - w);
      if (dist <= best) {
        best = dist;
        image[i] = j;
      }
    }
    if (image[i] < 0)
      throw AmbiguousGrouping("classify_cycles: image of a periodic point is not in the set");
  }
  std::vector<int> hits(m, 0);
  for (int j : image) ++hits[j];
  for (int i = 0; i < m; ++i)
    if (hits[i] != 1)
      throw AmbiguousGrouping("classify_cycles: P does not permute the periodic points");

  std::vector<CycleRecord> out;
  std::vector<char> seen(m, 0);
  for (int oi = 0; oi < m; ++oi) {
    const int start = order[oi];
    if (seen[start]) continue;
    CycleRecord rec;
    rec.representative = points[start].z;
    rec.multiplicity = points[start].multiplicity;
    rec.count_radius = points[start].count_radius;
    rec.multiplier = 1.0;
    int j = start;
    do {
      seen[j] = 1;
      rec.points.push_back(points[j].z);
      rec.multiplier *= map.derivative(points[j].z);
      if (points[j].multiplicity != rec.multiplicity)
        throw AmbiguousGrouping("classify_cycles: multiplicity varies along a cycle");
      j = image[j];
    } while (j != start);
    rec.exact_period = static_cast<int>(rec.points.size());
    if (n % rec.exact_period != 0)
      throw AmbiguousGrouping("classify_cycles: cycle length does not divide the level");
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

// Index k with rho close to exp(2 pi i k / r), gcd(k, r) = 1; -1 if none.
bool near_primitive_root(cplx rho, int r, double tol) {
  const double turns = std::arg(rho) / (2.0 * std::numbers::pi) * r;
  long long k = std::llround(turns);
  k = ((k % r) + r) % r;
  if (std::gcd(k, static_cast<long long>(r)) != 1) return false;
  const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / r);
  return std::abs(rho - zeta) <= tol;
}

}  // namespace

MultiplierSpectrum spectrum_from_cycles(std::span<const CycleRecord> cycles,
                                        const PolynomialMap& map, int n,
                                        const SolverOptions& opts) {
  MultiplierSpectrum sp;
  sp.d = map.degree();
  sp.n = n;
  sp.source = map.param();
  for (const auto& rec : cycles) {
    const int m = rec.exact_period;
    if (rec.multiplicity > 1) sp.generic = false;
    if (m == n) {
      for (int k = 0; k < rec.multiplicity; ++k) sp.lambda_values.push_back(rec.multiplier);
      continue;
    }
    const int r = n / m;
    if (!near_primitive_root(rec.multiplier, r, opts.root_of_unity_tol)) continue;
    sp.generic = false;
    if (rec.multiplicity <= 1 || rec.count_radius <= 0.0) continue;
    // Multiplicity of the representative in the level-n dynatomic divisor:
    // Moebius inversion of its multiplicities as a root of P^j - z, m | j | n.
    long long mult = 0;
    for (auto j64 : divisors(static_cast<std::uint64_t>(n))) {
      const int j = static_cast<int>(j64);
      if (j % m != 0) continue;
      const int mu = moebius(static_cast<std::uint64_t>(n / j));
      if (mu == 0) continue;
      int kj = j == n ? rec.multiplicity
                      : detail::local_multiplicity(map, rec.representative, rec.count_radius, j);
      if (kj < 0) kj = 1;
      mult += static_cast<long long>(mu) * kj;
    }
    if (mult <= 0) continue;
    const long long total = mult * m;
    const long long copies = (total + n / 2) / n;
    const cplx w = std::pow(rec.multiplier, r);
    for (long long k = 0; k < copies; ++k) sp.lambda_values.push_back(w);
  }
  if (opts.include_infinity && n == 1) sp.lambda_values.emplace_back(0.0, 0.0);
  std::sort(sp.lambda_values.begin(), sp.lambda_values.end(), lex_less);
  const auto expected = dynatomic_count(sp.d, n).n_cycles + (opts.include_infinity && n == 1 ? 1 : 0);
  if (static_cast<count_t>(sp.lambda_values.size()) != expected) sp.generic = false;
  return sp;
}

MultiplierSpectrum multiplier_spectrum(const PolynomialMap& map, int n, const SolverOptions& opts) {
  const auto pts = periodic_points(map, n, opts);
  const auto cycles = classify_cycles(pts, map, n, opts);
  return spectrum_from_cycles(cycles, map, n, opts);
}

}  // namespace perbif
