#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iteration.hpp"
#include "solver.hpp"

namespace perbif::detail {

namespace {

// |F'| below this (or a cluster made of genuinely distinct limits) triggers
// an argument-principle count instead of assuming a simple root.
constexpr double kSimpleDerivativeFloor = 1e-3;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

long long level_degree(int d, int n) {
  long long D = 1;
  for (int k = 0; k < n; ++k) {
    if (D > std::numeric_limits<long long>::max() / d)
      throw std::overflow_error("level degree d^n overflows");
    D *= d;
  }
  return D;
}

cplx polish(const PolynomialMap& map, cplx z, int n, int max_iter) {
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const auto ev = iterate(map, z, n);
    if (ev.dF == 0.0 && !ev.huge) break;
    const cplx step = ev.newton;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    const double s = std::abs(step);
    z -= step;
    if (s <= 4e-16 * scale_of(z)) break;
    // multiple roots converge linearly; stop once the step stops shrinking
    if (it > 8 && s > 0.9 * last) break;
    last = s;
  }
  return z;
}

namespace {

bool accept_eval(const IterateEval& ev, cplx z, const SolverOptions& opts) {
  if (ev.huge) return false;
  const double r = std::abs(ev.F);
  if (!std::isfinite(r)) return false;
  if (r <= opts.residual_tol) return true;
  // strongly repelling points: the residual floor is eps * |F'| * |z|
  return std::abs(ev.newton) <= 64.0 * std::numeric_limits<double>::epsilon() * scale_of(z);
}

}  // namespace

bool accept_residual(const PolynomialMap& map, cplx z, int n, const SolverOptions& opts) {
  return accept_eval(iterate(map, z, n), z, opts);
}

Certified certify(const PolynomialMap& map, int n, std::span<const cplx> candidates,
                  const SolverOptions& opts) {
  Certified out;
  const int m = static_cast<int>(candidates.size());
  out.cluster_of.assign(m, -1);

  // one evaluation per candidate, reused for acceptance, centers and the
  // simple-root test
  std::vector<IterateEval> evals(m);
  std::vector<int> idx;
  idx.reserve(m);
  for (int i = 0; i < m; ++i) {
    evals[i] = iterate(map, candidates[i], n);
    if (accept_eval(evals[i], candidates[i], opts)) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(),
            [&](int x, int y) { return lex_less(candidates[x], candidates[y]); });

  // Union of candidates closer than cluster_tol (relative to modulus >= 1).
  UnionFind uf(static_cast<int>(idx.size()));
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const cplx zp = candidates[idx[p]];
    const double tol = opts.cluster_tol * scale_of(zp);
    for (std::size_t q = p + 1; q < idx.size(); ++q) {
      const cplx zq = candidates[idx[q]];
      if (zq.real() - zp.real() > tol) break;
      if (std::abs(zq - zp) <= tol) uf.unite(static_cast<int>(p), static_cast<int>(q));
    }
  }

  struct Group {
    std::vector<int> members;  // candidate indices
    cplx center;
    int center_index = -1;
    double diam = 0.0;
  };
  std::vector<Group> groups;
  std::vector<int> group_of_root(idx.size(), -1);
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const int r = uf.find(static_cast<int>(p));
    if (group_of_root[r] < 0) {
      group_of_root[r] = static_cast<int>(groups.size());
      groups.push_back({});
    }
    groups[group_of_root[r]].members.push_back(idx[p]);
  }
  for (auto& g : groups) {
    double best = std::numeric_limits<double>::infinity();
    for (int i : g.members) {
      const double r = std::abs(evals[i].F);
      if (r < best) {
        best = r;
        g.center = candidates[i];
        g.center_index = i;
      }
    }
    for (int i : g.members) g.diam = std::max(g.diam, std::abs(candidates[i] - g.center));
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& x, const Group& y) { return lex_less(x.center, y.center); });

  out.clusters.resize(groups.size());
  out.overclaimed.assign(groups.size(), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int i : groups[g].members) out.cluster_of[i] = static_cast<int>(g);
    PeriodicPoint& pp = out.clusters[g];
    pp.z = groups[g].center;
    const auto& ev = evals[groups[g].center_index];
    const bool distinct_limits = groups[g].diam > 1e-11 * scale_of(pp.z);
    if (std::abs(ev.dF) >= kSimpleDerivativeFloor && !distinct_limits) {
      pp.multiplicity = 1;
    } else {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t h = 0; h < groups.size(); ++h)
        if (h != g) nearest = std::min(nearest, std::abs(groups[h].center - pp.z));
      double radius = std::max(10.0 * opts.cluster_tol * scale_of(pp.z), 4.0 * groups[g].diam);
      radius = std::min(radius, 0.3 * nearest);
      const int k = local_multiplicity(map, pp.z, radius, n);
      pp.multiplicity = k > 0 ? k : 1;
      pp.count_radius = radius;
    }
    if (static_cast<int>(groups[g].members.size()) > pp.multiplicity) out.overclaimed[g] = 1;
    out.total += pp.multiplicity;
  }
  out.complete = out.total == level_degree(map.degree(), n);
  return out;
}

}  // namespace perbif::detail
