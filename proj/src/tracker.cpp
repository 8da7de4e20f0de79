#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "iteration.hpp"
#include "solver.hpp"

namespace perbif::detail {

namespace {

// Maps along one path family, cached by path time: adaptive steps share
// dyadic time values across paths.
class PathMaps {
 public:
  PathMaps(const ParamPoint& from, const ParamPoint& to, double bend)
      : from_(from), delta_(to.shifted(from, -1.0)), bend_(bend) {}

  struct Entry {
    PolynomialMap map;
    std::vector<cplx> dcoeffs;  // d/ds of the coefficients
  };

  const Entry& at(double s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 4096) cache_.clear();
    const cplx phi(s, bend_ * s * (1.0 - s));
    const cplx dphi(1.0, bend_ * (1.0 - 2.0 * s));
    const ParamPoint p = from_.shifted(delta_, phi);
    auto dc = map_coefficient_derivative(p, delta_);
    for (auto& c : dc) c *= dphi;
    return cache_.emplace(s, Entry{PolynomialMap(p), std::move(dc)}).first->second;
  }

 private:
  ParamPoint from_;
  ParamPoint delta_;
  double bend_;
  std::map<double, Entry> cache_;
};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool track_one(PathMaps& maps, cplx& z, int n, const TrackOptions& topt) {
  double s = 0.0;
  double h = std::min(topt.h_init, topt.h_max);
  int successes = 0;
  long long steps = 0;
  bool have_tangent = false;
  cplx tangent;
  while (s < 1.0) {
    if (h < topt.h_min || ++steps > topt.max_steps) return false;
    const double s1 = std::min(1.0, s + h);
    const double hh = s1 - s;
    if (!have_tangent) {
      const auto& e0 = maps.at(s);
      IterateRequest req;
      req.dcoeffs = &e0.dcoeffs;
      const auto ev = iterate(e0.map, z, n, req);
      if (ev.huge || ev.dF == 0.0) return false;
      tangent = -ev.dFs / ev.dF;
      if (!finite(tangent)) return false;
      have_tangent = true;
    }
    const cplx zp = z + hh * tangent;
    const auto& e1 = maps.at(s1);
    IterateRequest req2;
    req2.want_second = true;
    const auto ev1 = iterate(e1.map, zp, n, req2);
    bool good = !ev1.huge && ev1.dF != 0.0 && finite(ev1.newton);
    cplx znew;
    if (good) {
      const double beta = std::abs(ev1.newton);
      const double gamma = std::abs(ev1.ddF) / (2.0 * std::abs(ev1.dF));
      good = beta * gamma <= topt.alpha_max;
      if (good) {
        const cplx z1 = zp - ev1.newton;
        const auto ev2 = iterate(e1.map, z1, n);
        const double b2 = std::abs(ev2.newton);
        good = !ev2.huge && finite(ev2.newton) &&
               (b2 <= 0.25 * beta || b2 <= 1e-13 * scale_of(z1));
        znew = z1 - ev2.newton;
      }
    }
    if (!good) {
      h = 0.5 * hh;
      successes = 0;
      continue;
    }
    z = znew;
    s = s1;
    have_tangent = false;
    if (++successes >= 2) h = std::min(2.0 * hh, topt.h_max);
    else h = hh;
  }
  return true;
}

}  // namespace

TrackResult track_roots(const ParamPoint& from, const ParamPoint& to,
                        std::span<const cplx> start, int n, const TrackOptions& topt,
                        std::span<const int> subset) {
  TrackResult out;
  out.z.assign(start.begin(), start.end());
  out.ok.assign(start.size(), 1);
  if (from == to) return out;
  PathMaps maps(from, to, topt.bend);
  const PolynomialMap target(to);
  auto run = [&](std::size_t i) {
    cplx z = start[i];
    const bool ok = track_one(maps, z, n, topt);
    out.z[i] = ok ? polish(target, z, n) : z;
    out.ok[i] = ok;
  };
  if (subset.empty()) {
    for (std::size_t i = 0; i < start.size(); ++i) run(i);
  } else {
    for (int i : subset) run(static_cast<std::size_t>(i));
  }
  return out;
}

Continued continue_roots(const ParamPoint& from, const ParamPoint& to,
                                        std::span<const cplx> start, int n,
                                        const SolverOptions& opts, double bend,
                                        double h_init) {
  const PolynomialMap target(to);
  TrackOptions topt;
  topt.bend = bend;
  topt.h_init = h_init;
  TrackResult tr = track_roots(from, to, start, n, topt);
  // later rounds also move the suspect paths onto other bends, since two paths
  // that jumped onto the same root tend to do so again on the same route
  constexpr double kBends[] = {0.0, 0.0, -0.7, 1.3, 0.9, -0.3, 0.2, -1.1};
  constexpr int kAttempts = static_cast<int>(std::size(kBends));
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Certified cert = certify(target, n, tr.z, opts);
    if (cert.complete || attempt == kAttempts - 1) return Continued{std::move(tr.z), std::move(cert)};
    std::vector<int> redo;
    for (std::size_t i = 0; i < tr.z.size(); ++i) {
      const int c = cert.cluster_of[i];
      if (!tr.ok[i] || c < 0 || cert.overclaimed[c]) redo.push_back(static_cast<int>(i));
    }
    if (redo.empty()) return Continued{std::move(tr.z), std::move(cert)};
    if (attempt < 2) {
      topt.alpha_max *= 0.25;
      topt.h_max *= 0.25;
      topt.h_init = std::min(topt.h_init, topt.h_max);
    } else {
      topt.bend = bend + kBends[attempt];
    }
    const TrackResult again = track_roots(from, to, start, n, topt, redo);
    for (int i : redo) {
      tr.z[i] = again.z[i];
      tr.ok[i] = again.ok[i];
    }
  }
  return {};  // unreachable
}

std::vector<cplx> power_map_periodic_points(int d, int n) {
  // z^d/d is conjugate to u^d by z = beta*u with beta^{d-1} = d.
  const long long D = level_degree(d, n);
  const double beta = std::pow(static_cast<double>(d), 1.0 / (d - 1));
  std::vector<cplx> z;
  z.reserve(D);
  z.emplace_back(0.0, 0.0);
  for (long long k = 0; k < D - 1; ++k)
    z.push_back(std::polar(beta, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(D - 1)));
  return z;
}

Continued solve_by_continuation(const PolynomialMap& map, int n, const SolverOptions& opts) {
  const ParamPoint& target = map.param();
  ParamPoint origin = target.scaled(0.0);
  const auto start = power_map_periodic_points(map.degree(), n);
  long long best = 0;
  for (double bend : {0.5, -0.7, 1.3}) {
    auto res = continue_roots(origin, target, start, n, opts, bend, 0.05);
    if (res.cert.complete) return res;
    best = std::max(best, res.cert.total);
  }
  throw IncompleteSolve(level_degree(map.degree(), n), best);
}

}  // namespace perbif::detail
