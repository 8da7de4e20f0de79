#include <algorithm>
#include <cmath>
#include <numbers>
#include <array>

#include "pern.hpp"
#include "perbif/poly_roots.hpp"
#include "perbif/parallel.hpp"

namespace perbif {
namespace detail {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double x) {
  x = std::remainder(x, 2.0 * kPi);
  if (x <= -kPi) x += 2.0 * kPi;
  return x;
}

struct Sample {
  double log_abs;
  double arg;
  bool ok() const { return std::isfinite(log_abs) && std::isfinite(arg); }
};

constexpr Sample kBad{std::numeric_limits<double>::quiet_NaN(), 0.0};

// log p_n(lambda(t), w) for a fixed list of w.
class PnEval {
 public:
  PnEval(const SliceSpec& slice, int n, std::span<const cplx> ws, const SweepAnchors& anchors,
         const SolverOptions& opts)
      : oracle_(slice, n, opts, anchors), ws_(ws.begin(), ws.end()) {}

  void operator()(cplx t, std::vector<Sample>& out) {
    out.assign(ws_.size(), kBad);
    MultiplierSpectrum sp;
    if (!oracle_.eval(t, sp)) return;
    for (std::size_t k = 0; k < ws_.size(); ++k) {
      const LogComplex lc = p_n_log(sp, ws_[k]);
      out[k] = {lc.log_abs, lc.arg};
    }
  }
  Sample operator()(cplx t) {
    std::vector<Sample> v;
    (*this)(t, v);
    return v[0];
  }

 private:
  SpectrumOracle oracle_;
  std::vector<cplx> ws_;
};

// log p_n along one lattice segment: sample points and, per w, the
// continuous logarithm relative to the first point.
struct Walk {
  std::vector<cplx> t;
  std::vector<std::vector<cplx>> log;  // [w][sample]
  bool bad = false;
};

// Walks the segment ta -> tb in steps small enough that neither ln|p_n| nor
// arg p_n moves by more than pi/4 for any w. `step` is the step length as a
// fraction of the segment; it carries over between consecutive segments.
void walk_segment(PnEval& f, cplx ta, const std::vector<Sample>& a, cplx tb,
                  const std::vector<Sample>& b, double& step, Walk& walk) {
  const std::size_t nw = a.size();
  walk.t.assign(1, ta);
  walk.log.assign(nw, std::vector<cplx>(1, 0.0));
  std::vector<Sample> cur = a, next;
  for (const auto& x : a)
    if (!x.ok()) walk.bad = true;
  double s = 0.0;
  constexpr double kMinStep = 1.0 / 65536.0;
  while (s < 1.0) {
    const double s1 = std::min(1.0, s + step);
    if (s1 == 1.0)
      next = b;
    else
      f(ta + s1 * (tb - ta), next);
    double theta = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < nw; ++k) {
      if (!next[k].ok() || !cur[k].ok()) {
        ok = false;
        break;
      }
      theta = std::max({theta, std::abs(wrap(next[k].arg - cur[k].arg)),
                        std::abs(next[k].log_abs - cur[k].log_abs)});
    }
    const double h = s1 - s;
    if ((!ok || theta > kPi / 4) && h > kMinStep) {
      step = std::max(kMinStep, 0.5 * h * std::min(1.0, (kPi / 8) / std::max(theta, 1e-3)));
      continue;
    }
    if (!ok || theta > kPi / 4) walk.bad = true;
    walk.t.push_back(ta + s1 * (tb - ta));
    for (std::size_t k = 0; k < nw; ++k) {
      const bool both = cur[k].ok() && next[k].ok();
      const cplx dl = both ? cplx(next[k].log_abs - cur[k].log_abs, wrap(next[k].arg - cur[k].arg))
                           : cplx(0.0, 0.0);
      walk.log[k].push_back(walk.log[k].back() + dl);
    }
    if (ok) cur.swap(next);
    s = s1;
    step = std::min(1.0, h * std::clamp((kPi / 8) / std::max(theta, 1e-3), 0.5, 2.0));
  }
}

// Roots of the monic polynomial with power sums s_1..s_k (Newton identities).
std::vector<cplx> roots_from_power_sums(const std::vector<cplx>& s, int k) {
  std::vector<cplx> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int j = 1; j <= k; ++j) {
    cplx acc = 0.0;
    for (int i = 1; i <= j; ++i) acc += ((i % 2) ? 1.0 : -1.0) * e[j - i] * s[i];
    e[j] = acc / static_cast<double>(j);
  }
  // prod (u - u_j) = sum_j (-1)^j e_j u^{k-j}, ascending coefficients
  std::vector<cplx> coeffs(k + 1);
  for (int j = 0; j <= k; ++j) coeffs[k - j] = ((j % 2) ? -1.0 : 1.0) * e[j];
  if (k == 1) return {-coeffs[0]};
  return polynomial_roots(coeffs);
}

// Boundary piece of a rectangle: samples along a straight segment with the
// continuous logarithm of p_n (absolute, so the raw argument of every
// sample is L mod 2 pi).
struct Edge {
  std::vector<cplx> t;
  std::vector<cplx> L;
  bool bad = false;
};

Edge reversed(const Edge& e) {
  Edge r = e;
  std::reverse(r.t.begin(), r.t.end());
  std::reverse(r.L.begin(), r.L.end());
  return r;
}

// Appends a walk (single w) that starts where e ends; `first` is the raw
// sample at the walk's start, used when e is still empty.
void append(Edge& e, const Walk& w, std::size_t wk, const Sample& first) {
  e.bad = e.bad || w.bad;
  const auto& L = w.log[wk];
  if (e.t.empty()) {
    e.t.push_back(w.t[0]);
    e.L.emplace_back(first.log_abs, first.arg);
  }
  for (std::size_t i = 1; i < w.t.size(); ++i) {
    e.t.push_back(w.t[i]);
    e.L.push_back(e.L.back() + (L[i] - L[i - 1]));
  }
}

Edge edge_from_walk(const Walk& w, const Sample& first) {
  Edge e;
  append(e, w, 0, first);
  return e;
}


// Roots inside a rectangle from its boundary walk: contour moments give
// starting points when the winding is small; otherwise, or when Newton does
// not recover every root, the rectangle is split into quadrants.
struct RectSolver {
  PnEval& f;
  const SliceSpec& slice;
  const PernOptions& opts;
  double dn;
  std::vector<std::string> issues;

  static constexpr int kLeafRoots = 4;
  static constexpr int kMaxDepth = 14;

  long long winding_of(const std::array<Edge, 4>& edges, bool& bad) const {
    double turn = 0.0;
    bad = false;
    for (const auto& e : edges) {
      bad = bad || e.bad || e.t.empty();
      if (!e.t.empty()) turn += e.L.back().imag() - e.L.front().imag();
    }
    const double wn = turn / (2.0 * kPi);
    const long long k = std::llround(wn);
    if (std::abs(wn - static_cast<double>(k)) > 0.1) bad = true;
    return k;
  }

  // Splits e at t0 + frac (t1 - t0); the raw sample there is returned in mid.
  bool split(const Edge& e, double frac, Edge& a, Edge& b, Sample& mid) {
    const cplx t0 = e.t.front();
    const cplx tm = t0 + frac * (e.t.back() - t0);
    const double dm = std::abs(tm - t0);
    std::size_t i = 0;
    while (i + 1 < e.t.size() && std::abs(e.t[i + 1] - t0) <= dm) ++i;
    cplx Lm;
    if (std::abs(e.t[i] - tm) <= 1e-15 * (1.0 + std::abs(tm))) {
      Lm = e.L[i];
    } else {
      const Sample s = f(tm);
      if (!s.ok()) return false;
      Lm = e.L[i] + cplx(s.log_abs - e.L[i].real(), wrap(s.arg - e.L[i].imag()));
    }
    mid = {Lm.real(), wrap(Lm.imag())};
    a.t.assign(e.t.begin(), e.t.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    a.L.assign(e.L.begin(), e.L.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    if (a.t.back() != tm) {
      a.t.push_back(tm);
      a.L.push_back(Lm);
    }
    b.t = {tm};
    b.L = {Lm};
    for (std::size_t j = i + 1; j < e.t.size(); ++j) {
      if (e.t[j] == tm) continue;
      b.t.push_back(e.t[j]);
      b.L.push_back(e.L[j]);
    }
    a.bad = b.bad = e.bad;
    return a.t.size() >= 2 && b.t.size() >= 2;
  }

  // `density` is the sample count of a parallel edge of the same length; the
  // first step must not be coarser than its average spacing
  Edge walk(cplx ta, const Sample& sa, cplx tb, const Sample& sb, std::size_t density) {
    Walk w;
    double step = 1.0 / static_cast<double>(std::max<std::size_t>(density, 8));
    const std::vector<Sample> va = {sa}, vb = {sb};
    walk_segment(f, ta, va, tb, vb, step, w);
    return edge_from_walk(w, sa);
  }

  bool log_ratio(cplx t, const Sample& s0, double h, cplx& ratio) {
    const Sample sp = f(t + h), sm = f(t - h);
    if (!s0.ok() || !sp.ok() || !sm.ok()) return false;
    const cplx ep = std::exp(cplx(sp.log_abs - s0.log_abs, sp.arg - s0.arg));
    const cplx em = std::exp(cplx(sm.log_abs - s0.log_abs, sm.arg - s0.arg));
    ratio = (ep - em) / (2.0 * h);  // p_n' / p_n
    return std::isfinite(ratio.real()) && std::isfinite(ratio.imag());
  }

  // Deflated Newton on p_n from t; false when it does not settle.
  bool newton(cplx& t, const std::vector<PernRoot>& known, double span, Sample& at) {
    const double h_fd = 1e-5 * slice.half_width;
    // Multipliers of nearly colliding cycles lose accuracy close to
    // parabolic parameters; once the oracle breaks down after the steps
    // have become small, the last good iterate is taken as the root.
    const double loose = 1e-6 * slice.half_width;
    double last_step = std::numeric_limits<double>::infinity();
    cplx good_t = t;
    Sample good_s = kBad;
    bool converged = false;
    for (int it = 0; it < opts.max_newton; ++it) {
      const Sample s0 = f(t);
      if (s0.log_abs == -std::numeric_limits<double>::infinity()) {
        good_t = t;
        good_s = s0;
        converged = true;  // exact zero
        break;
      }
      cplx ratio;
      bool ok = s0.ok() && log_ratio(t, s0, h_fd, ratio);
      if (ok && std::abs(ratio) < 1e-12) {
        cplx r2;
        ok = log_ratio(t, s0, 2.0 * h_fd, r2);
        if (ok) ratio = (4.0 * ratio - r2) / 3.0;
      }
      if (!ok) {
        converged = last_step <= loose;
        // the oracle fails on the degenerate parameter itself, which is
        // where a converging iteration lands
        if (converged && it > 0) good_t = t;
        break;
      }
      // a small step that does not halve |p_n| hit the noise floor; the
      // iterate itself came from an accurate evaluation
      if (last_step <= loose && good_s.ok() && s0.log_abs > good_s.log_abs - std::numbers::ln2) {
        good_t = t;
        good_s = s0;
        converged = true;
        break;
      }
      good_t = t;
      good_s = s0;
      for (const auto& r : known) ratio -= static_cast<double>(r.multiplicity) / (t - r.t);
      if (ratio == 0.0) break;
      cplx stepv = 1.0 / ratio;
      if (std::abs(stepv) > span) stepv *= span / std::abs(stepv);
      const double sz = std::abs(stepv);
      if (sz <= opts.newton_tol * std::max(slice.half_width, std::abs(t))) {
        converged = true;
        break;
      }
      // stagnation at the accuracy floor of the spectrum
      if (last_step <= loose && sz >= last_step) {
        converged = true;
        break;
      }
      last_step = sz;
      t -= stepv;
      if (!slice.contains(t)) break;
    }
    if (!converged && last_step <= loose) converged = true;
    t = good_t;
    at = good_s;
    return (converged && at.ok()) || at.log_abs == -std::numeric_limits<double>::infinity();
  }

  bool leaf(const std::array<Edge, 4>& edges, cplx lo, cplx hi, int k, std::vector<PernRoot>& found) {
    const cplx c = 0.5 * (lo + hi);
    const double rho = 0.5 * std::max(hi.real() - lo.real(), hi.imag() - lo.imag());
    std::vector<cplx> m(k + 1, 0.0);
    for (const auto& e : edges) {
      std::vector<cplx> ua(k + 1), ub(k + 1);
      auto powers = [&](cplx t, std::vector<cplx>& pw) {
        const cplx u = (t - c) / rho;
        pw[0] = 1.0;
        for (int p = 1; p <= k; ++p) pw[p] = pw[p - 1] * u;
      };
      powers(e.t[0], ua);
      for (std::size_t i = 1; i < e.t.size(); ++i) {
        powers(e.t[i], ub);
        const cplx dl = e.L[i] - e.L[i - 1];
        for (int p = 0; p <= k; ++p) m[p] += 0.5 * (ua[p] + ub[p]) * dl;
        ua.swap(ub);
      }
    }
    for (auto& v : m) v /= cplx(0.0, 2.0 * kPi);
    std::vector<cplx> starts;
    for (cplx u : roots_from_power_sums(m, k))
      if (std::isfinite(u.real()) && std::isfinite(u.imag())) starts.push_back(c + rho * u);
    starts.push_back(c);
    const double span = std::abs(hi - lo);
    const double tol = 1e-12 * (1.0 + std::abs(hi));
    auto inside = [&](cplx t) {
      return t.real() >= lo.real() - tol && t.real() <= hi.real() + tol &&
             t.imag() >= lo.imag() - tol && t.imag() <= hi.imag() + tol;
    };
    const double merge = opts.merge_tol * slice.half_width;
    long long count = 0;
    for (cplx t : starts) {
      if (count >= k) break;
      Sample s0;
      const bool conv = newton(t, found, span, s0);
      if (!conv || !inside(t)) continue;
      bool merged = false;
      for (auto& r : found)
        if (std::abs(r.t - t) <= merge) {
          ++r.multiplicity;
          merged = true;
          break;
        }
      if (!merged) {
        PernRoot r;
        r.t = t;
        r.residual = s0.log_abs == -std::numeric_limits<double>::infinity()
                         ? 0.0
                         : std::exp(s0.log_abs / dn);
        found.push_back(r);
      }
      ++count;
    }
    return count == k;
  }

  void solve(const std::array<Edge, 4>& edges, cplx lo, cplx hi, int depth,
             std::vector<PernRoot>& out) {
    bool bad = false;
    const long long k = winding_of(edges, bad);
    if (bad) {
      issues.push_back("argument not resolved on a sub-rectangle at depth " + std::to_string(depth));
      return;
    }
    if (k <= 0) {
      if (k < 0) issues.push_back("negative winding");
      return;
    }
    const bool can_split = depth < kMaxDepth && (hi.real() - lo.real()) > 1e-7 * slice.half_width;
    if (k <= kLeafRoots || !can_split) {
      std::vector<PernRoot> found;
      if (leaf(edges, lo, hi, static_cast<int>(k), found) || !can_split) {
        if (!can_split) {
          long long got = 0;
          for (const auto& r : found) got += r.multiplicity;
          if (got != k) issues.push_back("cluster of " + std::to_string(k) + " roots not separated");
        }
        out.insert(out.end(), found.begin(), found.end());
        return;
      }
    }
    // quadrants; a root on a midline spoils the walks there, so the cut is
    // moved off centre and retried
    constexpr double kCuts[] = {0.5, 0.5 + 0.0731, 0.5 - 0.0617};
    for (double fx : kCuts) {
      const double fy = fx;
      Edge B1, B2, R1, R2, T1, T2, L1, L2;
      Sample bm, rm, tm, lm;
      // top and left edges run backwards
      if (!split(edges[0], fx, B1, B2, bm) || !split(edges[1], fy, R1, R2, rm) ||
          !split(edges[2], 1.0 - fx, T1, T2, tm) || !split(edges[3], 1.0 - fy, L1, L2, lm))
        continue;
      const cplx c(lo.real() + fx * (hi.real() - lo.real()), lo.imag() + fy * (hi.imag() - lo.imag()));
      const Sample sc = f(c);
      if (!sc.ok()) continue;
      const cplx tb = B1.t.back(), tr = R1.t.back(), tt = T1.t.back(), tl = L1.t.back();
      const Edge V1 = walk(tb, bm, c, sc, std::max(R1.t.size(), L2.t.size()));
      const Edge V2 = walk(c, sc, tt, tm, std::max(R2.t.size(), L1.t.size()));
      const Edge H1 = walk(tl, lm, c, sc, std::max(B1.t.size(), T2.t.size()));
      const Edge H2 = walk(c, sc, tr, rm, std::max(B2.t.size(), T1.t.size()));
      const std::array<std::array<Edge, 4>, 4> kids = {{{B1, V1, reversed(H1), L2},
                                                        {B2, R1, reversed(H2), reversed(V1)},
                                                        {H2, R2, T1, reversed(V2)},
                                                        {H1, V2, T2, L1}}};
      long long sum = 0;
      bool any_bad = false;
      for (const auto& q : kids) {
        bool b = false;
        sum += winding_of(q, b);
        any_bad = any_bad || b;
      }
      if ((any_bad || sum != k) && fx != kCuts[std::size(kCuts) - 1]) continue;
      solve(kids[0], lo, c, depth + 1, out);
      solve(kids[1], cplx(c.real(), lo.imag()), cplx(hi.real(), c.imag()), depth + 1, out);
      solve(kids[2], c, hi, depth + 1, out);
      solve(kids[3], cplx(lo.real(), c.imag()), cplx(c.real(), hi.imag()), depth + 1, out);
      return;
    }
    issues.push_back("bad sample while splitting");
  }
};

}  // namespace

SweepStats sweep_log_grids(const SliceSpec& slice, int n, std::span<const cplx> ws,
                           const SolverOptions& opts, std::vector<LogGrid>& grids,
                           SweepAnchors& anchors) {
  const std::size_t px = slice.size();
  grids.assign(ws.size(), LogGrid{});
  for (auto& g : grids) {
    g.log_abs.assign(px, std::numeric_limits<double>::quiet_NaN());
    g.arg.assign(px, 0.0);
  }
  const int res = slice.resolution;
  return sweep_spectra(
      slice, n, opts,
      [&](int ix, int iy, const MultiplierSpectrum* sp) {
        if (!sp) return;
        const std::size_t idx = static_cast<std::size_t>(iy) * res + ix;
        for (std::size_t k = 0; k < ws.size(); ++k) {
          const LogComplex lc = p_n_log(*sp, ws[k]);
          grids[k].log_abs[idx] = lc.log_abs;
          grids[k].arg[idx] = lc.arg;
        }
      },
      &anchors);
}

std::vector<PernReport> pern_roots_from_grids(const SliceSpec& slice, int n,
                                              std::span<const cplx> ws,
                                              std::span<const LogGrid> grids,
                                              const SweepAnchors& anchors,
                                              const PernOptions& opts) {
  const int res = slice.resolution;
  const std::size_t nw = ws.size();
  const int B = std::max(1, opts.block);
  const int nb = (res - 1 + B - 1) / B;
  const double dn = std::pow(static_cast<double>(slice.d), n);
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * res + i; };
  auto lattice_t = [&](int i, int j) { return slice.pixel_t(i, j); };
  auto block_lo = [&](int b) { return b * B; };
  auto block_hi = [&](int b) { return std::min((b + 1) * B, res - 1); };

  // lattice samples per pixel (all w), refilled through the oracle where the sweep failed
  std::vector<std::vector<Sample>> lat(slice.size(), std::vector<Sample>(nw));
  {
    PnEval f(slice, n, ws, anchors, opts.solver);
    for (std::size_t q = 0; q < lat.size(); ++q) {
      bool ok = true;
      for (std::size_t k = 0; k < nw; ++k) {
        lat[q][k] = {grids[k].log_abs[q], grids[k].arg[q]};
        ok = ok && lat[q][k].ok();
      }
      if (!ok) f(lattice_t(static_cast<int>(q % res), static_cast<int>(q / res)), lat[q]);
    }
  }

  // argument increments of the unit segments on block boundary lines
  std::vector<int> lines;
  for (int b = 0; b < nb; ++b) lines.push_back(block_lo(b));
  lines.push_back(res - 1);
  const std::size_t nl = lines.size();
  const std::size_t nseg = nl * (res - 1);
  std::vector<Walk> hseg(nseg), vseg(nseg);
  parallel_for(2 * nl, [&](std::size_t task) {
    const bool horizontal = task < nl;
    const int line = lines[task % nl];
    PnEval f(slice, n, ws, anchors, opts.solver);
    double step = 1.0 / 16.0;
    for (int s = 0; s < res - 1; ++s) {
      const std::size_t k = (task % nl) * (res - 1) + s;
      if (horizontal)
        walk_segment(f, lattice_t(s, line), lat[idx(s, line)], lattice_t(s + 1, line),
                     lat[idx(s + 1, line)], step, hseg[k]);
      else
        walk_segment(f, lattice_t(line, s), lat[idx(line, s)], lattice_t(line, s + 1),
                     lat[idx(line, s + 1)], step, vseg[k]);
    }
  });

  struct BlockOut {
    long long winding = 0;
    bool unresolved = false;
    std::vector<PernRoot> roots;
    std::string issue;
  };
  const std::size_t nblocks = static_cast<std::size_t>(nb) * nb;
  std::vector<BlockOut> blocks(nblocks * nw);

  parallel_for(blocks.size(), [&](std::size_t task) {
    const std::size_t wk = task / nblocks, bi = task % nblocks;
    const int bx = static_cast<int>(bi % nb), by = static_cast<int>(bi / nb);
    const int i0 = block_lo(bx), i1 = block_hi(bx), j0 = block_lo(by), j1 = block_hi(by);
    BlockOut& out = blocks[task];

    // counterclockwise boundary from the lattice segment walks
    std::array<Edge, 4> edges;
    for (int i = i0; i < i1; ++i)
      append(edges[0], hseg[static_cast<std::size_t>(by) * (res - 1) + i], wk, lat[idx(i, j0)][wk]);
    for (int j = j0; j < j1; ++j)
      append(edges[1], vseg[static_cast<std::size_t>(bx + 1) * (res - 1) + j], wk, lat[idx(i1, j)][wk]);
    {
      Edge top, left;
      for (int i = i0; i < i1; ++i)
        append(top, hseg[static_cast<std::size_t>(by + 1) * (res - 1) + i], wk, lat[idx(i, j1)][wk]);
      for (int j = j0; j < j1; ++j)
        append(left, vseg[static_cast<std::size_t>(bx) * (res - 1) + j], wk, lat[idx(i0, j)][wk]);
      edges[2] = reversed(top);
      edges[3] = reversed(left);
    }
    const cplx wsel[] = {ws[wk]};
    PnEval f(slice, n, wsel, anchors, opts.solver);
    RectSolver solver{f, slice, opts, dn};
    const std::string name = "block (" + std::to_string(bx) + "," + std::to_string(by) + ")";
    out.winding = solver.winding_of(edges, out.unresolved);
    if (out.unresolved) {
      out.issue = name + ": argument not resolved on the boundary";
      return;
    }
    solver.solve(edges, lattice_t(i0, j0), lattice_t(i1, j1), 0, out.roots);
    long long found = 0;
    for (const auto& r : out.roots) found += r.multiplicity;
    if (found != out.winding || !solver.issues.empty()) {
      out.unresolved = true;
      out.issue = name + ": winding " + std::to_string(out.winding) + " but " +
                  std::to_string(found) + " roots found";
      for (const auto& i : solver.issues) out.issue += "; " + i;
    }
  });

  std::vector<PernReport> reps(nw);
  for (std::size_t wk = 0; wk < nw; ++wk) {
    PernReport& rep = reps[wk];
    for (std::size_t bi = 0; bi < nblocks; ++bi) {
      auto& b = blocks[wk * nblocks + bi];
      rep.winding_total += b.winding;
      if (b.unresolved) {
        ++rep.unresolved_blocks;
        rep.issues.push_back(b.issue);
      }
      for (auto& r : b.roots) {
        rep.found_total += r.multiplicity;
        rep.roots.push_back(r);
      }
    }
    std::sort(rep.roots.begin(), rep.roots.end(),
              [](const PernRoot& x, const PernRoot& y) { return lex_less(x.t, y.t); });
    rep.ok = rep.unresolved_blocks == 0 && rep.found_total == rep.winding_total;
  }
  return reps;
}

}  // namespace detail

PernReport pern_roots_in_slice(const SliceSpec& slice, int n, cplx w, const PernOptions& opts) {
  slice.validate();
  std::vector<detail::LogGrid> grids;
  detail::SweepAnchors anchors;
  const cplx ws[] = {w};
  detail::sweep_log_grids(slice, n, ws, opts.solver, grids, anchors);
  return std::move(detail::pern_roots_from_grids(slice, n, ws, grids, anchors, opts)[0]);
}

}  // namespace perbif
