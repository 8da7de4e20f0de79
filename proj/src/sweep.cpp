#include "sweep.hpp"

#include <algorithm>
#include <optional>

#include "perbif/parallel.hpp"
#include "solver.hpp"

namespace perbif::detail {

namespace {

// Continues `raw` from parameter `from` to `to`; falls back to four
// substeps and then to a full solve.
std::optional<Continued> step(const ParamPoint& from, const ParamPoint& to,
                              std::span<const cplx> raw, int n, const SolverOptions& opts,
                              long long& fallbacks) {
  if (!raw.empty()) {
    Continued c = continue_roots(from, to, raw, n, opts);
    if (c.cert.complete) return c;
    ++fallbacks;
    constexpr int kSub = 4;
    std::vector<cplx> cur(raw.begin(), raw.end());
    bool ok = true;
    for (int k = 1; k <= kSub && ok; ++k) {
      const cplx s0 = static_cast<double>(k - 1) / kSub;
      const cplx s1 = static_cast<double>(k) / kSub;
      const ParamPoint p0 = from.scaled(1.0 - s0).shifted(to, s0);
      const ParamPoint p1 = from.scaled(1.0 - s1).shifted(to, s1);
      c = continue_roots(p0, p1, cur, n, opts, 0.0, 0.25);
      ok = c.cert.complete;
      cur = c.raw;
    }
    if (ok) return c;
  } else {
    ++fallbacks;
  }
  try {
    return solve_by_continuation(PolynomialMap(to), n, opts);
  } catch (const IncompleteSolve&) {
    return std::nullopt;
  }
}

bool spectrum_of(const Continued& c, const ParamPoint& p, int n, const SolverOptions& opts,
                 MultiplierSpectrum& out) {
  try {
    const PolynomialMap map(p);
    const auto cycles = classify_cycles(c.cert.clusters, map, n, opts);
    out = spectrum_from_cycles(cycles, map, n, opts);
    return true;
  } catch (const AmbiguousGrouping&) {
    return false;
  }
}

}  // namespace

SweepStats sweep_spectra(const SliceSpec& slice, int n, const SolverOptions& opts,
                         const PixelVisitor& visit, SweepAnchors* anchors) {
  slice.validate();
  const int res = slice.resolution;
  if (level_degree(slice.d, n) > opts.max_degree)
    throw std::invalid_argument("sweep: d^n exceeds max_degree");
  if (anchors) {
    anchors->per_side = (res + anchors->stride - 1) / anchors->stride;
    anchors->points.assign(static_cast<std::size_t>(anchors->per_side) * anchors->per_side, {});
  }
  auto param = [&](int ix, int iy) { return slice.at(slice.pixel_t(ix, iy)); };

  // column 0
  std::vector<std::vector<cplx>> col_raw(res);
  std::vector<ParamPoint> col_from(res);
  long long col_fallbacks = 0;
  {
    std::vector<cplx> raw;
    ParamPoint from = param(0, 0);
    for (int iy = 0; iy < res; ++iy) {
      const ParamPoint to = param(0, iy);
      auto c = step(from, to, raw, n, opts, col_fallbacks);
      if (c) {
        raw = c->raw;
        from = to;
      }
      // rows restart from the last column-0 pixel that succeeded
      col_raw[iy] = raw;
      col_from[iy] = from;
    }
  }

  std::vector<SweepStats> row_stats(res);
  parallel_for(static_cast<std::size_t>(res), [&](std::size_t row) {
    const int iy = static_cast<int>(row);
    SweepStats& st = row_stats[iy];
    std::vector<cplx> raw = col_raw[iy];
    ParamPoint from = col_from[iy];
    for (int ix = 0; ix < res; ++ix) {
      const ParamPoint to = param(ix, iy);
      ++st.pixels;
      std::optional<Continued> c;
      if (ix == 0 && from == to && !raw.empty()) {
        // already solved while walking down column 0
        c = continue_roots(from, to, raw, n, opts);
        if (!c->cert.complete) c = step(from, to, {}, n, opts, st.fallbacks);
      } else {
        c = step(from, to, raw, n, opts, st.fallbacks);
      }
      MultiplierSpectrum sp;
      const bool good = c && spectrum_of(*c, to, n, opts, sp);
      if (!good) ++st.failures;
      visit(ix, iy, good ? &sp : nullptr);
      if (c) {
        raw = std::move(c->raw);
        from = to;
        if (anchors && ix % anchors->stride == 0 && iy % anchors->stride == 0)
          anchors->points[static_cast<std::size_t>(iy / anchors->stride) * anchors->per_side +
                          ix / anchors->stride] = raw;
      }
    }
  });

  SweepStats total;
  total.fallbacks = col_fallbacks;
  for (const auto& st : row_stats) {
    total.pixels += st.pixels;
    total.fallbacks += st.fallbacks;
    total.failures += st.failures;
  }
  return total;
}

SpectrumOracle::SpectrumOracle(const SliceSpec& slice, int n, const SolverOptions& opts,
                               const SweepAnchors& anchors)
    : slice_(slice), n_(n), opts_(opts), anchors_(anchors) {}

bool SpectrumOracle::eval(cplx t, MultiplierSpectrum& out) {
  ++evaluations_;
  cplx src_t = t;
  const std::vector<cplx>* src = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cache_) {
    const double dist = std::abs(c.t - t);
    if (dist < best) {
      best = dist;
      src = &c.raw;
      src_t = c.t;
    }
  }
  if (anchors_.per_side > 0) {
    const auto [px, py] = slice_.pixel_of(t);
    const int ci = std::clamp((px + anchors_.stride / 2) / anchors_.stride, 0, anchors_.per_side - 1);
    const int cj = std::clamp((py + anchors_.stride / 2) / anchors_.stride, 0, anchors_.per_side - 1);
    for (int r = 0; r < anchors_.per_side; ++r) {
      bool any = false;
      for (int j = std::max(0, cj - r); j <= std::min(anchors_.per_side - 1, cj + r); ++j)
        for (int i = std::max(0, ci - r); i <= std::min(anchors_.per_side - 1, ci + r); ++i) {
          if (std::max(std::abs(i - ci), std::abs(j - cj)) != r) continue;
          const auto& pts = anchors_.at(i, j);
          if (pts.empty()) continue;
          any = true;
          const cplx at = slice_.pixel_t(i * anchors_.stride, j * anchors_.stride);
          const double dist = std::abs(at - t);
          if (dist < best) {
            best = dist;
            src = &pts;
            src_t = at;
          }
        }
      if (any) break;
    }
  }
  long long fallbacks = 0;
  const ParamPoint to = slice_.at(t);
  std::optional<Continued> c;
  if (src)
    c = step(slice_.at(src_t), to, *src, n_, opts_, fallbacks);
  else
    c = step(to, to, {}, n_, opts_, fallbacks);
  if (!c) return false;
  const bool good = spectrum_of(*c, to, n_, opts_, out);
  constexpr std::size_t kCache = 6;
  if (cache_.size() == kCache) cache_.erase(cache_.begin());
  cache_.push_back({t, std::move(c->raw)});
  return good;
}

}  // namespace perbif::detail
