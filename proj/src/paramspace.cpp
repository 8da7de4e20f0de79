#include "perbif/paramspace.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "perbif/parallel.hpp"
#include "pern.hpp"
#include "sweep.hpp"

namespace perbif {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

GridField blank(const SliceSpec& slice, FieldKind kind) {
  GridField f;
  f.slice = slice;
  f.kind = kind;
  f.values.assign(slice.size(), kNaN);
  return f;
}

// Runs body(ix, iy) over all pixels, one row per task.
template <class F>
void for_pixels(const SliceSpec& slice, F&& body) {
  const int res = slice.resolution;
  parallel_for(static_cast<std::size_t>(res), [&](std::size_t row) {
    for (int ix = 0; ix < res; ++ix) body(ix, static_cast<int>(row));
  });
}

}  // namespace

SliceSpec SliceSpec::quadratic_a(cplx center, double half_width, int resolution) {
  SliceSpec s;
  s.d = 2;
  s.base = ParamPoint::quadratic(0.0);
  s.direction = ParamPoint::quadratic(1.0);
  s.center = center;
  s.half_width = half_width;
  s.resolution = resolution;
  return s;
}

void SliceSpec::validate() const {
  if (d < 2) throw std::invalid_argument("slice: degree must be >= 2");
  if (base.d != d || direction.d != d)
    throw std::invalid_argument("slice: base and direction must have the slice degree");
  base.validate();
  direction.validate();
  if (direction.norm() == 0.0) throw std::invalid_argument("slice: direction must be nonzero");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("slice: half-width must be positive and finite");
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
    throw std::invalid_argument("slice: center must be finite");
  if (resolution < 8 || resolution > 4096)
    throw std::invalid_argument("slice: resolution must be in [8, 4096]");
}

cplx SliceSpec::pixel_t(int ix, int iy) const {
  const double h = cell();
  return center + cplx(-half_width + (ix + 0.5) * h, -half_width + (iy + 0.5) * h);
}

bool SliceSpec::contains(cplx t) const {
  const cplx u = t - center;
  return std::abs(u.real()) <= half_width && std::abs(u.imag()) <= half_width;
}

std::pair<int, int> SliceSpec::pixel_of(cplx t) const {
  const cplx u = t - center + cplx(half_width, half_width);
  const double h = cell();
  auto clampi = [&](double x) {
    if (!(x >= 0.0)) return 0;
    return std::min(resolution - 1, static_cast<int>(std::floor(x)));
  };
  return {clampi(u.real() / h), clampi(u.imag() / h)};
}

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::L: return "L";
    case FieldKind::L_n: return "L_n";
    case FieldKind::L_n_plus: return "L_n_plus";
    case FieldKind::laplacian_mass: return "laplacian_mass";
    case FieldKind::activity: return "activity";
    case FieldKind::membership: return "membership";
  }
  return "L";
}

FieldKind field_kind_from_string(const std::string& s) {
  for (auto k : {FieldKind::L, FieldKind::L_n, FieldKind::L_n_plus, FieldKind::laplacian_mass,
                 FieldKind::activity, FieldKind::membership})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown field kind: " + s);
}

void GridField::count_nan() {
  nan_count = std::count_if(values.begin(), values.end(), [](double v) { return std::isnan(v); });
}

GridField field_L(const SliceSpec& slice, const FieldOptions& opts) {
  slice.validate();
  GridField f = blank(slice, FieldKind::L);
  const int res = slice.resolution;
  for_pixels(slice, [&](int ix, int iy) {
    const PolynomialMap map(slice.at(slice.pixel_t(ix, iy)));
    double v = kNaN;
    try {
      if (opts.estimator == LyapunovField::critical_green) {
        v = lyapunov_critical_green(map, opts.green).value;
      } else {
        const std::uint64_t seed = mix(opts.seed ^ mix(static_cast<std::uint64_t>(iy) * res + ix));
        v = lyapunov_measure(map, opts.samples, opts.depth, seed).value;
      }
    } catch (const std::runtime_error&) {
    }
    f.at(ix, iy) = v;
  });
  f.count_nan();
  if (f.nan_count == static_cast<long long>(f.values.size()))
    throw std::runtime_error("field_L: no pixel of the window could be evaluated");
  return f;
}

std::vector<GridField> field_Ln_multi(const SliceSpec& slice, int n, std::span<const cplx> ws,
                                      const SolverOptions& opts, SweepStats* stats) {
  slice.validate();
  std::vector<GridField> out;
  for (cplx w : ws) {
    out.push_back(blank(slice, FieldKind::L_n));
    out.back().n = n;
    out.back().w = w;
  }
  const double scale = std::pow(static_cast<double>(slice.d), -n);
  const SweepStats st = detail::sweep_spectra(
      slice, n, opts, [&](int ix, int iy, const MultiplierSpectrum* sp) {
        if (!sp) return;
        for (std::size_t k = 0; k < ws.size(); ++k)
          out[k].at(ix, iy) = p_n_log(*sp, ws[k]).log_abs * scale;
      });
  for (auto& f : out) f.count_nan();
  if (stats) *stats = st;
  return out;
}

GridField field_Ln(const SliceSpec& slice, int n, cplx w, const SolverOptions& opts) {
  const cplx ws[] = {w};
  return std::move(field_Ln_multi(slice, n, ws, opts)[0]);
}

GridField bif_measure(const GridField& field) {
  const int res = field.slice.resolution;
  if (res < 3) throw std::invalid_argument("bif_measure: grid too small");
  GridField out = field;
  out.kind = FieldKind::laplacian_mass;
  out.mask.clear();
  std::fill(out.values.begin(), out.values.end(), 0.0);
  long long bad = 0;
  double mass = 0.0, clamped = 0.0;
  for (int iy = 1; iy < res - 1; ++iy)
    for (int ix = 1; ix < res - 1; ++ix) {
      const double v = field.at(ix + 1, iy) + field.at(ix - 1, iy) + field.at(ix, iy + 1) +
                       field.at(ix, iy - 1) - 4.0 * field.at(ix, iy);
      if (!std::isfinite(v)) {
        ++bad;
        out.at(ix, iy) = kNaN;
        continue;
      }
      // Laplacian * h^2 / (2 pi); the h^2 of the stencil cancels the cell area
      const double m = v / (2.0 * std::numbers::pi);
      if (m < 0.0) {
        clamped -= m;
        out.at(ix, iy) = 0.0;
      } else {
        mass += m;
        out.at(ix, iy) = m;
      }
    }
  const double interior = static_cast<double>(res - 2) * (res - 2);
  if (bad > 0.01 * interior)
    throw std::invalid_argument("bif_measure: more than 1% of the interior is not finite");
  out.total_mass = mass;
  out.clamped_mass = clamped;
  out.nan_count = bad;
  return out;
}

GridField membership_field(const SliceSpec& slice, int i, const GreenOptions& opts) {
  slice.validate();
  if (i < 0 || i > slice.d - 2) throw std::out_of_range("membership_field: critical index");
  GridField f = blank(slice, FieldKind::membership);
  for_pixels(slice, [&](int ix, int iy) {
    const PolynomialMap map(slice.at(slice.pixel_t(ix, iy)));
    const auto r = green_eval(map, map.critical_points()[i], opts);
    f.at(ix, iy) = r.status == GreenStatus::bounded ? 1.0
                   : r.status == GreenStatus::escaped ? 0.0
                                                      : kNaN;
  });
  f.count_nan();
  return f;
}

GridField activity_field(const SliceSpec& slice, int i, const GreenOptions& opts) {
  slice.validate();
  if (i < -1 || i > slice.d - 2) throw std::out_of_range("activity_field: critical index");
  const int res = slice.resolution;
  GridField out = blank(slice, FieldKind::activity);
  std::fill(out.values.begin(), out.values.end(), 0.0);
  const int first = i < 0 ? 0 : i, last = i < 0 ? slice.d - 2 : i;
  for (int k = first; k <= last; ++k) {
    const GridField m = membership_field(slice, k, opts);
    for (int iy = 0; iy < res; ++iy)
      for (int ix = 0; ix < res; ++ix) {
        const double v = m.at(ix, iy);
        if (std::isnan(v)) {
          out.at(ix, iy) = kNaN;
          continue;
        }
        bool active = false;
        const int nx[] = {ix - 1, ix + 1, ix, ix}, ny[] = {iy, iy, iy - 1, iy + 1};
        for (int q = 0; q < 4; ++q) {
          if (nx[q] < 0 || ny[q] < 0 || nx[q] >= res || ny[q] >= res) continue;
          const double u = m.at(nx[q], ny[q]);
          if (!std::isnan(u) && u != v) active = true;
        }
        if (active && !std::isnan(out.at(ix, iy))) out.at(ix, iy) = 1.0;
      }
  }
  out.count_nan();
  return out;
}

std::vector<EquidistReport> equidist_reports(const SliceSpec& slice, std::span<const int> periods,
                                             std::span<const cplx> ws,
                                             const EquidistOptions& opts) {
  slice.validate();
  using clock = std::chrono::steady_clock;
  const int res = slice.resolution;
  const std::size_t px = slice.size();
  const GridField L = field_L(slice, opts.field);

  const std::size_t nw = ws.size(), np = periods.size();
  std::vector<EquidistReport> reps(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    reps[k].w = ws[k];
    reps[k].periods.assign(periods.begin(), periods.end());
    reps[k].l1_errors.assign(np, kNaN);
    reps[k].root_counts.assign(np, 0);
    reps[k].normalized_masses.assign(np, kNaN);
    reps[k].runtime_s.assign(np, 0.0);
    reps[k].failed.assign(np, 0);
    reps[k].roots.assign(np, {});
    reps[k].total_pixels = static_cast<long long>(px);
    if (std::abs(ws[k]) > 1.0) reps[k].issues.push_back("w lies outside the closed unit disc");
  }
  // L_n values per (w, n); exclusion mask per w, shared by every n
  std::vector<std::vector<std::vector<double>>> ln(nw, std::vector<std::vector<double>>(np));
  std::vector<std::vector<std::uint8_t>> mask(nw, std::vector<std::uint8_t>(px, 0));
  for (std::size_t k = 0; k < nw; ++k)
    for (std::size_t q = 0; q < px; ++q)
      if (!std::isfinite(L.values[q])) mask[k][q] = 1;

  for (std::size_t pi = 0; pi < np; ++pi) {
    const int n = periods[pi];
    const double scale = std::pow(static_cast<double>(slice.d), -n);
    const auto t0 = clock::now();
    std::vector<detail::LogGrid> grids;
    detail::SweepAnchors anchors;
    try {
      const SweepStats st =
          detail::sweep_log_grids(slice, n, ws, opts.pern.solver, grids, anchors);
      const auto roots = detail::pern_roots_from_grids(slice, n, ws, grids, anchors, opts.pern);
      const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
      for (std::size_t k = 0; k < nw; ++k) {
        EquidistReport& rep = reps[k];
        if (st.failures > 0)
          rep.issues.push_back("n=" + std::to_string(n) + ": " + std::to_string(st.failures) +
                               " pixels without a certified spectrum");
        ln[k][pi].resize(px);
        for (std::size_t q = 0; q < px; ++q) {
          ln[k][pi][q] = grids[k].log_abs[q] * scale;
          if (!std::isfinite(ln[k][pi][q])) mask[k][q] = 1;
        }
        const PernReport& pr = roots[k];
        long long count = 0;
        for (const auto& r : pr.roots) {
          count += r.multiplicity;
          const auto [ix, iy] = slice.pixel_of(r.t);
          for (int dy = -opts.mask_radius; dy <= opts.mask_radius; ++dy)
            for (int dx = -opts.mask_radius; dx <= opts.mask_radius; ++dx) {
              const int x = ix + dx, y = iy + dy;
              if (x >= 0 && y >= 0 && x < res && y < res)
                mask[k][static_cast<std::size_t>(y) * res + x] = 1;
            }
        }
        rep.root_counts[pi] = count;
        rep.roots[pi] = pr.roots;
        rep.normalized_masses[pi] = static_cast<double>(count) * scale;
        if (!pr.ok) {
          rep.failed[pi] = 1;
          rep.issues.push_back("n=" + std::to_string(n) + ": winding total " +
                               std::to_string(pr.winding_total) + ", roots found " +
                               std::to_string(pr.found_total) + ", unresolved blocks " +
                               std::to_string(pr.unresolved_blocks));
        }
        rep.runtime_s[pi] = elapsed;
      }
    } catch (const std::exception& e) {
      for (auto& rep : reps) {
        rep.failed[pi] = 1;
        rep.issues.push_back("n=" + std::to_string(n) + ": " + e.what());
      }
    }
  }

  for (std::size_t k = 0; k < nw; ++k) {
    EquidistReport& rep = reps[k];
    long long masked = 0;
    for (auto m : mask[k]) masked += m;
    rep.masked_pixels = masked;
    for (std::size_t pi = 0; pi < np; ++pi) {
      if (ln[k][pi].empty()) continue;
      double sum = 0.0;
      long long used = 0;
      for (std::size_t q = 0; q < px; ++q) {
        if (mask[k][q]) continue;
        sum += std::abs(ln[k][pi][q] - L.values[q]);
        ++used;
      }
      rep.l1_errors[pi] = used > 0 ? sum / used : kNaN;
    }
  }
  return reps;
}

EquidistReport equidist_report(const SliceSpec& slice, std::span<const int> periods, cplx w,
                               const EquidistOptions& opts) {
  const cplx ws[] = {w};
  return std::move(equidist_reports(slice, periods, ws, opts)[0]);
}

}  // namespace perbif
