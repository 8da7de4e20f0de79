#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "perbif/cycles.hpp"
#include "perbif/family.hpp"
#include "perbif/potentials.hpp"

namespace perbif {

/// Complex line lambda(t) = base + t * direction sampled on a square window
/// of t values. Pixel (ix, iy) sits at the cell center
///   t = center + (-hw + (ix + 1/2) h) + i (-hw + (iy + 1/2) h),  h = 2 hw / res,
/// and grids are stored row-major: values[iy * res + ix].
struct SliceSpec {
  int d = 2;
  ParamPoint base;
  ParamPoint direction = ParamPoint::quadratic(1.0);
  cplx center{0.0, 0.0};
  double half_width = 1.0;
  int resolution = 64;

  /// The slice of the quadratic family in the a-coordinate.
  static SliceSpec quadratic_a(cplx center, double half_width, int resolution);

  void validate() const;
  double cell() const { return 2.0 * half_width / resolution; }
  cplx pixel_t(int ix, int iy) const;
  ParamPoint at(cplx t) const { return base.shifted(direction, t); }
  std::size_t size() const {
    return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  }
  bool contains(cplx t) const;
  /// Pixel whose cell contains t, clamped to the grid.
  std::pair<int, int> pixel_of(cplx t) const;
};

enum class FieldKind { L, L_n, L_n_plus, laplacian_mass, activity, membership };

std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

struct GridField {
  SliceSpec slice;
  FieldKind kind = FieldKind::L;
  std::vector<double> values;  // NaN where nothing was certified
  int n = 0;                   // level, for L_n fields
  cplx w{0.0, 0.0};            // for L_n fields
  double total_mass = 0.0;     // laplacian_mass fields
  double clamped_mass = 0.0;   // negative Laplacian mass dropped as noise
  long long nan_count = 0;
  std::vector<std::uint8_t> mask;  // 1 = excluded; empty if no mask applies

  double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * slice.resolution + ix]; }
  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * slice.resolution + ix];
  }
  void count_nan();
};

enum class LyapunovField { critical_green, equilibrium_measure };

struct FieldOptions {
  LyapunovField estimator = LyapunovField::critical_green;
  GreenOptions green;
  int samples = 2000;  // equilibrium_measure
  int depth = 40;      // equilibrium_measure
  std::uint64_t seed = 1;
};

GridField field_L(const SliceSpec& slice, const FieldOptions& opts = {});

struct SweepStats {
  long long pixels = 0;
  long long fallbacks = 0;  // pixels needing a subdivided or full re-solve
  long long failures = 0;   // NaN pixels
};

/// L_n(., w) over the slice for several w from one sweep of multiplier spectra.
std::vector<GridField> field_Ln_multi(const SliceSpec& slice, int n, std::span<const cplx> ws,
                                      const SolverOptions& opts = {}, SweepStats* stats = nullptr);
GridField field_Ln(const SliceSpec& slice, int n, cplx w, const SolverOptions& opts = {});

/// 5-point Laplacian times h^2 / (2 pi); boundary cells are 0.
GridField bif_measure(const GridField& field);

/// 1 where the orbit of critical point i is certified bounded, 0 where it
/// escapes, NaN when undecided.
GridField membership_field(const SliceSpec& slice, int i, const GreenOptions& opts = {});
/// 1 where membership differs from one of the 4 neighbours. i = -1 takes the
/// union over all marked critical points.
GridField activity_field(const SliceSpec& slice, int i, const GreenOptions& opts = {});

struct PernOptions {
  SolverOptions solver;
  int block = 16;             // pixels per block side for winding counts
  double merge_tol = 1e-5;    // relative to the half-width
  double newton_tol = 1e-13;  // relative step size
  int max_newton = 100;
  double accept_tol = 1.0;    // reported only; see README
};

struct PernRoot {
  cplx t;
  int multiplicity = 1;
  double residual = 0.0;  // |p_n|^{d^{-n}} at t
};

struct PernReport {
  std::vector<PernRoot> roots;  // sorted by lex_less on t
  long long winding_total = 0;  // sum of block windings
  long long found_total = 0;    // sum of multiplicities
  long long unresolved_blocks = 0;
  bool ok = true;
  std::vector<std::string> issues;
};

/// Zeros of t -> p_n(lambda(t), w) inside the slice window (pixel-center hull).
PernReport pern_roots_in_slice(const SliceSpec& slice, int n, cplx w, const PernOptions& opts = {});

struct EquidistOptions {
  PernOptions pern;
  FieldOptions field;
  int mask_radius = 2;
};

struct EquidistReport {
  cplx w;
  std::vector<int> periods;
  std::vector<double> l1_errors;
  std::vector<long long> root_counts;
  std::vector<double> normalized_masses;
  std::vector<double> runtime_s;
  std::vector<char> failed;  // per n
  std::vector<std::vector<PernRoot>> roots;  // per n
  std::vector<std::string> issues;
  long long masked_pixels = 0;
  long long total_pixels = 0;
};

/// Reports for several w sharing the spectrum sweeps, the L field and the mask.
std::vector<EquidistReport> equidist_reports(const SliceSpec& slice, std::span<const int> periods,
                                             std::span<const cplx> ws,
                                             const EquidistOptions& opts = {});
EquidistReport equidist_report(const SliceSpec& slice, std::span<const int> periods, cplx w,
                               const EquidistOptions& opts = {});

}  // namespace perbif
