#pragma once

#include <functional>
#include <span>
#include <vector>

#include "perbif/paramspace.hpp"

namespace perbif::detail {

/// Multiplier spectra over a slice, obtained by continuing the periodic
/// points from pixel to pixel. Column 0 is walked top to bottom from a
/// single full solve, then every row left to right (rows run in parallel).
struct SweepAnchors {
  int stride = 8;
  int per_side = 0;
  /// raw tracked periodic points at pixels (stride*i, stride*j); empty when
  /// that pixel failed
  std::vector<std::vector<cplx>> points;
  const std::vector<cplx>& at(int i, int j) const {
    return points[static_cast<std::size_t>(j) * per_side + i];
  }
};

/// Called once per pixel, from worker threads; spectrum is nullptr when the
/// pixel failed.
using PixelVisitor = std::function<void(int ix, int iy, const MultiplierSpectrum* spectrum)>;

SweepStats sweep_spectra(const SliceSpec& slice, int n, const SolverOptions& opts,
                         const PixelVisitor& visit, SweepAnchors* anchors = nullptr);

/// Spectrum at an arbitrary t of the slice, continued from the nearest
/// anchor or from the last points this oracle produced. Not thread safe;
/// use one per worker.
class SpectrumOracle {
 public:
  SpectrumOracle(const SliceSpec& slice, int n, const SolverOptions& opts,
                 const SweepAnchors& anchors);
  /// false when no complete periodic point set could be certified at t
  bool eval(cplx t, MultiplierSpectrum& out);
  long long evaluations() const { return evaluations_; }

 private:
  struct Cached {
    cplx t;
    std::vector<cplx> raw;
  };
  const SliceSpec& slice_;
  int n_;
  SolverOptions opts_;
  const SweepAnchors& anchors_;
  std::vector<Cached> cache_;
  long long evaluations_ = 0;
};

}  // namespace perbif::detail
