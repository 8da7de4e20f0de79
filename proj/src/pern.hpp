#pragma once

#include <vector>

#include "perbif/paramspace.hpp"
#include "sweep.hpp"

namespace perbif::detail {

/// Per-pixel log p_n(lambda(t), w) for one w, as produced by a sweep;
/// log_abs is NaN at failed pixels.
struct LogGrid {
  std::vector<double> log_abs;
  std::vector<double> arg;
};

/// Roots of p_n(., w) for every w of a sweep; argument walks along block
/// boundaries are shared between the w values.
std::vector<PernReport> pern_roots_from_grids(const SliceSpec& slice, int n,
                                              std::span<const cplx> ws,
                                              std::span<const LogGrid> grids,
                                              const SweepAnchors& anchors,
                                              const PernOptions& opts);

/// One sweep at level n filling a LogGrid per w and the anchors.
SweepStats sweep_log_grids(const SliceSpec& slice, int n, std::span<const cplx> ws,
                           const SolverOptions& opts, std::vector<LogGrid>& grids,
                           SweepAnchors& anchors);

}  // namespace perbif::detail
