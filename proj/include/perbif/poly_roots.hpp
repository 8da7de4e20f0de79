#pragma once

#include <complex>
#include <span>
#include <vector>

namespace perbif {

/// Roots of a dense polynomial given by ascending coefficients (the leading
/// coefficient must be nonzero). Aberth-Ehrlich simultaneous iteration,
/// suitable for the small degrees met in pullback sampling.
std::vector<std::complex<double>> polynomial_roots(
    std::span<const std::complex<double>> coeffs, int max_iter = 500);

}  // namespace perbif
