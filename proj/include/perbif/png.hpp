#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "perbif/paramspace.hpp"

namespace perbif {

/// 8-bit grayscale PNG, rows top to bottom.
void write_png_gray(const std::filesystem::path& path, int width, int height,
                    std::span<const std::uint8_t> pixels);

/// Linear ramp over the 1st..99th percentile of the finite values; NaN
/// pixels are black. Image row 0 is the top of the window (largest Im t).
std::vector<std::uint8_t> field_to_gray(const GridField& f);

/// Draws a small cross of the given gray level centred on each marker.
void mark_points(std::vector<std::uint8_t>& img, const SliceSpec& slice,
                 std::span<const cplx> markers, std::uint8_t level = 128);

}  // namespace perbif
