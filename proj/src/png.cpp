#include "perbif/png.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <zlib.h>

namespace perbif {

namespace {

void put32(std::string& s, std::uint32_t v) {
  for (int sh = 24; sh >= 0; sh -= 8) s += static_cast<char>((v >> sh) & 0xff);
}

void chunk(std::string& out, const char* type, const std::string& data) {
  put32(out, static_cast<std::uint32_t>(data.size()));
  std::string body(type, 4);
  body += data;
  out += body;
  put32(out, static_cast<std::uint32_t>(
                 crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
}

}  // namespace

void write_png_gray(const std::filesystem::path& path, int width, int height,
                    std::span<const std::uint8_t> pixels) {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("png: pixel buffer does not match the image size");
  std::string raw;
  raw.reserve(static_cast<std::size_t>(height) * (width + 1));
  for (int y = 0; y < height; ++y) {
    raw += '\0';  // filter: none
    raw.append(reinterpret_cast<const char*>(pixels.data()) + static_cast<std::size_t>(y) * width,
               static_cast<std::size_t>(width));
  }
  uLongf len = compressBound(static_cast<uLong>(raw.size()));
  std::string z(len, '\0');
  if (compress2(reinterpret_cast<Bytef*>(z.data()), &len, reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw std::runtime_error("png: compression failed");
  z.resize(len);

  std::string out = "\x89PNG\r\n\x1a\n";
  std::string ihdr;
  put32(ihdr, static_cast<std::uint32_t>(width));
  put32(ihdr, static_cast<std::uint32_t>(height));
  ihdr += '\x08';  // bit depth
  ihdr += '\x00';  // grayscale
  ihdr += std::string(3, '\0');
  chunk(out, "IHDR", ihdr);
  chunk(out, "IDAT", z);
  chunk(out, "IEND", "");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << out;
}

std::vector<std::uint8_t> field_to_gray(const GridField& f) {
  const int res = f.slice.resolution;
  std::vector<double> finite;
  for (double v : f.values)
    if (std::isfinite(v)) finite.push_back(v);
  std::vector<std::uint8_t> img(f.values.size(), 0);
  if (finite.empty()) return img;
  std::sort(finite.begin(), finite.end());
  const auto pct = [&](double q) {
    return finite[static_cast<std::size_t>(std::floor(q * static_cast<double>(finite.size() - 1)))];
  };
  double lo = pct(0.01), hi = pct(0.99);
  if (!(hi > lo)) {
    // flat or two-valued data: fall back to the full range
    lo = finite.front();
    hi = finite.back();
  }
  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix) {
      const double v = f.at(ix, iy);
      if (!std::isfinite(v)) continue;
      const double u = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 1.0;
      img[static_cast<std::size_t>(res - 1 - iy) * res + ix] =
          static_cast<std::uint8_t>(std::lround(255.0 * u));
    }
  return img;
}

void mark_points(std::vector<std::uint8_t>& img, const SliceSpec& slice,
                 std::span<const cplx> markers, std::uint8_t level) {
  const int res = slice.resolution;
  for (cplx t : markers) {
    if (!slice.contains(t)) continue;
    const auto [ix, iy] = slice.pixel_of(t);
    for (int k = -2; k <= 2; ++k) {
      for (auto [x, y] : {std::pair{ix + k, iy}, std::pair{ix, iy + k}}) {
        if (x < 0 || y < 0 || x >= res || y >= res) continue;
        img[static_cast<std::size_t>(res - 1 - y) * res + x] = level;
      }
    }
  }
}

}  // namespace perbif
