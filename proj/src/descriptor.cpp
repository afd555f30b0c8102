#include "mrsvpr/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrsvpr/error.hpp"

namespace mrsvpr {

namespace {

// Exact box-filter (area) resampling of a row-major image to gw x gh.
// Each output cell averages the input pixels it covers, with fractional
// pixels weighted by overlap area, so the identity case (already gw x gh)
// reproduces the input bit-for-bit.
std::vector<double> area_downsample(const RawFrame& frame, std::int64_t gw,
                                    std::int64_t gh) {
  if (frame.width == gw && frame.height == gh) {
    return frame.pixels;
  }
  std::vector<double> out(static_cast<std::size_t>(gw * gh), 0.0);
  const double sx = static_cast<double>(frame.width) / static_cast<double>(gw);
  const double sy = static_cast<double>(frame.height) / static_cast<double>(gh);
  for (std::int64_t gy = 0; gy < gh; ++gy) {
    const double y0 = gy * sy;
    const double y1 = (gy + 1) * sy;
    const std::int64_t py0 = static_cast<std::int64_t>(std::floor(y0));
    const std::int64_t py1 =
        std::min(frame.height, static_cast<std::int64_t>(std::ceil(y1)));
    for (std::int64_t gx = 0; gx < gw; ++gx) {
      const double x0 = gx * sx;
      const double x1 = (gx + 1) * sx;
      const std::int64_t px0 = static_cast<std::int64_t>(std::floor(x0));
      const std::int64_t px1 =
          std::min(frame.width, static_cast<std::int64_t>(std::ceil(x1)));
      double sum = 0.0;
      double area = 0.0;
      for (std::int64_t py = py0; py < py1; ++py) {
        const double hy = std::min<double>(y1, py + 1) - std::max<double>(y0, py);
        for (std::int64_t px = px0; px < px1; ++px) {
          const double wx =
              std::min<double>(x1, px + 1) - std::max<double>(x0, px);
          const double w = wx * hy;
          sum += w * frame.pixels[py * frame.width + px];
          area += w;
        }
      }
      out[gy * gw + gx] = sum / area;
    }
  }
  return out;
}

}  // namespace

RawFrame rgb_to_gray(std::span<const double> rgb, std::int64_t width,
                     std::int64_t height) {
  if (width <= 0 || height <= 0 ||
      static_cast<std::int64_t>(rgb.size()) != width * height * 3) {
    throw InputError("rgb_to_gray: buffer size does not match 3-channel " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
  RawFrame gray;
  gray.width = width;
  gray.height = height;
  gray.pixels.resize(static_cast<std::size_t>(width * height));
  for (std::int64_t i = 0; i < width * height; ++i) {
    gray.pixels[i] =
        0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
  }
  return gray;
}

Descriptor preprocess(const RawFrame& frame, const DescriptorParams& params) {
  if (params.grid_width <= 0 || params.grid_height <= 0 || params.patch <= 0) {
    throw ConfigError("descriptor: grid and patch sizes must be positive");
  }
  if (params.grid_width % params.patch != 0 ||
      params.grid_height % params.patch != 0) {
    throw ConfigError("descriptor: patch " + std::to_string(params.patch) +
                      " must divide grid " + std::to_string(params.grid_width) +
                      "x" + std::to_string(params.grid_height));
  }
  if (frame.empty() ||
      static_cast<std::int64_t>(frame.pixels.size()) !=
          frame.width * frame.height) {
    throw InputError("descriptor: empty or inconsistent frame");
  }
  if (frame.width < params.grid_width || frame.height < params.grid_height) {
    throw InputError("descriptor: frame " + std::to_string(frame.width) + "x" +
                     std::to_string(frame.height) + " smaller than grid " +
                     std::to_string(params.grid_width) + "x" +
                     std::to_string(params.grid_height));
  }
  for (double v : frame.pixels) {
    if (!std::isfinite(v)) {
      throw InputError("descriptor: frame pixels must be finite");
    }
  }

  const std::int64_t gw = params.grid_width;
  const std::int64_t gh = params.grid_height;
  std::vector<double> grid = area_downsample(frame, gw, gh);

  // Per-patch range normalization. Shifting by the block minimum and scaling
  // by the value range puts every block in [0, 1] while cancelling any
  // per-block gain/offset of the input; flat blocks carry no contrast and
  // are pinned to 0.5.
  Descriptor out(grid.size(), 0.0);
  const std::int64_t patch = params.patch;
  for (std::int64_t by = 0; by < gh; by += patch) {
    for (std::int64_t bx = 0; bx < gw; bx += patch) {
      double lo = grid[by * gw + bx];
      double hi = lo;
      for (std::int64_t y = by; y < by + patch; ++y) {
        for (std::int64_t x = bx; x < bx + patch; ++x) {
          lo = std::min(lo, grid[y * gw + x]);
          hi = std::max(hi, grid[y * gw + x]);
        }
      }
      const double range = hi - lo;
      const bool flat =
          range <= 1e-12 * std::max({1.0, std::abs(hi), std::abs(lo)});
      for (std::int64_t y = by; y < by + patch; ++y) {
        for (std::int64_t x = bx; x < bx + patch; ++x) {
          out[y * gw + x] = flat ? 0.5 : (grid[y * gw + x] - lo) / range;
        }
      }
    }
  }
  return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("distance: descriptor lengths differ (" +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::abs(a[i] - b[i]);
  }
  return sum;
}

}  // namespace mrsvpr
