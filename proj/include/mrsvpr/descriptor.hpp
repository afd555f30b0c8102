#pragma once

#include <cstdint>
#include <span>

#include "mrsvpr/types.hpp"

namespace mrsvpr {

/// Parameters of the patch-normalized grayscale descriptor.
struct DescriptorParams {
  std::int64_t grid_width = 32;   // descriptor grid columns
  std::int64_t grid_height = 24;  // descriptor grid rows
  std::int64_t patch = 8;         // normalization patch edge, must divide both

  std::int64_t dim() const { return grid_width * grid_height; }
};

/// Converts an RGB frame (row-major, 3 channels interleaved, any numeric
/// range) to grayscale with the Rec.601 luma weights 0.299/0.587/0.114.
RawFrame rgb_to_gray(std::span<const double> rgb, std::int64_t width,
                     std::int64_t height);

/// Downsamples `frame` to grid_width x grid_height by box (area) averaging,
/// then normalizes each patch x patch block to [0, 1]: values are shifted and
/// range-scaled so the block minimum maps to 0 and the maximum to 1; constant
/// blocks map to 0.5. The result is idempotent at the grid size and invariant
/// to per-block gain/offset changes of the input.
///
/// Throws InputError for an empty frame or a frame smaller than the grid,
/// ConfigError if patch does not divide both grid dimensions.
Descriptor preprocess(const RawFrame& frame, const DescriptorParams& params);

/// Sum of absolute differences between two equal-length descriptors.
/// Throws InputError on length mismatch.
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace mrsvpr
