#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mrsvpr {

/// A single place descriptor: a fixed-length vector of doubles. Descriptors
/// produced by preprocess() lie in [0, 1]; ingested descriptors only need to
/// be finite. Compared with the L1 (sum of absolute differences) metric.
using Descriptor = std::vector<double>;

/// A grayscale image held as row-major doubles. Pixel values are arbitrary
/// finite reals on input; preprocessing normalizes them.
struct RawFrame {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<double> pixels;  // row-major, height*width entries

  bool empty() const { return width <= 0 || height <= 0 || pixels.empty(); }
};

/// An ordered sequence of equal-length descriptors stored contiguously.
///
/// Storage access (frame(), operator[]) is 0-based. Domain-level frame
/// *indices* used by the matching formulas are 1-based; source_index()
/// reports each frame's 1-based position in the full-resolution sequence it
/// was derived from, so decimated sequences keep their provenance.
class FrameSequence {
 public:
  FrameSequence() = default;

  /// Builds a sequence from `count` descriptors of length `dim` stored
  /// row-major in `values`. Source indices default to 1..count.
  static FrameSequence from_descriptors(std::vector<double> values,
                                        std::int64_t count, std::int64_t dim);

  std::int64_t size() const { return count_; }
  std::int64_t dim() const { return dim_; }
  bool empty() const { return count_ == 0; }

  /// 0-based storage access.
  std::span<const double> frame(std::int64_t i) const;

  /// 1-based index of frame i (0-based) in the original full-resolution
  /// sequence. Identity (i+1) for sequences that were never decimated.
  std::int64_t source_index(std::int64_t i) const;

  const std::vector<double>& values() const { return values_; }

  /// Used by decimation to carry provenance; sizes must stay consistent.
  void set_source_indices(std::vector<std::int64_t> src);

 private:
  // Decimation copies frames out of an already-validated sequence, so it may
  // construct the result without re-checking every element.
  friend FrameSequence decimate(const FrameSequence& seq,
                                std::int64_t interval);

  std::int64_t count_ = 0;
  std::int64_t dim_ = 0;
  std::vector<double> values_;
  std::vector<std::int64_t> source_;
};

}  // namespace mrsvpr
