#include "mrsvpr/types.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mrsvpr/error.hpp"

namespace mrsvpr {

FrameSequence FrameSequence::from_descriptors(std::vector<double> values,
                                              std::int64_t count,
                                              std::int64_t dim) {
  if (count < 0 || dim <= 0) {
    throw InputError("frame sequence: count must be >= 0 and dim >= 1");
  }
  if (static_cast<std::int64_t>(values.size()) != count * dim) {
    throw InputError("frame sequence: expected " + std::to_string(count * dim) +
                     " values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InputError("frame sequence: descriptors must be finite");
    }
  }
  FrameSequence seq;
  seq.count_ = count;
  seq.dim_ = dim;
  seq.values_ = std::move(values);
  seq.source_.resize(count);
  std::iota(seq.source_.begin(), seq.source_.end(), std::int64_t{1});
  return seq;
}

std::span<const double> FrameSequence::frame(std::int64_t i) const {
  if (i < 0 || i >= count_) {
    throw InputError("frame sequence: frame offset " + std::to_string(i) +
                     " out of range [0, " + std::to_string(count_) + ")");
  }
  return std::span<const double>(values_.data() + i * dim_,
                                 static_cast<std::size_t>(dim_));
}

std::int64_t FrameSequence::source_index(std::int64_t i) const {
  if (i < 0 || i >= count_) {
    throw InputError("frame sequence: frame offset " + std::to_string(i) +
                     " out of range [0, " + std::to_string(count_) + ")");
  }
  return source_[i];
}

void FrameSequence::set_source_indices(std::vector<std::int64_t> src) {
  if (static_cast<std::int64_t>(src.size()) != count_) {
    throw InputError("frame sequence: source index count mismatch");
  }
  source_ = std::move(src);
}

}  // namespace mrsvpr
