#pragma once

#include <cstdint>
#include <vector>

#include "mrsvpr/types.hpp"

namespace mrsvpr {

/// One resolution level of the coarse-to-fine schedule. Level numbers are
/// 1-based; level i decimates by interval 2^(depth - i), so the last level
/// is always full resolution (interval 1).
struct Level {
  int level = 0;
  std::int64_t interval = 0;
  std::int64_t ref_len = 0;   // ceil(full ref length / interval)
  std::int64_t test_len = 0;  // ceil(full test length / interval)
};

/// The multi-resolution schedule for a reference/test pair.
class LevelSchedule {
 public:
  /// Builds `depth` levels with intervals 2^(depth-1), ..., 2, 1.
  /// Throws ConfigError for depth < 1, InputError for non-positive lengths or
  /// test longer than reference, InfeasibleError when the coarsest test
  /// sequence would fall below `min_coarse_test_len` frames (the schedule is
  /// too deep for the data; the message names the offending level).
  static LevelSchedule build(std::int64_t ref_len, std::int64_t test_len,
                             int depth, std::int64_t min_coarse_test_len = 16);

  int depth() const { return static_cast<int>(levels_.size()); }
  const Level& level(int i) const;  // 1-based
  const std::vector<Level>& levels() const { return levels_; }

 private:
  std::vector<Level> levels_;
};

/// Keeps every interval-th frame starting from the first. The result carries
/// provenance: its frame k (1-based) maps to source index 1 + (k-1)*interval
/// of `seq` (composed with seq's own source indices if already decimated).
FrameSequence decimate(const FrameSequence& seq, std::int64_t interval);

/// Maps an end index from a level to the next finer one (intervals halve, so
/// the index doubles), clamped to the finer level's valid particle range
/// [test_len, ref_len].
std::int64_t promote_index(std::int64_t index, const Level& from,
                           const Level& to);

/// Inverse mapping onto the coarser level (ceil division by 2, clamped), so
/// demote(promote(k)) == k everywhere the clamps are inactive.
std::int64_t demote_index(std::int64_t index, const Level& from,
                          const Level& to);

}  // namespace mrsvpr
