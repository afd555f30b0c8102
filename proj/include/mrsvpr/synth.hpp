#pragma once

#include <cstdint>
#include <optional>

#include "mrsvpr/types.hpp"

namespace mrsvpr {

/// Recipe for a synthetic reference/test pair. The reference is a smooth
/// random walk in descriptor space (nearby frames look alike, distant frames
/// do not); the test sequence re-samples a window of it at a constant speed
/// `warp`, adds bounded per-element noise, and optionally permutes a fraction
/// of descriptor elements per frame (a crude viewpoint change).
struct SyntheticSpec {
  std::int64_t ref_len = 1000;
  std::int64_t test_len = 100;
  std::int64_t dim = 128;
  double warp = 1.0;             // > 0; test frame t samples ref at
                                 // round(end - warp * (test_len - t))
  double noise = 0.0;            // uniform element noise amplitude
  double viewpoint_jitter = 0.0; // fraction of elements permuted per frame
  double walk_velocity = 0.016;  // per-coordinate speed bound of the walk
  std::optional<std::int64_t> embed_end;  // fixed end index; random if unset
};

struct SyntheticResult {
  FrameSequence reference;
  FrameSequence test;
  std::int64_t truth_end = 0;    // reference end index the test aligns to
  std::int64_t truth_start = 0;  // reference index test frame 1 samples
};

/// Generates the pair deterministically from `seed`.
/// Throws ConfigError for out-of-range spec values, InputError when the
/// reference is too short to embed the warped window.
SyntheticResult make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace mrsvpr
