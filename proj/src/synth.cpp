#include "mrsvpr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mrsvpr/error.hpp"
#include "mrsvpr/seqmatch.hpp"

namespace mrsvpr {

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.ref_len < 1 || spec.test_len < 1) {
    throw ConfigError("synth: sequence lengths must be >= 1");
  }
  if (spec.test_len > spec.ref_len) {
    throw ConfigError("synth: test length exceeds reference length");
  }
  if (spec.dim < 1 || spec.dim > 1 << 16) {
    throw ConfigError("synth: dim must be in [1, 65536]");
  }
  if (!(spec.warp > 0.0) || spec.warp > 8.0) {
    throw ConfigError("synth: warp must be in (0, 8]");
  }
  if (spec.noise < 0.0 || spec.noise > 1.0) {
    throw ConfigError("synth: noise amplitude must be in [0, 1]");
  }
  if (spec.viewpoint_jitter < 0.0 || spec.viewpoint_jitter > 1.0) {
    throw ConfigError("synth: viewpoint jitter must be in [0, 1]");
  }
  if (!(spec.walk_velocity > 0.0) || spec.walk_velocity > 0.5) {
    throw ConfigError("synth: walk velocity must be in (0, 0.5]");
  }
}

}  // namespace

SyntheticResult make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  validate(spec);
  std::mt19937_64 rng(seed);
  const std::int64_t m = spec.ref_len;
  const std::int64_t n = spec.test_len;
  const std::int64_t dim = spec.dim;

  // Reference: each coordinate performs a reflected constant-velocity walk
  // in [0, 1] with a slowly drifting speed, so frame-to-frame change is tiny
  // while frames a few dozen steps apart differ substantially.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> vel(-spec.walk_velocity,
                                             spec.walk_velocity);
  std::uniform_real_distribution<double> drift(-spec.walk_velocity / 64.0,
                                               spec.walk_velocity / 64.0);
  std::vector<double> pos(dim);
  std::vector<double> speed(dim);
  for (std::int64_t d = 0; d < dim; ++d) {
    pos[d] = unit(rng);
    speed[d] = vel(rng);
  }
  std::vector<double> ref_values;
  ref_values.reserve(static_cast<std::size_t>(m * dim));
  for (std::int64_t k = 0; k < m; ++k) {
    ref_values.insert(ref_values.end(), pos.begin(), pos.end());
    for (std::int64_t d = 0; d < dim; ++d) {
      double x = pos[d] + speed[d];
      if (x < 0.0) {
        x = -x;
        speed[d] = -speed[d];
      } else if (x > 1.0) {
        x = 2.0 - x;
        speed[d] = -speed[d];
      }
      pos[d] = std::clamp(x, 0.0, 1.0);
      speed[d] += drift(rng);
    }
  }

  // The warped window must fit: its first sample round(e - warp*(n-1))
  // has to stay >= 1.
  const std::int64_t e_min =
      static_cast<std::int64_t>(std::ceil(spec.warp * (n - 1))) + 1;
  if (e_min > m) {
    throw InputError("synth: reference too short to embed a warp " +
                     std::to_string(spec.warp) + " window of " +
                     std::to_string(n) + " frames");
  }
  std::int64_t end;
  if (spec.embed_end.has_value()) {
    end = *spec.embed_end;
    if (end < e_min || end > m) {
      throw InputError("synth: embed_end " + std::to_string(end) +
                       " outside feasible range [" + std::to_string(e_min) +
                       ", " + std::to_string(m) + "]");
    }
  } else {
    end = std::uniform_int_distribution<std::int64_t>(e_min, m)(rng);
  }

  std::uniform_real_distribution<double> noise(-spec.noise, spec.noise);
  const std::int64_t permuted =
      round_half_up(spec.viewpoint_jitter * static_cast<double>(dim));
  std::vector<double> test_values;
  test_values.reserve(static_cast<std::size_t>(n * dim));
  std::vector<double> frame(dim);
  std::vector<std::int64_t> positions(dim);
  for (std::int64_t t = 1; t <= n; ++t) {
    const std::int64_t src = round_half_up(end - spec.warp * (n - t));
    const std::size_t base = static_cast<std::size_t>((src - 1) * dim);
    for (std::int64_t d = 0; d < dim; ++d) {
      double v = ref_values[base + d];
      if (spec.noise > 0.0) {
        v = std::clamp(v + noise(rng), 0.0, 1.0);
      }
      frame[d] = v;
    }
    if (permuted >= 2) {
      // Pick the affected elements with a partial Fisher-Yates pass, then
      // shuffle just their values.
      for (std::int64_t d = 0; d < dim; ++d) {
        positions[d] = d;
      }
      for (std::int64_t i = 0; i < permuted; ++i) {
        const std::int64_t j = std::uniform_int_distribution<std::int64_t>(
            i, dim - 1)(rng);
        std::swap(positions[i], positions[j]);
      }
      std::vector<double> picked(permuted);
      for (std::int64_t i = 0; i < permuted; ++i) {
        picked[i] = frame[positions[i]];
      }
      std::shuffle(picked.begin(), picked.end(), rng);
      for (std::int64_t i = 0; i < permuted; ++i) {
        frame[positions[i]] = picked[i];
      }
    }
    test_values.insert(test_values.end(), frame.begin(), frame.end());
  }

  SyntheticResult out;
  out.reference =
      FrameSequence::from_descriptors(std::move(ref_values), m, dim);
  out.test = FrameSequence::from_descriptors(std::move(test_values), n, dim);
  out.truth_end = end;
  out.truth_start = round_half_up(end - spec.warp * (n - 1));
  return out;
}

}  // namespace mrsvpr
