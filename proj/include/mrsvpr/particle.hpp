#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mrsvpr/types.hpp"

namespace mrsvpr {

/// One hypothesis over reference end indices. `index` is the 1-based end
/// index of the window the particle believes the test sequence matches;
/// `id` is stable within a generation (offspring are renumbered).
struct Particle {
  std::int64_t index = 0;
  double weight = 0.0;
  std::int64_t id = 0;
  double last_score = 0.0;  // most recent trajectory score; NaN before any
};

/// A population of particles plus the RNG that drives its resampling.
/// Indices are confined to [min_index, max_index].
class ParticleSet {
 public:
  ParticleSet(std::int64_t min_index, std::int64_t max_index,
              std::uint64_t seed);

  std::int64_t size() const { return static_cast<std::int64_t>(p_.size()); }
  Particle& operator[](std::int64_t i) { return p_[i]; }
  const Particle& operator[](std::int64_t i) const { return p_[i]; }

  std::vector<Particle>& particles() { return p_; }
  const std::vector<Particle>& particles() const { return p_; }

  std::int64_t min_index() const { return min_index_; }
  std::int64_t max_index() const { return max_index_; }

  std::mt19937_64& rng() { return rng_; }

  /// Re-binds the index bounds (used when the population moves to the next
  /// pyramid level). Does not touch particle state.
  void set_bounds(std::int64_t min_index, std::int64_t max_index);

 private:
  std::vector<Particle> p_;
  std::int64_t min_index_;
  std::int64_t max_index_;
  std::mt19937_64 rng_;
};

/// Initial population size: ceil((ref_len / test_len) * tau), at least 1.
std::int64_t initial_particle_count(std::int64_t ref_len, std::int64_t test_len,
                                    double tau);

/// Fraction of overlap between neighboring particle windows, (tau - 1) / tau,
/// clamped at 0 for tau < 1 (windows no longer overlap).
double overlap_rate(double tau);

/// Spreads `count` particles evenly over [min_index, max_index] (rounded to
/// integers, endpoints included; a single particle sits at the midpoint) with
/// uniform weights 1/count and ids 0..count-1.
/// Throws InputError when count < 1 or the range is empty or has fewer
/// positions than `count`.
ParticleSet init_uniform(std::int64_t count, std::int64_t min_index,
                         std::int64_t max_index, std::uint64_t seed);

/// One multiplicative weight update: prior * logistic(-(score - median) /
/// scale). Lower scores than the cohort median grow the weight, higher
/// scores shrink it; score == median halves is neutral at 0.5.
/// Throws InputError for scale <= 0, negative prior, or non-finite inputs.
double update_weight(double prior, double score, double median, double scale);

/// Applies update_weight to the whole population with median and scale
/// computed from `scores` (scale = interquartile range floored at 1e-6) and
/// records each particle's score in last_score.
void update_weights(ParticleSet& set, std::span<const double> scores);

/// Scales weights to sum to 1 (within 1e-9). Throws DegenerateError when all
/// weights are zero (callers typically reset to uniform), InputError on
/// negative weights.
void normalize_weights(ParticleSet& set);

/// Effective sample size 1 / sum(w^2) of a normalized population.
/// In [1, size]; equals size exactly for uniform weights.
double effectiveness(const ParticleSet& set);

/// Low-variance systematic resampling: one uniform draw places count evenly
/// spaced pointers over the cumulative weights; each offspring copies its
/// ancestor's index, then receives discrete Gaussian jitter (sigma
/// `jitter_sigma`, rounded, clamped to the set bounds). Offspring weights are
/// reset to uniform and ids renumbered 0..count-1. `target_count` == 0 keeps
/// the population size.
void resample(ParticleSet& set, double jitter_sigma,
              std::int64_t target_count = 0);

/// Default jitter scale: ceil(test_len / 4).
std::int64_t jitter_sigma_quarter(std::int64_t test_len);

/// Length of the union of particle windows [index - test_len, index]
/// (inclusive, clipped at frame 1, so a lone particle away from the boundary
/// covers test_len + 1 positions and the total never exceeds the reference
/// length). With `above_median_only`, only particles with weight strictly
/// above the median weight count; if no weight is strictly above (uniform
/// population), all do.
std::int64_t coverage_span(const ParticleSet& set, std::int64_t test_len,
                           bool above_median_only = false);

/// Ratio of the current to the previous span; defined as 1.0 when there is
/// no previous span yet (prev <= 0).
double coverage_rate(std::int64_t span_cur, std::int64_t span_prev);

/// Linear-interpolation quantile of an unsorted sample (p in [0, 1]).
double quantile(std::span<const double> values, double p);

}  // namespace mrsvpr
