#include "mrsvpr/particle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mrsvpr/error.hpp"
#include "mrsvpr/seqmatch.hpp"

namespace mrsvpr {

ParticleSet::ParticleSet(std::int64_t min_index, std::int64_t max_index,
                         std::uint64_t seed)
    : min_index_(min_index), max_index_(max_index), rng_(seed) {
  if (min_index > max_index) {
    throw InputError("particles: empty index range [" +
                     std::to_string(min_index) + ", " +
                     std::to_string(max_index) + "]");
  }
}

void ParticleSet::set_bounds(std::int64_t min_index, std::int64_t max_index) {
  if (min_index > max_index) {
    throw InputError("particles: empty index range");
  }
  min_index_ = min_index;
  max_index_ = max_index;
}

std::int64_t initial_particle_count(std::int64_t ref_len, std::int64_t test_len,
                                    double tau) {
  if (ref_len <= 0 || test_len <= 0) {
    throw InputError("particles: sequence lengths must be positive");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ConfigError("particles: tau must be a positive finite number");
  }
  const double raw = (static_cast<double>(ref_len) / test_len) * tau;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

double overlap_rate(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ConfigError("particles: tau must be a positive finite number");
  }
  return std::max(0.0, (tau - 1.0) / tau);
}

ParticleSet init_uniform(std::int64_t count, std::int64_t min_index,
                         std::int64_t max_index, std::uint64_t seed) {
  if (count < 1) {
    throw InputError("particles: count must be >= 1");
  }
  if (min_index > max_index) {
    throw InputError("particles: empty index range [" +
                     std::to_string(min_index) + ", " +
                     std::to_string(max_index) + "]");
  }
  if (max_index - min_index + 1 < count) {
    throw InputError("particles: range [" + std::to_string(min_index) + ", " +
                     std::to_string(max_index) + "] has fewer than " +
                     std::to_string(count) + " positions");
  }
  ParticleSet set(min_index, max_index, seed);
  set.particles().resize(count);
  for (std::int64_t k = 0; k < count; ++k) {
    std::int64_t index;
    if (count == 1) {
      index = round_half_up((min_index + max_index) / 2.0);
    } else {
      index = min_index +
              round_half_up(static_cast<double>(k) * (max_index - min_index) /
                            static_cast<double>(count - 1));
    }
    set[k] = Particle{index, 1.0 / count, k,
                      std::numeric_limits<double>::quiet_NaN()};
  }
  return set;
}

double update_weight(double prior, double score, double median, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("update_weight: scale must be positive");
  }
  if (prior < 0.0 || !std::isfinite(prior) || !std::isfinite(score) ||
      !std::isfinite(median)) {
    throw InputError("update_weight: inputs must be finite, prior >= 0");
  }
  return prior / (1.0 + std::exp((score - median) / scale));
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) {
    throw InputError("quantile: empty sample");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError("quantile: p must be in [0, 1]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) {
    return sorted.back();
  }
  return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

void update_weights(ParticleSet& set, std::span<const double> scores) {
  if (static_cast<std::int64_t>(scores.size()) != set.size()) {
    throw InputError("update_weights: need one score per particle");
  }
  const double median = quantile(scores, 0.5);
  const double iqr = quantile(scores, 0.75) - quantile(scores, 0.25);
  const double scale = std::max(iqr, 1e-6);
  for (std::int64_t i = 0; i < set.size(); ++i) {
    set[i].weight = update_weight(set[i].weight, scores[i], median, scale);
    set[i].last_score = scores[i];
  }
}

void normalize_weights(ParticleSet& set) {
  if (set.size() == 0) {
    throw InputError("normalize: empty population");
  }
  double sum = 0.0;
  for (std::int64_t i = 0; i < set.size(); ++i) {
    if (set[i].weight < 0.0 || !std::isfinite(set[i].weight)) {
      throw InputError("normalize: weights must be finite and >= 0");
    }
    sum += set[i].weight;
  }
  if (sum <= 0.0) {
    throw DegenerateError("normalize: population weight collapsed to zero");
  }
  for (std::int64_t i = 0; i < set.size(); ++i) {
    set[i].weight /= sum;
  }
}

double effectiveness(const ParticleSet& set) {
  if (set.size() == 0) {
    throw InputError("effectiveness: empty population");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < set.size(); ++i) {
    sum += set[i].weight;
    sum_sq += set[i].weight * set[i].weight;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw InputError("effectiveness: population is not normalized");
  }
  return 1.0 / sum_sq;
}

void resample(ParticleSet& set, double jitter_sigma,
              std::int64_t target_count) {
  if (set.size() == 0) {
    throw InputError("resample: empty population");
  }
  if (jitter_sigma < 0.0 || !std::isfinite(jitter_sigma)) {
    throw InputError("resample: jitter sigma must be >= 0");
  }
  if (target_count < 0) {
    throw InputError("resample: target count must be >= 0");
  }
  double sum = 0.0;
  for (std::int64_t i = 0; i < set.size(); ++i) {
    sum += set[i].weight;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw InputError("resample: population is not normalized");
  }
  const std::int64_t count = target_count > 0 ? target_count : set.size();

  // Systematic (low-variance) selection: count evenly spaced pointers with a
  // single shared random offset sweep the cumulative weights once.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(set.rng());
  std::vector<Particle> offspring;
  offspring.reserve(count);
  std::int64_t ancestor = 0;
  double cumulative = set[0].weight;
  for (std::int64_t k = 0; k < count; ++k) {
    const double pointer = (static_cast<double>(k) + u) / count;
    while (cumulative < pointer && ancestor + 1 < set.size()) {
      ++ancestor;
      cumulative += set[ancestor].weight;
    }
    offspring.push_back(set[ancestor]);
  }

  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::int64_t k = 0; k < count; ++k) {
    if (jitter_sigma > 0.0) {
      const std::int64_t delta =
          round_half_up(noise(set.rng()) * jitter_sigma);
      offspring[k].index = std::clamp(offspring[k].index + delta,
                                      set.min_index(), set.max_index());
    }
    offspring[k].weight = 1.0 / count;
    offspring[k].id = k;
  }
  set.particles() = std::move(offspring);
}

std::int64_t jitter_sigma_quarter(std::int64_t test_len) {
  if (test_len <= 0) {
    throw InputError("jitter sigma: test length must be positive");
  }
  return (test_len + 3) / 4;
}

std::int64_t coverage_span(const ParticleSet& set, std::int64_t test_len,
                           bool above_median_only) {
  if (set.size() == 0) {
    throw InputError("coverage: empty population");
  }
  if (test_len <= 0) {
    throw InputError("coverage: test length must be positive");
  }
  std::vector<std::int64_t> ends;
  ends.reserve(set.size());
  if (above_median_only) {
    std::vector<double> weights(set.size());
    for (std::int64_t i = 0; i < set.size(); ++i) {
      weights[i] = set[i].weight;
    }
    const double median = quantile(weights, 0.5);
    for (std::int64_t i = 0; i < set.size(); ++i) {
      if (set[i].weight > median) {
        ends.push_back(set[i].index);
      }
    }
  }
  if (ends.empty()) {
    for (std::int64_t i = 0; i < set.size(); ++i) {
      ends.push_back(set[i].index);
    }
  }
  std::sort(ends.begin(), ends.end());

  // Union of the closed intervals [end - test_len, end], clipped at frame 1
  // so the span can never exceed the reference length.
  std::int64_t total = 0;
  std::int64_t cur_lo = std::max<std::int64_t>(1, ends[0] - test_len);
  std::int64_t cur_hi = ends[0];
  for (std::size_t i = 1; i < ends.size(); ++i) {
    const std::int64_t lo = std::max<std::int64_t>(1, ends[i] - test_len);
    const std::int64_t hi = ends[i];
    if (lo <= cur_hi + 1) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      total += cur_hi - cur_lo + 1;
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  total += cur_hi - cur_lo + 1;
  return total;
}

double coverage_rate(std::int64_t span_cur, std::int64_t span_prev) {
  if (span_prev <= 0) {
    return 1.0;
  }
  if (span_cur <= 0) {
    throw InputError("coverage: current span must be positive");
  }
  return static_cast<double>(span_cur) / static_cast<double>(span_prev);
}

}  // namespace mrsvpr
