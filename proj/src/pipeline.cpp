#include "mrsvpr/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <string>
#include <thread>

#include "mrsvpr/descriptor.hpp"
#include "mrsvpr/error.hpp"
#include "mrsvpr/particle.hpp"
#include "mrsvpr/pyramid.hpp"
#include "mrsvpr/seqmatch.hpp"

namespace mrsvpr {

namespace {

// Dense per-level distance cache shared by every particle window and
// iteration of a level; cells are computed on first read. Only used on the
// single-worker path (threads use per-call memo strips instead).
//
// The cache also memoizes whole line scores: a trajectory's sum depends only
// on its (end index, velocity) at this level, not on which particle asked,
// so converged populations rescanning the same window pay once. The memo
// stores the same double the direct sum produces (same cells, same order),
// keeping results bitwise identical to the uncached paths.
class LevelDistanceCache {
 public:
  LevelDistanceCache(const FrameSequence& reference, const FrameSequence& test,
                     std::int64_t n_velocities)
      : reference_(reference),
        test_(test),
        cols_(reference.size()),
        n_velocities_(n_velocities),
        cells_(std::make_unique_for_overwrite<double[]>(
            static_cast<std::size_t>(reference.size() * test.size()))),
        cell_filled_(static_cast<std::size_t>(reference.size() * test.size()),
                     0),
        lines_(static_cast<std::size_t>(reference.size() * n_velocities),
               std::numeric_limits<double>::quiet_NaN()) {}

  double cell(std::int64_t t, std::int64_t col) {
    const std::size_t idx =
        static_cast<std::size_t>((t - 1) * cols_ + (col - 1));
    if (!cell_filled_[idx]) {
      cells_[idx] = distance(test_.frame(t - 1), reference_.frame(col - 1));
      cell_filled_[idx] = 1;
      ++fills_;
    }
    return cells_[idx];
  }

  // Memoized trajectory_score_with; -1 marks an infeasible line (scores are
  // sums of L1 distances, so they are never negative).
  std::optional<double> line(std::int64_t j, std::int64_t vi, double v) {
    if (j < 1 || j > cols_) {
      return std::nullopt;
    }
    double& slot = lines_[(j - 1) * n_velocities_ + vi];
    if (std::isnan(slot)) {
      const std::optional<double> score = detail::trajectory_score_with(
          [this](std::int64_t t, std::int64_t col) { return cell(t, col); },
          cols_, test_.size(), j, v);
      slot = score.has_value() ? *score : -1.0;
    }
    if (slot < 0.0) {
      return std::nullopt;
    }
    return slot;
  }

  std::int64_t fills() const { return fills_; }

  // Keeps the dense cache within a sane footprint; larger levels fall back
  // to per-particle memo strips.
  static bool fits(const FrameSequence& reference, const FrameSequence& test) {
    return reference.size() * test.size() <= std::int64_t{1} << 26;
  }

 private:
  const FrameSequence& reference_;
  const FrameSequence& test_;
  std::int64_t cols_;
  std::int64_t n_velocities_;
  std::unique_ptr<double[]> cells_;  // written before read, per the bitmap
  std::vector<unsigned char> cell_filled_;
  std::vector<double> lines_;
  std::int64_t fills_ = 0;
};

// scan_candidates with the line memo: identical scan order, tie-breaks,
// evaluation counting, and failure behavior, but repeated lines are free.
EvalResult scan_candidates_cached(LevelDistanceCache& cache,
                                  std::int64_t j_lo, std::int64_t j_hi,
                                  std::span<const double> velocities) {
  EvalResult best;
  bool found = false;
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    for (std::size_t vi = 0; vi < velocities.size(); ++vi) {
      const std::optional<double> score =
          cache.line(j, static_cast<std::int64_t>(vi), velocities[vi]);
      if (!score) {
        continue;
      }
      ++best.scores_evaluated;
      if (!found || *score < best.best_score) {
        found = true;
        best.best_score = *score;
        best.best_index = j;
      }
    }
  }
  if (!found) {
    throw InfeasibleError(
        "evaluate: no scorable trajectory in the search window (reference "
        "too short for the window and velocity sweep)");
  }
  return best;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

std::int64_t id_shift_for(const PipelineConfig& c, std::int64_t test_len,
                          bool coarsest) {
  switch (c.id_shift_policy) {
    case IdShiftPolicy::kHalf:
      return ceil_div(test_len, 2);
    case IdShiftPolicy::kFixed:
      return c.id_shift_fixed;
    case IdShiftPolicy::kAuto:
    default:
      return coarsest ? std::max<std::int64_t>(4, ceil_div(test_len, 4))
                      : std::int64_t{4};
  }
}

double jitter_for(const PipelineConfig& c, std::int64_t test_len,
                  std::int64_t id_shift, bool coarsest) {
  switch (c.jitter_policy) {
    case JitterPolicy::kQuarter:
      return static_cast<double>(jitter_sigma_quarter(test_len));
    case JitterPolicy::kFixed:
      return c.jitter_fixed;
    case JitterPolicy::kAuto:
    default: {
      const std::int64_t quarter = jitter_sigma_quarter(test_len);
      if (coarsest) {
        return static_cast<double>(
            std::min(quarter, std::max<std::int64_t>(1, id_shift / 2)));
      }
      return static_cast<double>(std::min<std::int64_t>(quarter, 2));
    }
  }
}

// Total order used wherever particles are ranked: strongest evidence first,
// deterministic tie-breaks all the way down.
bool rank_less(const Particle& a, const Particle& b) {
  if (a.weight != b.weight) {
    return a.weight > b.weight;
  }
  const bool a_scored = !std::isnan(a.last_score);
  const bool b_scored = !std::isnan(b.last_score);
  if (a_scored != b_scored) {
    return a_scored;
  }
  if (a_scored && a.last_score != b.last_score) {
    return a.last_score < b.last_score;
  }
  if (a.index != b.index) {
    return a.index < b.index;
  }
  return a.id < b.id;
}

void validate(const PipelineConfig& c) {
  if (!c.seed.has_value()) {
    throw ConfigError("pipeline: seed is required");
  }
  if (c.depth < 1) {
    throw ConfigError("pipeline: depth must be >= 1");
  }
  if (!(c.tau > 0.0) || c.tau > 16.0) {
    throw ConfigError("pipeline: tau must be in (0, 16]");
  }
  if (!(c.thres_particle_frac > 0.0) || c.thres_particle_frac > 1.0) {
    throw ConfigError("pipeline: resample threshold fraction must be in (0, 1]");
  }
  if (!(c.coverage_threshold > 0.0) || c.coverage_threshold > 1.0) {
    throw ConfigError("pipeline: coverage threshold must be in (0, 1]");
  }
  if (c.iteration_cap < 1 || c.iteration_cap > 1000) {
    throw ConfigError("pipeline: iteration cap must be in [1, 1000]");
  }
  if (c.id_shift_policy == IdShiftPolicy::kFixed && c.id_shift_fixed < 0) {
    throw ConfigError("pipeline: fixed id_shift must be >= 0");
  }
  if (c.jitter_policy == JitterPolicy::kFixed &&
      (!(c.jitter_fixed >= 0.0) || !std::isfinite(c.jitter_fixed))) {
    throw ConfigError("pipeline: fixed jitter sigma must be >= 0");
  }
  if (c.min_coarse_test_len < 1) {
    throw ConfigError("pipeline: minimum coarse test length must be >= 1");
  }
  if (c.velocities.empty()) {
    throw ConfigError("pipeline: velocity sweep must be nonempty");
  }
  for (double v : c.velocities) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("pipeline: velocities must be positive");
    }
  }
  if (c.workers < 1 || c.workers > 256) {
    throw ConfigError("pipeline: workers must be in [1, 256]");
  }
}

// Evaluates every particle's window, moves each particle to its window's
// best end index, and returns the scores. Results are identical for any
// worker count; only the distance-fill accounting differs.
std::vector<double> evaluate_population(ParticleSet& set,
                                        const FrameSequence& reference,
                                        const FrameSequence& test,
                                        std::int64_t id_shift,
                                        std::span<const double> velocities,
                                        int workers,
                                        LevelDistanceCache* cache,
                                        LevelTrace& trace) {
  const std::int64_t count = set.size();
  std::vector<double> scores(count);
  if (workers <= 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) {
      EvalResult r;
      if (cache != nullptr) {
        r = scan_candidates_cached(*cache, set[i].index - id_shift,
                                   set[i].index + id_shift, velocities);
      } else {
        r = detail::evaluate_memoized(reference, test, set[i].index, id_shift,
                                      velocities, &trace.distance_fills);
      }
      set[i].index = r.best_index;
      scores[i] = r.best_score;
      trace.trajectory_scores += r.scores_evaluated;
      ++trace.particle_evaluations;
    }
    if (cache != nullptr) {
      trace.distance_fills = cache->fills();
    }
    return scores;
  }

  std::vector<EvalResult> results(count);
  std::vector<std::int64_t> fills(workers, 0);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::int64_t chunk = ceil_div(count, workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
    if (lo >= hi) {
      break;
    }
    pool.emplace_back([&, w, lo, hi]() {
      try {
        for (std::int64_t i = lo; i < hi; ++i) {
          results[i] = detail::evaluate_memoized(reference, test, set[i].index,
                                                 id_shift, velocities,
                                                 &fills[w]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  for (std::int64_t i = 0; i < count; ++i) {
    set[i].index = results[i].best_index;
    scores[i] = results[i].best_score;
    trace.trajectory_scores += results[i].scores_evaluated;
    ++trace.particle_evaluations;
    // cppcheck-suppress useStlAlgorithm
  }
  for (std::int64_t f : fills) {
    trace.distance_fills += f;
  }
  return scores;
}

}  // namespace

MatchResult run_mrs(const FrameSequence& reference, const FrameSequence& test,
                    const PipelineConfig& config) {
  validate(config);
  if (reference.empty() || test.empty()) {
    throw InputError("pipeline: sequences must be nonempty");
  }
  if (reference.dim() != test.dim()) {
    throw InputError("pipeline: descriptor dims differ");
  }
  if (test.size() > reference.size()) {
    throw InputError("pipeline: test sequence longer than reference");
  }

  const auto started = std::chrono::steady_clock::now();
  const LevelSchedule schedule =
      LevelSchedule::build(reference.size(), test.size(), config.depth,
                           config.min_coarse_test_len);

  // Interval-1 levels alias the inputs instead of copying them; only the
  // genuinely decimated levels own storage.
  std::vector<FrameSequence> decimated;
  decimated.reserve(2 * static_cast<std::size_t>(schedule.depth()));
  std::vector<const FrameSequence*> ref_levels;
  std::vector<const FrameSequence*> test_levels;
  ref_levels.reserve(schedule.depth());
  test_levels.reserve(schedule.depth());
  for (const Level& lv : schedule.levels()) {
    if (lv.interval == 1) {
      ref_levels.push_back(&reference);
      test_levels.push_back(&test);
    } else {
      decimated.push_back(decimate(reference, lv.interval));
      ref_levels.push_back(&decimated.back());
      decimated.push_back(decimate(test, lv.interval));
      test_levels.push_back(&decimated.back());
    }
  }

  const std::int64_t p_init =
      initial_particle_count(reference.size(), test.size(), config.tau);
  const bool above_median =
      config.coverage_valid == CoverageValid::kAboveMedian;

  MatchResult result;
  ParticleSet set(1, 1, *config.seed);

  for (int li = 1; li <= schedule.depth(); ++li) {
    const Level& lv = schedule.level(li);
    const FrameSequence& ref_l = *ref_levels[li - 1];
    const FrameSequence& test_l = *test_levels[li - 1];
    const bool coarsest = li == 1;

    if (coarsest) {
      set = init_uniform(p_init, lv.test_len, lv.ref_len, *config.seed);
    } else {
      // Carry the better half of the population to the finer level.
      const Level& prev = schedule.level(li - 1);
      std::vector<Particle>& pop = set.particles();
      std::sort(pop.begin(), pop.end(), rank_less);
      const std::int64_t target =
          std::max<std::int64_t>(1, ceil_div(set.size(), 2));
      pop.resize(target);
      set.set_bounds(lv.test_len, lv.ref_len);
      for (std::int64_t i = 0; i < target; ++i) {
        pop[i].index = promote_index(pop[i].index, prev, lv);
        pop[i].id = i;
      }
      normalize_weights(set);
    }

    LevelTrace trace;
    trace.level = lv.level;
    trace.interval = lv.interval;
    trace.ref_len = lv.ref_len;
    trace.test_len = lv.test_len;
    trace.id_shift = id_shift_for(config, lv.test_len, coarsest);
    trace.jitter_sigma =
        jitter_for(config, lv.test_len, trace.id_shift, coarsest);
    trace.particles_in = set.size();

    std::unique_ptr<LevelDistanceCache> cache;
    if (config.workers <= 1 && LevelDistanceCache::fits(ref_l, test_l)) {
      cache = std::make_unique<LevelDistanceCache>(
          ref_l, test_l,
          static_cast<std::int64_t>(config.velocities.size()));
    }

    // No previous span before the first iteration: its rate is defined as 1,
    // so a level always gets at least two looks before it can converge.
    std::int64_t prev_span = 0;
    double pending_n_eff = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= config.iteration_cap; ++iter) {
      // A resample owed from the previous iteration's effectiveness runs
      // first, so the weights read below always reflect evaluated positions.
      if (pending_n_eff <
          config.thres_particle_frac * static_cast<double>(set.size())) {
        resample(set, trace.jitter_sigma);
        ++trace.resamples;
      }

      const std::vector<double> scores = evaluate_population(
          set, ref_l, test_l, trace.id_shift, config.velocities,
          config.workers, cache.get(), trace);
      update_weights(set, scores);
      try {
        normalize_weights(set);
      } catch (const DegenerateError&) {
        for (std::int64_t i = 0; i < set.size(); ++i) {
          set[i].weight = 1.0 / static_cast<double>(set.size());
        }
      }
      pending_n_eff = effectiveness(set);

      const std::int64_t span = coverage_span(set, lv.test_len, above_median);
      const double rate = coverage_rate(span, prev_span);
      prev_span = span;
      trace.n_eff.push_back(pending_n_eff);
      trace.spans.push_back(span);
      trace.coverage.push_back(rate);
      ++trace.iterations;
      if (rate < config.coverage_threshold) {
        break;
      }
    }

    result.total_particle_evaluations += trace.particle_evaluations;
    result.total_trajectory_scores += trace.trajectory_scores;
    result.total_distance_fills += trace.distance_fills;
    result.levels.push_back(std::move(trace));

    // The final level's population feeds the ranked output and refinement.
    if (li == schedule.depth()) {
      std::vector<Particle> pop = set.particles();
      std::sort(pop.begin(), pop.end(), rank_less);
      result.ranked.reserve(pop.size());
      for (const Particle& p : pop) {
        result.ranked.emplace_back(ref_l.source_index(p.index - 1), p.weight);
      }

      const std::int64_t refine_shift =
          id_shift_for(config, lv.test_len, false);
      EvalResult refined;
      if (cache != nullptr) {
        refined = scan_candidates_cached(*cache,
                                         pop.front().index - refine_shift,
                                         pop.front().index + refine_shift,
                                         config.velocities);
        result.total_distance_fills +=
            cache->fills() - result.levels.back().distance_fills;
      } else {
        refined = detail::evaluate_memoized(ref_l, test_l, pop.front().index,
                                            refine_shift, config.velocities,
                                            &result.total_distance_fills);
      }
      result.refine_trajectory_scores = refined.scores_evaluated;
      result.total_trajectory_scores += refined.scores_evaluated;
      result.best_index = ref_l.source_index(refined.best_index - 1);
      result.best_score = refined.best_score;
    }
  }

  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return result;
}

double predicted_speedup(std::int64_t test_len, double tau, int depth) {
  if (test_len <= 0) {
    throw InputError("predicted_speedup: test length must be positive");
  }
  if (!(tau > 0.0)) {
    throw ConfigError("predicted_speedup: tau must be positive");
  }
  if (depth < 1 || depth > 30) {
    throw ConfigError("predicted_speedup: depth must be in [1, 30]");
  }
  return (static_cast<double>(test_len) / tau) *
         static_cast<double>(std::int64_t{1} << depth) /
         static_cast<double>(depth);
}

std::int64_t evaluations_counter(const MatchResult& result) {
  return result.total_trajectory_scores;
}

}  // namespace mrsvpr
