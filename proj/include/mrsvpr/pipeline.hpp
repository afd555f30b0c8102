#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mrsvpr/types.hpp"

namespace mrsvpr {

/// How wide the local search window around each particle is.
///  kAuto:   max(4, ceil(L/4)) at the coarsest level (wide enough to capture
///           truth lying between two initial particles), 4 at finer levels
///           where particles are already localized.
///  kHalf:   ceil(L/2) at every level (the widest sensible window).
///  kFixed:  a constant at every level.
enum class IdShiftPolicy { kAuto, kHalf, kFixed };

/// Scale of the discrete Gaussian jitter applied to resampled offspring.
///  kAuto:    min(ceil(L/4), max(1, id_shift/2)) at the coarsest level, 2 at
///            finer levels, so offspring stay within the rescue radius of the
///            next evaluate.
///  kQuarter: ceil(L/4) at every level.
///  kFixed:   a constant sigma.
enum class JitterPolicy { kAuto, kQuarter, kFixed };

/// Which particles count toward the coverage span.
enum class CoverageValid { kAll, kAboveMedian };

struct PipelineConfig {
  int depth = 3;       // number of resolution levels (coarsest = 2^(depth-1))
  double tau = 2.0;    // particle density factor

  IdShiftPolicy id_shift_policy = IdShiftPolicy::kAuto;
  std::int64_t id_shift_fixed = 4;

  JitterPolicy jitter_policy = JitterPolicy::kAuto;
  double jitter_fixed = 2.0;

  double thres_particle_frac = 0.5;  // resample when N_eff < frac * count
  double coverage_threshold = 0.5;   // level converged when rate drops below
  int iteration_cap = 8;
  std::int64_t min_coarse_test_len = 16;
  CoverageValid coverage_valid = CoverageValid::kAll;

  std::vector<double> velocities = {0.8, 0.9, 1.0, 1.1, 1.2};

  int workers = 1;  // particle evaluations fan out across threads; results
                    // are identical for any worker count

  std::optional<std::uint64_t> seed;  // required; all randomness flows from it
};

/// Per-level diagnostics of one run.
struct LevelTrace {
  int level = 0;
  std::int64_t interval = 0;
  std::int64_t ref_len = 0;
  std::int64_t test_len = 0;
  std::int64_t id_shift = 0;
  double jitter_sigma = 0.0;
  std::int64_t particles_in = 0;

  int iterations = 0;
  int resamples = 0;
  std::vector<double> n_eff;            // after each iteration
  std::vector<std::int64_t> spans;      // coverage span after each iteration
  std::vector<double> coverage;         // span ratio after each iteration

  std::int64_t particle_evaluations = 0;
  std::int64_t trajectory_scores = 0;   // lines actually scored
  std::int64_t distance_fills = 0;      // distance cache misses (cost metric;
                                        // depends on worker count)
};

struct MatchResult {
  std::int64_t best_index = 0;  // 1-based full-resolution reference end index
  double best_score = 0.0;

  /// Final population as (full-resolution end index, weight), best first.
  std::vector<std::pair<std::int64_t, double>> ranked;

  std::vector<LevelTrace> levels;
  std::int64_t total_particle_evaluations = 0;
  std::int64_t total_trajectory_scores = 0;  // includes the final refinement
  std::int64_t refine_trajectory_scores = 0;
  std::int64_t total_distance_fills = 0;

  double wall_ms = 0.0;  // measured wall time; not part of the deterministic
                         // result payload
};

/// Runs the full coarse-to-fine particle search of `test` inside `reference`
/// and refines the winning particle with one full-resolution window
/// evaluation. Deterministic given the config seed.
MatchResult run_mrs(const FrameSequence& reference, const FrameSequence& test,
                    const PipelineConfig& config);

/// Closed-form expected advantage over the exhaustive baseline:
/// (test_len / tau) * 2^depth / depth.
double predicted_speedup(std::int64_t test_len, double tau, int depth);

/// The comparable work counter: total trajectory-score invocations.
std::int64_t evaluations_counter(const MatchResult& result);

}  // namespace mrsvpr
