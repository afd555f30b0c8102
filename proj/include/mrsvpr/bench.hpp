#pragma once

#include <cstdint>
#include <vector>

#include "mrsvpr/pipeline.hpp"
#include "mrsvpr/synth.hpp"

namespace mrsvpr {

/// One precision/recall point of a threshold sweep.
struct PrPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

struct PrCurve {
  std::vector<PrPoint> points;
  double auc = 0.0;
};

/// Precision/recall over localization trials. Every trial has a ground
/// truth; a trial fires at threshold T when its best score is <= T, and a
/// fired trial is a true positive when its match was correct. Thresholds
/// sweep the distinct observed scores ascending; recall is measured against
/// all trials. The returned curve carries a leading (recall 0, first
/// precision) anchor and the trapezoidal area under it.
/// Throws InputError on empty or mismatched inputs.
PrCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<bool>& correct);

/// Full benchmark recipe: generate `trials` synthetic pairs (cycling through
/// `warps`), run the particle search and optionally the exhaustive baseline
/// on each, and aggregate accuracy/cost/timing.
struct BenchConfig {
  SyntheticSpec synth;           // warp field is overridden per trial
  std::vector<double> warps = {1.0};
  int trials = 20;
  std::int64_t tolerance_frames = 3;  // |index - truth| <= tolerance
  PipelineConfig pipeline;            // pipeline.seed seeds the whole bench
  bool run_baseline = true;
  bool baseline_enhance = false;
  std::int64_t baseline_enhance_radius = 10;
};

struct BenchTrial {
  int trial = 0;
  std::uint64_t seed = 0;
  double warp = 0.0;
  std::int64_t truth = 0;

  std::int64_t mrs_index = 0;
  std::int64_t mrs_error = 0;
  double mrs_score = 0.0;
  std::int64_t mrs_trajectory_scores = 0;
  std::int64_t mrs_particle_evaluations = 0;
  double mrs_wall_ms = 0.0;

  bool has_baseline = false;
  std::int64_t baseline_index = 0;
  std::int64_t baseline_error = 0;
  double baseline_score = 0.0;
  std::int64_t baseline_evaluations = 0;
  double baseline_wall_ms = 0.0;
};

struct MethodSummary {
  double median_error = 0.0;
  double iqr_error = 0.0;
  double success_rate = 0.0;
  double auc = 0.0;
  double median_evaluations = 0.0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchTrial> trials;
  MethodSummary mrs;
  MethodSummary baseline;  // zeroed when the baseline did not run
  PrCurve mrs_curve;
  PrCurve baseline_curve;

  double predicted_speedup = 0.0;
  double invocation_ratio_median = 0.0;  // baseline / MRS score invocations

  // Wall-clock aggregates; measured, not part of the deterministic payload.
  double mrs_wall_ms_total = 0.0;
  double baseline_wall_ms_total = 0.0;
  double wall_ratio_total = 0.0;
  double wall_ratio_median = 0.0;
};

/// Runs the benchmark. Deterministic except the wall-clock fields: per-trial
/// seeds derive from pipeline.seed, which must be set.
BenchReport run_bench(const BenchConfig& config);

/// Stateless mix used to derive per-trial seeds from the master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mrsvpr
