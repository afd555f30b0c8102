#include "mrsvpr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "mrsvpr/error.hpp"
#include "mrsvpr/particle.hpp"
#include "mrsvpr/seqmatch.hpp"

namespace mrsvpr {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 on the combined value; decorrelates per-trial streams.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PrCurve pr_curve(const std::vector<double>& scores,
                 const std::vector<bool>& correct) {
  if (scores.empty() || scores.size() != correct.size()) {
    throw InputError("pr_curve: need one score per trial, at least one trial");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw InputError("pr_curve: scores must be finite");
    }
  }
  std::vector<double> thresholds(scores);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double total = static_cast<double>(scores.size());
  PrCurve curve;
  curve.points.reserve(thresholds.size() + 1);
  for (double th : thresholds) {
    std::int64_t fired = 0;
    std::int64_t hits = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] <= th) {
        ++fired;
        if (correct[i]) {
          ++hits;
        }
      }
    }
    PrPoint p;
    p.threshold = th;
    p.precision = static_cast<double>(hits) / static_cast<double>(fired);
    p.recall = static_cast<double>(hits) / total;
    curve.points.push_back(p);
  }

  // Anchor at recall zero so the sweep starts from the axis, then integrate.
  PrPoint anchor;
  anchor.threshold = curve.points.front().threshold;
  anchor.recall = 0.0;
  anchor.precision = curve.points.front().precision;
  curve.points.insert(curve.points.begin(), anchor);

  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const PrPoint& a = curve.points[i - 1];
    const PrPoint& b = curve.points[i];
    auc += (b.recall - a.recall) * 0.5 * (a.precision + b.precision);
  }
  curve.auc = auc;
  return curve;
}

namespace {

MethodSummary summarize(const std::vector<double>& errors,
                        const std::vector<double>& evaluations,
                        const PrCurve& curve, std::int64_t tolerance) {
  MethodSummary s;
  s.median_error = quantile(errors, 0.5);
  s.iqr_error = quantile(errors, 0.75) - quantile(errors, 0.25);
  std::int64_t ok = 0;
  for (double e : errors) {
    if (e <= static_cast<double>(tolerance)) {
      ++ok;
    }
  }
  s.success_rate = static_cast<double>(ok) / static_cast<double>(errors.size());
  s.auc = curve.auc;
  s.median_evaluations = quantile(evaluations, 0.5);
  return s;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.trials < 1 || config.trials > 100000) {
    throw ConfigError("bench: trials must be in [1, 100000]");
  }
  if (config.tolerance_frames < 0) {
    throw ConfigError("bench: tolerance must be >= 0");
  }
  if (config.warps.empty()) {
    throw ConfigError("bench: warp list must be nonempty");
  }
  if (!config.pipeline.seed.has_value()) {
    throw ConfigError("bench: pipeline seed is required");
  }

  BenchReport report;
  report.config = config;
  const std::uint64_t master = *config.pipeline.seed;

  std::vector<double> mrs_scores;
  std::vector<bool> mrs_correct;
  std::vector<double> mrs_errors;
  std::vector<double> mrs_counts;
  std::vector<double> base_scores;
  std::vector<bool> base_correct;
  std::vector<double> base_errors;
  std::vector<double> base_counts;
  std::vector<double> ratios;
  std::vector<double> wall_ratios;

  for (int t = 0; t < config.trials; ++t) {
    BenchTrial row;
    row.trial = t;
    row.seed = derive_seed(master, static_cast<std::uint64_t>(t));
    row.warp = config.warps[static_cast<std::size_t>(t) % config.warps.size()];

    SyntheticSpec spec = config.synth;
    spec.warp = row.warp;
    const SyntheticResult data = make_synthetic(spec, row.seed);
    row.truth = data.truth_end;

    PipelineConfig pipeline = config.pipeline;
    pipeline.seed = derive_seed(row.seed, 0x5eedULL);
    const MatchResult mrs = run_mrs(data.reference, data.test, pipeline);
    row.mrs_index = mrs.best_index;
    row.mrs_error = std::llabs(mrs.best_index - data.truth_end);
    row.mrs_score = mrs.best_score;
    row.mrs_trajectory_scores = mrs.total_trajectory_scores;
    row.mrs_particle_evaluations = mrs.total_particle_evaluations;
    row.mrs_wall_ms = mrs.wall_ms;
    report.mrs_wall_ms_total += mrs.wall_ms;

    mrs_scores.push_back(row.mrs_score);
    mrs_errors.push_back(static_cast<double>(row.mrs_error));
    mrs_correct.push_back(row.mrs_error <= config.tolerance_frames);
    mrs_counts.push_back(static_cast<double>(row.mrs_trajectory_scores));

    if (config.run_baseline) {
      const auto started = std::chrono::steady_clock::now();
      const BaselineResult base = seqslam_baseline(
          data.reference, data.test, config.pipeline.velocities,
          config.baseline_enhance, config.baseline_enhance_radius);
      row.baseline_wall_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
      row.has_baseline = true;
      row.baseline_index = base.best_index;
      row.baseline_error = std::llabs(base.best_index - data.truth_end);
      row.baseline_score = base.best_score;
      row.baseline_evaluations = base.evaluations;
      report.baseline_wall_ms_total += row.baseline_wall_ms;

      base_scores.push_back(row.baseline_score);
      base_errors.push_back(static_cast<double>(row.baseline_error));
      base_correct.push_back(row.baseline_error <= config.tolerance_frames);
      base_counts.push_back(static_cast<double>(row.baseline_evaluations));
      ratios.push_back(static_cast<double>(base.evaluations) /
                       static_cast<double>(mrs.total_trajectory_scores));
      if (mrs.wall_ms > 0.0) {
        wall_ratios.push_back(row.baseline_wall_ms / mrs.wall_ms);
      }
    }

    report.trials.push_back(row);
  }

  report.mrs_curve = pr_curve(mrs_scores, mrs_correct);
  report.mrs = summarize(mrs_errors, mrs_counts, report.mrs_curve,
                         config.tolerance_frames);
  report.predicted_speedup = predicted_speedup(
      config.synth.test_len, config.pipeline.tau, config.pipeline.depth);

  if (config.run_baseline) {
    report.baseline_curve = pr_curve(base_scores, base_correct);
    report.baseline = summarize(base_errors, base_counts,
                                report.baseline_curve,
                                config.tolerance_frames);
    report.invocation_ratio_median = quantile(ratios, 0.5);
    if (report.mrs_wall_ms_total > 0.0) {
      report.wall_ratio_total =
          report.baseline_wall_ms_total / report.mrs_wall_ms_total;
    }
    if (!wall_ratios.empty()) {
      report.wall_ratio_median = quantile(wall_ratios, 0.5);
    }
  }
  return report;
}

}  // namespace mrsvpr
