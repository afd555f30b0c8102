#include "mrsvpr/report.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

namespace mrsvpr {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string id_shift_name(const PipelineConfig& c) {
  switch (c.id_shift_policy) {
    case IdShiftPolicy::kHalf:
      return "half";
    case IdShiftPolicy::kFixed:
      return std::to_string(c.id_shift_fixed);
    case IdShiftPolicy::kAuto:
    default:
      return "auto";
  }
}

std::string jitter_name(const PipelineConfig& c) {
  switch (c.jitter_policy) {
    case JitterPolicy::kQuarter:
      return "quarter";
    case JitterPolicy::kFixed:
      return format_double(c.jitter_fixed);
    case JitterPolicy::kAuto:
    default:
      return "auto";
  }
}

json pipeline_params_json(const PipelineConfig& c) {
  json p;
  p["depth"] = c.depth;
  p["tau"] = c.tau;
  p["id_shift"] = id_shift_name(c);
  p["jitter"] = jitter_name(c);
  p["thres_particle_frac"] = c.thres_particle_frac;
  p["coverage_threshold"] = c.coverage_threshold;
  p["iteration_cap"] = c.iteration_cap;
  p["min_coarse_test_len"] = c.min_coarse_test_len;
  p["coverage_valid"] =
      c.coverage_valid == CoverageValid::kAboveMedian ? "above_median" : "all";
  p["velocities"] = c.velocities;
  if (c.seed.has_value()) {
    p["seed"] = *c.seed;
  }
  return p;
}

json levels_json(const MatchResult& r) {
  json levels = json::array();
  for (const LevelTrace& lt : r.levels) {
    json l;
    l["level"] = lt.level;
    l["interval"] = lt.interval;
    l["ref_len"] = lt.ref_len;
    l["test_len"] = lt.test_len;
    l["id_shift"] = lt.id_shift;
    l["jitter_sigma"] = lt.jitter_sigma;
    l["particles_in"] = lt.particles_in;
    l["iterations"] = lt.iterations;
    l["resamples"] = lt.resamples;
    l["n_eff"] = lt.n_eff;
    l["coverage_spans"] = lt.spans;
    l["coverage_rates"] = lt.coverage;
    l["particle_evaluations"] = lt.particle_evaluations;
    l["trajectory_scores"] = lt.trajectory_scores;
    levels.push_back(std::move(l));
  }
  return levels;
}

}  // namespace

std::string match_report_json(const MatchResult& result,
                              const PipelineConfig& config,
                              std::int64_t ref_len, std::int64_t test_len,
                              std::int64_t dim, bool include_timing) {
  json doc;
  doc["type"] = "match";
  doc["params"] = pipeline_params_json(config);
  doc["params"]["ref_len"] = ref_len;
  doc["params"]["test_len"] = test_len;
  doc["params"]["dim"] = dim;

  json res;
  res["best_index"] = result.best_index;
  res["best_score"] = result.best_score;
  res["predicted_speedup"] =
      predicted_speedup(test_len, config.tau, config.depth);
  json ranked = json::array();
  for (const auto& [index, weight] : result.ranked) {
    ranked.push_back(json{{"index", index}, {"weight", weight}});
  }
  res["ranked_particles"] = std::move(ranked);
  res["counters"] = {
      {"particle_evaluations", result.total_particle_evaluations},
      {"trajectory_scores", result.total_trajectory_scores},
      {"refine_trajectory_scores", result.refine_trajectory_scores},
  };
  res["levels"] = levels_json(result);
  doc["result"] = std::move(res);

  if (include_timing) {
    doc["timing"] = {
        {"wall_ms", result.wall_ms},
        {"distance_fills", result.total_distance_fills},
        {"workers", config.workers},
    };
  }
  return doc.dump(2);
}

std::string baseline_report_json(const BaselineResult& result,
                                 std::int64_t ref_len, std::int64_t test_len,
                                 std::int64_t dim, bool enhance,
                                 std::int64_t enhance_radius,
                                 bool include_timing, double wall_ms) {
  json doc;
  doc["type"] = "baseline";
  doc["params"] = {
      {"ref_len", ref_len},
      {"test_len", test_len},
      {"dim", dim},
      {"enhance", enhance},
      {"enhance_radius", enhance_radius},
  };
  doc["result"] = {
      {"best_index", result.best_index},
      {"best_score", result.best_score},
      {"evaluations", result.evaluations},
  };
  if (include_timing) {
    doc["timing"] = {{"wall_ms", wall_ms}};
  }
  return doc.dump(2);
}

std::string bench_report_json(const BenchReport& report, bool include_timing) {
  const BenchConfig& c = report.config;
  json doc;
  doc["type"] = "bench";

  json cfg;
  cfg["trials"] = c.trials;
  cfg["tolerance_frames"] = c.tolerance_frames;
  cfg["warps"] = c.warps;
  cfg["synth"] = {
      {"ref_len", c.synth.ref_len},
      {"test_len", c.synth.test_len},
      {"dim", c.synth.dim},
      {"noise", c.synth.noise},
      {"viewpoint_jitter", c.synth.viewpoint_jitter},
      {"walk_velocity", c.synth.walk_velocity},
  };
  if (c.synth.embed_end.has_value()) {
    cfg["synth"]["embed_end"] = *c.synth.embed_end;
  }
  cfg["pipeline"] = pipeline_params_json(c.pipeline);
  cfg["baseline"] = {
      {"run", c.run_baseline},
      {"enhance", c.baseline_enhance},
      {"enhance_radius", c.baseline_enhance_radius},
  };
  doc["config"] = std::move(cfg);

  const auto method_json = [](const MethodSummary& s) {
    return json{
        {"median_error", s.median_error},
        {"iqr_error", s.iqr_error},
        {"success_rate", s.success_rate},
        {"auc", s.auc},
        {"median_evaluations", s.median_evaluations},
    };
  };
  json summary;
  summary["mrs"] = method_json(report.mrs);
  summary["predicted_speedup"] = report.predicted_speedup;
  if (c.run_baseline) {
    summary["baseline"] = method_json(report.baseline);
    summary["invocation_ratio_median"] = report.invocation_ratio_median;
  }
  doc["summary"] = std::move(summary);

  json trials = json::array();
  for (const BenchTrial& t : report.trials) {
    json row;
    row["trial"] = t.trial;
    row["seed"] = t.seed;
    row["warp"] = t.warp;
    row["truth"] = t.truth;
    row["mrs"] = {
        {"index", t.mrs_index},
        {"error", t.mrs_error},
        {"score", t.mrs_score},
        {"trajectory_scores", t.mrs_trajectory_scores},
        {"particle_evaluations", t.mrs_particle_evaluations},
    };
    if (t.has_baseline) {
      row["baseline"] = {
          {"index", t.baseline_index},
          {"error", t.baseline_error},
          {"score", t.baseline_score},
          {"evaluations", t.baseline_evaluations},
      };
    }
    trials.push_back(std::move(row));
  }
  doc["trials"] = std::move(trials);

  const auto curve_json = [](const PrCurve& curve) {
    json points = json::array();
    for (const PrPoint& p : curve.points) {
      points.push_back(json{{"threshold", p.threshold},
                            {"recall", p.recall},
                            {"precision", p.precision}});
    }
    return json{{"points", std::move(points)}, {"auc", curve.auc}};
  };
  doc["pr_curve"]["mrs"] = curve_json(report.mrs_curve);
  if (c.run_baseline) {
    doc["pr_curve"]["baseline"] = curve_json(report.baseline_curve);
  }

  if (include_timing) {
    json per_trial = json::array();
    for (const BenchTrial& t : report.trials) {
      json row;
      row["mrs_wall_ms"] = t.mrs_wall_ms;
      if (t.has_baseline) {
        row["baseline_wall_ms"] = t.baseline_wall_ms;
      }
      per_trial.push_back(std::move(row));
    }
    doc["timing"] = {
        {"mrs_wall_ms_total", report.mrs_wall_ms_total},
        {"baseline_wall_ms_total", report.baseline_wall_ms_total},
        {"wall_ratio_total", report.wall_ratio_total},
        {"wall_ratio_median", report.wall_ratio_median},
        {"per_trial", std::move(per_trial)},
    };
  }
  return doc.dump(2);
}

std::string match_levels_csv(const MatchResult& result) {
  std::ostringstream out;
  out << "level,interval,ref_len,test_len,id_shift,jitter_sigma,particles_in,"
         "iterations,resamples,particle_evaluations,trajectory_scores\n";
  for (const LevelTrace& lt : result.levels) {
    out << lt.level << ',' << lt.interval << ',' << lt.ref_len << ','
        << lt.test_len << ',' << lt.id_shift << ','
        << format_double(lt.jitter_sigma) << ',' << lt.particles_in << ','
        << lt.iterations << ',' << lt.resamples << ','
        << lt.particle_evaluations << ',' << lt.trajectory_scores << '\n';
  }
  return out.str();
}

std::string bench_trials_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "trial,seed,warp,truth,mrs_index,mrs_error,mrs_score,"
         "mrs_trajectory_scores,mrs_particle_evaluations,baseline_index,"
         "baseline_error,baseline_score,baseline_evaluations,"
         "invocation_ratio\n";
  for (const BenchTrial& t : report.trials) {
    out << t.trial << ',' << t.seed << ',' << format_double(t.warp) << ','
        << t.truth << ',' << t.mrs_index << ',' << t.mrs_error << ','
        << format_double(t.mrs_score) << ',' << t.mrs_trajectory_scores << ','
        << t.mrs_particle_evaluations << ',';
    if (t.has_baseline) {
      const double ratio = static_cast<double>(t.baseline_evaluations) /
                           static_cast<double>(t.mrs_trajectory_scores);
      out << t.baseline_index << ',' << t.baseline_error << ','
          << format_double(t.baseline_score) << ',' << t.baseline_evaluations
          << ',' << format_double(ratio);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return out.str();
}

std::string bench_pr_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "method,threshold,recall,precision\n";
  const auto dump = [&out](const char* name, const PrCurve& curve) {
    for (const PrPoint& p : curve.points) {
      out << name << ',' << format_double(p.threshold) << ','
          << format_double(p.recall) << ',' << format_double(p.precision)
          << '\n';
    }
  };
  dump("mrs", report.mrs_curve);
  if (report.config.run_baseline) {
    dump("baseline", report.baseline_curve);
  }
  return out.str();
}

}  // namespace mrsvpr
