// Command-line front end: configuration handling, dataset ingestion, run
// orchestration, and report emission. Logs go to stderr, results to stdout.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ingest.hpp"
#include "json.hpp"
#include "mrsvpr/mrsvpr.h"

namespace fs = std::filesystem;
using cli::check;
using cli::CliError;
using nlohmann::json;

namespace {

struct ConfigHandle {
  mrsvpr_config* ptr = mrsvpr_config_create();
  ~ConfigHandle() { mrsvpr_config_destroy(ptr); }
  operator mrsvpr_config*() { return ptr; }
  operator const mrsvpr_config*() const { return ptr; }
};

struct SequenceHandle {
  mrsvpr_sequence* ptr = nullptr;
  ~SequenceHandle() { mrsvpr_sequence_destroy(ptr); }
};

struct ResultHandle {
  mrsvpr_result* ptr = nullptr;
  ~ResultHandle() { mrsvpr_result_destroy(ptr); }
};

// Options shared by every subcommand. Dataset and output paths may come
// from the config file; explicit flags win.
struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string ref_flag;
  std::string test_flag;
  std::string out_flag;
  std::uint64_t seed = 0;

  // Values carried by the config file rather than the engine.
  std::optional<std::string> dataset_ref;
  std::optional<std::string> dataset_test;
  std::optional<std::string> output_dir;
};

void forward_set(mrsvpr_config* config, const std::string& key,
                 const std::string& value, const std::string& where) {
  const mrsvpr_status st =
      mrsvpr_config_set(config, key.c_str(), value.c_str());
  if (st != MRSVPR_OK) {
    throw CliError(st == MRSVPR_ERR_CONFIG ? 2 : 1,
                   std::string(mrsvpr_last_error()) + " (" + where + ")");
  }
}

// Applies a key=value config file. dataset.* and output.* keys are consumed
// here; everything else is forwarded to the engine and validated eagerly.
void apply_config_file(mrsvpr_config* config, CommonOpts& opts) {
  std::ifstream in(opts.config_path);
  if (!in) {
    throw CliError(2, "config: cannot open '" + opts.config_path + "'");
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = cli::trim(line);
    if (text.empty() || text[0] == '#') {
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw CliError(2, "config: expected key=value (line " +
                            std::to_string(line_no) + ")");
    }
    const std::string key = cli::trim(text.substr(0, eq));
    const std::string value = cli::trim(text.substr(eq + 1));
    if (key == "dataset.ref") {
      opts.dataset_ref = value;
    } else if (key == "dataset.test") {
      opts.dataset_test = value;
    } else if (key == "output.dir") {
      opts.output_dir = value;
    } else {
      forward_set(config, key, value,
                  "line " + std::to_string(line_no));
    }
  }
}

void apply_overrides(mrsvpr_config* config,
                     const std::vector<std::string>& sets) {
  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw CliError(2, "config: --set expects key=value, got '" + kv + "'");
    }
    forward_set(config, cli::trim(kv.substr(0, eq)),
                cli::trim(kv.substr(eq + 1)), "--set");
  }
}

// Builds the engine config from file plus overrides and resolves the
// CLI-owned dataset/output settings into `opts`.
void configure(mrsvpr_config* config, CommonOpts& opts) {
  if (!opts.config_path.empty()) {
    apply_config_file(config, opts);
  }
  apply_overrides(config, opts.sets);
}

std::string get_value(const mrsvpr_config* config, const char* key) {
  size_t needed = 0;
  check(mrsvpr_config_get(config, key, nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(mrsvpr_config_get(config, key, out.data(), out.size(), &needed));
  out.resize(needed - 1);
  return out;
}

std::string result_json_string(const mrsvpr_result* result,
                               int include_timing) {
  size_t needed = 0;
  check(mrsvpr_result_json(result, include_timing, nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(mrsvpr_result_json(result, include_timing, out.data(), out.size(),
                           &needed));
  out.resize(needed - 1);
  return out;
}

std::string result_csv_string(const mrsvpr_result* result,
                              const char* table) {
  size_t needed = 0;
  check(mrsvpr_result_csv(result, table, nullptr, 0, &needed));
  std::string out(needed, '\0');
  check(mrsvpr_result_csv(result, table, out.data(), out.size(), &needed));
  out.resize(needed - 1);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw CliError(1, "output: cannot write '" + path + "'");
  }
  out << content;
  out.flush();
  if (!out) {
    throw CliError(1, "output: failed writing '" + path + "'");
  }
  std::cerr << "wrote " << path << "\n";
}

std::string ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw CliError(1, "output: cannot create directory '" + dir + "': " +
                          ec.message());
  }
  return dir;
}

std::string resolve_path(const std::string& flag,
                         const std::optional<std::string>& from_file,
                         const char* what) {
  if (!flag.empty()) {
    return flag;
  }
  if (from_file.has_value() && !from_file->empty()) {
    return *from_file;
  }
  throw CliError(2, std::string("config: ") + what + " dataset missing (pass "
                        "--" + what + " or set dataset." + what +
                        " in the config file)");
}

// Linear-interpolation quantile over a copy of `values` (p in [0, 1]).
double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  if (values.size() == 1) {
    return values[0];
  }
  const double pos = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

// ---- subcommands ---------------------------------------------------------

int run_match(CommonOpts opts, bool timing, bool baseline_mode,
              bool seed_given) {
  ConfigHandle config;
  configure(config, opts);
  if (seed_given) {
    forward_set(config, "pipeline.seed", std::to_string(opts.seed), "--seed");
  }

  const std::string ref_path =
      resolve_path(opts.ref_flag, opts.dataset_ref, "ref");
  const std::string test_path =
      resolve_path(opts.test_flag, opts.dataset_test, "test");
  SequenceHandle ref{cli::load_sequence(ref_path, config)};
  SequenceHandle test{cli::load_sequence(test_path, config)};

  ResultHandle result;
  if (baseline_mode) {
    check(mrsvpr_baseline(ref.ptr, test.ptr, config, &result.ptr));
  } else {
    check(mrsvpr_match(ref.ptr, test.ptr, config, &result.ptr));
  }
  std::cerr << (baseline_mode ? "baseline" : "match") << ": best_index="
            << mrsvpr_result_best_index(result.ptr)
            << " best_score=" << cli::format_double(
                   mrsvpr_result_best_score(result.ptr))
            << "\n";

  std::cout << result_json_string(result.ptr, timing ? 1 : 0) << "\n";

  const std::string out_dir =
      !opts.out_flag.empty() ? opts.out_flag : opts.output_dir.value_or("");
  if (!out_dir.empty()) {
    ensure_out_dir(out_dir);
    write_text_file((fs::path(out_dir) / "result.json").string(),
                    result_json_string(result.ptr, 1));
    if (!baseline_mode) {
      write_text_file((fs::path(out_dir) / "levels.csv").string(),
                      result_csv_string(result.ptr, "levels"));
    }
  }
  return 0;
}

int run_bench(CommonOpts opts) {
  ConfigHandle config;
  configure(config, opts);
  forward_set(config, "pipeline.seed", std::to_string(opts.seed), "--seed");

  ResultHandle result;
  check(mrsvpr_bench_run(config, &result.ptr));

  const std::string out_dir = ensure_out_dir(
      !opts.out_flag.empty() ? opts.out_flag : opts.output_dir.value_or("."));
  const std::string report_path = (fs::path(out_dir) / "report.json").string();
  const std::string trials_path = (fs::path(out_dir) / "trials.csv").string();
  const std::string curve_path = (fs::path(out_dir) / "pr_curve.csv").string();
  write_text_file(report_path, result_json_string(result.ptr, 1));
  write_text_file(trials_path, result_csv_string(result.ptr, "trials"));
  write_text_file(curve_path, result_csv_string(result.ptr, "pr_curve"));

  // stdout carries the deterministic report plus the output manifest.
  json doc = json::parse(result_json_string(result.ptr, 0));
  doc["outputs"] = json::array({report_path, trials_path, curve_path});
  std::cout << doc.dump(2) << "\n";
  return 0;
}

std::vector<int> parse_lmax_spec(const std::string& spec) {
  std::vector<int> out;
  const auto parse_int = [&spec](const std::string& token) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(token, &used);
      if (used != token.size() || v < 1) {
        throw std::invalid_argument(token);
      }
      return v;
    } catch (const std::exception&) {
      throw CliError(2, "config: --lmax expects integers >= 1, got '" + spec +
                            "'");
    }
  };
  const std::size_t dots = spec.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_int(cli::trim(spec.substr(0, dots)));
    const int hi = parse_int(cli::trim(spec.substr(dots + 2)));
    if (hi < lo) {
      throw CliError(2, "config: --lmax range is empty: '" + spec + "'");
    }
    for (int v = lo; v <= hi; ++v) {
      out.push_back(v);
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = spec.find(',', start);
    out.push_back(parse_int(cli::trim(
        comma == std::string::npos ? spec.substr(start)
                                   : spec.substr(start, comma - start))));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_tau_spec(const std::string& spec) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = spec.find(',', start);
    const std::string token = cli::trim(
        comma == std::string::npos ? spec.substr(start)
                                   : spec.substr(start, comma - start));
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size() || !(v > 0.0)) {
        throw std::invalid_argument(token);
      }
      out.push_back(v);
    } catch (const std::exception&) {
      throw CliError(2, "config: --tau expects positive numbers, got '" +
                            spec + "'");
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

int run_sweep(CommonOpts opts, const std::string& lmax_spec,
              const std::string& tau_spec) {
  const std::vector<int> depths = parse_lmax_spec(lmax_spec);
  const std::vector<double> taus = parse_tau_spec(tau_spec);

  std::string table =
      "lmax,tau,status,trials,mrs_median_error,mrs_q1_error,mrs_q3_error,"
      "mrs_success_rate,mrs_auc,mrs_median_evaluations,predicted_speedup,"
      "invocation_ratio_median,baseline_median_error,baseline_success_rate\n";
  for (const int depth : depths) {
    for (const double tau : taus) {
      CommonOpts combo = opts;
      ConfigHandle config;
      configure(config, combo);
      forward_set(config, "pipeline.seed", std::to_string(opts.seed),
                  "--seed");
      forward_set(config, "pipeline.depth", std::to_string(depth), "--lmax");
      forward_set(config, "pipeline.tau", cli::format_double(tau), "--tau");

      std::string row = std::to_string(depth) + "," + cli::format_double(tau);
      mrsvpr_result* raw = nullptr;
      const mrsvpr_status st = mrsvpr_bench_run(config, &raw);
      ResultHandle result{raw};
      if (st == MRSVPR_ERR_INFEASIBLE) {
        std::cerr << "sweep: lmax=" << depth << " tau="
                  << cli::format_double(tau)
                  << " infeasible: " << mrsvpr_last_error() << "\n";
        table += row + ",infeasible,,,,,,,,,,\n";
        continue;
      }
      check(st);

      const json doc = json::parse(result_json_string(result.ptr, 0));
      std::vector<double> errors;
      for (const json& trial : doc.at("trials")) {
        errors.push_back(trial.at("mrs").at("error").get<double>());
      }
      const json& mrs = doc.at("summary").at("mrs");
      row += ",ok," + std::to_string(errors.size());
      row += "," + cli::format_double(mrs.at("median_error").get<double>());
      row += "," + cli::format_double(quantile(errors, 0.25));
      row += "," + cli::format_double(quantile(errors, 0.75));
      row += "," + cli::format_double(mrs.at("success_rate").get<double>());
      row += "," + cli::format_double(mrs.at("auc").get<double>());
      row += "," +
             cli::format_double(mrs.at("median_evaluations").get<double>());
      row += "," + cli::format_double(
                       doc.at("summary").at("predicted_speedup").get<double>());
      if (doc.at("summary").contains("baseline")) {
        const json& base = doc.at("summary").at("baseline");
        row += "," + cli::format_double(doc.at("summary")
                                            .at("invocation_ratio_median")
                                            .get<double>());
        row +=
            "," + cli::format_double(base.at("median_error").get<double>());
        row +=
            "," + cli::format_double(base.at("success_rate").get<double>());
      } else {
        row += ",,,";
      }
      table += row + "\n";
      std::cerr << "sweep: lmax=" << depth << " tau="
                << cli::format_double(tau) << " ok\n";
    }
  }

  std::cout << table;
  const std::string out_dir =
      !opts.out_flag.empty() ? opts.out_flag : opts.output_dir.value_or("");
  if (!out_dir.empty()) {
    ensure_out_dir(out_dir);
    write_text_file((fs::path(out_dir) / "sweep.csv").string(), table);
  }
  return 0;
}

int run_synth(CommonOpts opts) {
  ConfigHandle config;
  configure(config, opts);

  SequenceHandle ref;
  SequenceHandle test;
  std::int64_t truth = 0;
  check(mrsvpr_synth_generate(config, opts.seed, &ref.ptr, &test.ptr,
                              &truth));

  const std::string out_dir = ensure_out_dir(
      !opts.out_flag.empty() ? opts.out_flag : opts.output_dir.value_or("."));
  const std::string ref_path = (fs::path(out_dir) / "ref.csv").string();
  const std::string test_path = (fs::path(out_dir) / "test.csv").string();
  const std::string meta_path = (fs::path(out_dir) / "meta.json").string();
  cli::write_sequence_csv(ref_path, ref.ptr);
  std::cerr << "wrote " << ref_path << "\n";
  cli::write_sequence_csv(test_path, test.ptr);
  std::cerr << "wrote " << test_path << "\n";

  json meta;
  meta["seed"] = opts.seed;
  meta["truth_end"] = truth;
  meta["ref_len"] = mrsvpr_sequence_size(ref.ptr);
  meta["test_len"] = mrsvpr_sequence_size(test.ptr);
  meta["dim"] = mrsvpr_sequence_dim(ref.ptr);
  meta["warp"] = std::stod(get_value(config, "synth.warp"));
  meta["noise"] = std::stod(get_value(config, "synth.noise"));
  meta["viewpoint_jitter"] =
      std::stod(get_value(config, "synth.viewpoint_jitter"));
  meta["walk_velocity"] = std::stod(get_value(config, "synth.walk_velocity"));
  write_text_file(meta_path, meta.dump(2) + "\n");

  json manifest;
  manifest["outputs"] = json::array({ref_path, test_path, meta_path});
  manifest["truth_end"] = truth;
  std::cout << manifest.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-resolution sequence place recognition"};
  app.require_subcommand(1);

  CommonOpts match_opts;
  bool match_timing = false;
  CLI::App* match = app.add_subcommand(
      "match", "locate a test sequence in a reference with the "
               "coarse-to-fine particle search");
  match->add_option("--config", match_opts.config_path,
                    "key=value configuration file");
  match->add_option("--set", match_opts.sets,
                    "override one configuration key (key=value)");
  match->add_option("--ref", match_opts.ref_flag,
                    "reference dataset: descriptor CSV or image directory");
  match->add_option("--test", match_opts.test_flag,
                    "test dataset: descriptor CSV or image directory");
  auto* match_seed =
      match->add_option("--seed", match_opts.seed,
                        "random seed (required; makes the run auditable)");
  match_seed->required();
  match->add_flag("--timing", match_timing,
                  "include wall-clock timing in the stdout report");
  match->add_option("--out", match_opts.out_flag,
                    "directory for result.json and levels.csv");

  CommonOpts baseline_opts;
  bool baseline_timing = false;
  CLI::App* baseline = app.add_subcommand(
      "baseline", "exhaustive sequence matcher over the full reference");
  baseline->add_option("--config", baseline_opts.config_path,
                       "key=value configuration file");
  baseline->add_option("--set", baseline_opts.sets,
                       "override one configuration key (key=value)");
  baseline->add_option("--ref", baseline_opts.ref_flag,
                       "reference dataset: descriptor CSV or image directory");
  baseline->add_option("--test", baseline_opts.test_flag,
                       "test dataset: descriptor CSV or image directory");
  baseline->add_flag("--timing", baseline_timing,
                     "include wall-clock timing in the stdout report");
  baseline->add_option("--out", baseline_opts.out_flag,
                       "directory for result.json");

  CommonOpts bench_opts;
  CLI::App* bench = app.add_subcommand(
      "bench", "multi-trial synthetic benchmark of both methods");
  bench->add_option("--config,--spec", bench_opts.config_path,
                    "key=value configuration file");
  bench->add_option("--set", bench_opts.sets,
                    "override one configuration key (key=value)");
  bench->add_option("--seed", bench_opts.seed, "random seed (required)")
      ->required();
  bench->add_option("--out", bench_opts.out_flag,
                    "directory for report.json, trials.csv, pr_curve.csv");

  CommonOpts sweep_opts;
  std::string lmax_spec = "1..4";
  std::string tau_spec = "1.0,1.5,2.0,2.5";
  CLI::App* sweep = app.add_subcommand(
      "sweep", "benchmark a grid of pyramid depths and overlap factors");
  sweep->add_option("--config", sweep_opts.config_path,
                    "key=value configuration file");
  sweep->add_option("--set", sweep_opts.sets,
                    "override one configuration key (key=value)");
  sweep->add_option("--lmax", lmax_spec,
                    "depths to try: 'A..B' or comma list (default 1..4)");
  sweep->add_option("--tau", tau_spec,
                    "overlap factors to try, comma list");
  sweep->add_option("--seed", sweep_opts.seed, "random seed (required)")
      ->required();
  sweep->add_option("--out", sweep_opts.out_flag,
                    "directory for sweep.csv");

  CommonOpts synth_opts;
  CLI::App* synth = app.add_subcommand(
      "synth", "emit a synthetic dataset (ref.csv, test.csv, meta.json)");
  synth->add_option("--config", synth_opts.config_path,
                    "key=value configuration file");
  synth->add_option("--set", synth_opts.sets,
                    "override one configuration key (key=value)");
  synth->add_option("--seed", synth_opts.seed, "random seed (required)")
      ->required();
  synth->add_option("--out", synth_opts.out_flag,
                    "output directory (default '.')");

  try {
    app.parse(argc, argv);
    if (match->parsed()) {
      return run_match(match_opts, match_timing, false, true);
    }
    if (baseline->parsed()) {
      return run_match(baseline_opts, baseline_timing, true, false);
    }
    if (bench->parsed()) {
      return run_bench(bench_opts);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_opts, lmax_spec, tau_spec);
    }
    if (synth->parsed()) {
      return run_synth(synth_opts);
    }
    std::cerr << "error: cli: no subcommand\n";
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli: " << e.what() << "\n";
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
