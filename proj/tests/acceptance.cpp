// Acceptance gate: seven go/no-go criteria, one PASS/FAIL line each.
// Criteria 1-4 exercise the engine library directly; 5-7 drive the CLI
// binary (path injected as MRSVPR_CLI_PATH). Exit code is 0 only when all
// seven pass. Every tolerance is pinned here, in code.
#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mrsvpr/bench.hpp"
#include "mrsvpr/descriptor.hpp"
#include "mrsvpr/particle.hpp"
#include "mrsvpr/pipeline.hpp"
#include "mrsvpr/seqmatch.hpp"
#include "mrsvpr/synth.hpp"
#include "mrsvpr/types.hpp"

namespace fs = std::filesystem;

namespace {

// ---- pinned tolerances and workload knobs ---------------------------------

// Criterion 1: worked values.
constexpr double kSpeedupCoefficientTarget = 1.33;  // speedup / test length
constexpr double kSpeedupCoefficientTol = 0.01;
constexpr double kEffectivenessTol = 1e-9;
constexpr double kWeightUpdateTol = 1e-12;

// Criterion 2: exhaustive-oracle equivalence.
constexpr int kOracleSeeds = 50;
constexpr std::int64_t kOracleTestLen = 64;
constexpr std::int64_t kOracleRefLens[] = {512, 448, 384, 320, 256, 192, 128};

// Criteria 3 and 4 share one benchmark: the desk-scale accuracy workload.
constexpr std::int64_t kAccuracyRefLen = 3000;
constexpr std::int64_t kAccuracyTestLen = 100;
constexpr double kAccuracyNoise = 0.1;
constexpr int kAccuracyTrials = 20;
constexpr std::int64_t kAccuracyToleranceFrames = 2;
constexpr double kAccuracySuccessMin = 0.9;
constexpr std::uint64_t kAccuracySeed = 101;

// Criterion 4: cost reduction.
constexpr double kInvocationBarFraction = 0.5;  // of predicted_speedup
constexpr double kWallRatioMin = 5.0;

// Criteria 5-7: CLI workloads.
constexpr std::uint64_t kSweepDepthSeed = 202;
constexpr std::uint64_t kSweepTauSeed = 203;

// Criterion 6 runs with a zero-width per-evaluation search window: any wider
// window lets per-iteration hill-climbing bridge the gaps a sparse (low-tau)
// initialization leaves, making the final index independent of particle
// density on these smooth synthetic landscapes. With id_shift 0 the initial
// coverage is the binding constraint, which is exactly the effect the
// criterion asserts.
constexpr double kTauSweepNoise = 0.2;

// ---- subprocess helpers ----------------------------------------------------

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const std::string& workspace() {
  static const std::string path = [] {
    std::string tmpl =
        (fs::temp_directory_path() / "mrsvpr_accept_XXXXXX").string();
    char* got = mkdtemp(tmpl.data());
    if (got == nullptr) {
      std::cerr << "acceptance: cannot create workspace\n";
      std::exit(1);
    }
    return std::string(got);
  }();
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string err_path =
      workspace() + "/stderr_" + std::to_string(counter++) + ".log";
  const std::string cmd =
      std::string(MRSVPR_CLI_PATH) + " " + args + " 2>" + err_path;
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    result.exit_code = -1;
    return result;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
    result.out.append(buf, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.err = read_file(err_path);
  return result;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(
        start, comma == std::string::npos ? std::string::npos
                                          : comma - start));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return cells;
}

// Sweep stdout -> data rows (header dropped), each as its cell list.
std::vector<std::vector<std::string>> parse_sweep(const std::string& out) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(out);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (first) {
      first = false;  // header
      continue;
    }
    rows.push_back(split_csv_row(line));
  }
  return rows;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// ---- criteria --------------------------------------------------------------

bool criterion_worked_values(std::string& detail) {
  bool ok = true;
  std::ostringstream why;

  // Initial particle density and window overlap for the canonical sizes.
  const std::int64_t particles = mrsvpr::initial_particle_count(9000, 300, 2.0);
  ok &= particles == 60;
  const double overlap = mrsvpr::overlap_rate(2.0);
  ok &= overlap == 0.5;

  // Expected advantage at depth 3, tau 2 is 1.33x the test length.
  const double speedup = mrsvpr::predicted_speedup(300, 2.0, 3);
  const double coefficient = speedup / 300.0;
  ok &= speedup == 400.0;
  ok &= std::abs(coefficient - kSpeedupCoefficientTarget) <=
        kSpeedupCoefficientTol;

  // A uniform population of P particles has effectiveness P.
  mrsvpr::ParticleSet uniform = mrsvpr::init_uniform(60, 300, 9000, 1);
  const double n_eff = mrsvpr::effectiveness(uniform);
  ok &= std::abs(n_eff - 60.0) <= kEffectivenessTol;

  // Descriptor distance identity: L1 over the full descriptor length.
  const std::vector<double> zeros(768, 0.0);
  const std::vector<double> ones(768, 1.0);
  ok &= mrsvpr::distance(zeros, ones) == 768.0;

  // Patch normalization maps a constant frame to all-0.5 cells.
  mrsvpr::RawFrame flat;
  flat.width = 64;
  flat.height = 48;
  flat.pixels.assign(64 * 48, 0.37);
  mrsvpr::DescriptorParams params;  // 32x24 grid, patch 8
  const mrsvpr::Descriptor d = mrsvpr::preprocess(flat, params);
  for (double cell : d) {
    ok &= cell == 0.5;
  }

  // Constant-velocity trajectory sum over a hand-built difference matrix:
  // test descriptors all zero, window descriptors 1..5 -> D(t, j) = j.
  const mrsvpr::FrameSequence test_seq = mrsvpr::FrameSequence::from_descriptors(
      std::vector<double>(3, 0.0), 3, 1);
  const mrsvpr::FrameSequence window = mrsvpr::FrameSequence::from_descriptors(
      {1.0, 2.0, 3.0, 4.0, 5.0}, 5, 1);
  const mrsvpr::DifferenceMatrix diff =
      mrsvpr::build_difference_matrix(test_seq, window);
  const auto unit_speed = mrsvpr::trajectory_score(diff, 5, 1.0);
  ok &= unit_speed.has_value() && *unit_speed == 3.0 + 4.0 + 5.0;
  const auto slow = mrsvpr::trajectory_score(diff, 4, 0.8);
  ok &= slow.has_value() && *slow == 2.0 + 3.0 + 4.0;  // rounded row indices

  // Logistic weight update at a score 10 scales below the cohort median.
  const double updated = mrsvpr::update_weight(1.0, 0.0, 10.0, 1.0);
  ok &= std::abs(updated - 0.9999546021312976) <= kWeightUpdateTol;

  why << "particles " << particles << ", overlap " << overlap << ", speedup "
      << speedup << " (" << fmt(coefficient) << "x test length), uniform "
      << "N_eff " << fmt(n_eff) << ", distance/normalization/trajectory/"
      << "weight identities";
  detail = why.str();
  return ok;
}

bool criterion_oracle_equivalence(std::string& detail) {
  mrsvpr::PipelineConfig config;
  config.depth = 3;
  config.tau = 2.0;

  int matched = 0;
  int total = 0;
  std::ostringstream mismatches;
  constexpr int kRefLenCount =
      static_cast<int>(sizeof(kOracleRefLens) / sizeof(kOracleRefLens[0]));
  for (int i = 0; i < kOracleSeeds; ++i) {
    mrsvpr::SyntheticSpec spec;
    spec.ref_len = kOracleRefLens[i % kRefLenCount];
    spec.test_len = kOracleTestLen;
    spec.dim = 64;
    spec.noise = 0.0;
    spec.warp = 1.0;  // random embed position per seed
    const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(i);
    const mrsvpr::SyntheticResult data = mrsvpr::make_synthetic(spec, seed);

    config.seed = seed;
    const mrsvpr::MatchResult mrs =
        mrsvpr::run_mrs(data.reference, data.test, config);
    const mrsvpr::BaselineResult base =
        mrsvpr::seqslam_baseline(data.reference, data.test);
    ++total;
    if (mrs.best_index == base.best_index) {
      ++matched;
    } else if (mismatches.tellp() < 120) {
      mismatches << " [seed " << seed << ": " << mrs.best_index << " vs "
                 << base.best_index << "]";
    }
  }
  detail = std::to_string(matched) + "/" + std::to_string(total) +
           " noiseless instances matched the exhaustive result exactly "
           "(ref length 128..512, test length 64)" +
           mismatches.str();
  return matched == total;
}

// One benchmark feeds criteria 3 and 4.
const mrsvpr::BenchReport& accuracy_bench() {
  static const mrsvpr::BenchReport report = [] {
    mrsvpr::BenchConfig config;
    config.synth.ref_len = kAccuracyRefLen;
    config.synth.test_len = kAccuracyTestLen;
    config.synth.noise = kAccuracyNoise;  // dim stays at the default 128
    config.warps = {0.9, 1.0, 1.1};
    config.trials = kAccuracyTrials;
    config.tolerance_frames = kAccuracyToleranceFrames;
    config.pipeline.depth = 3;
    config.pipeline.tau = 2.0;
    config.pipeline.seed = kAccuracySeed;
    config.run_baseline = true;
    return mrsvpr::run_bench(config);
  }();
  return report;
}

bool criterion_stochastic_accuracy(std::string& detail) {
  const mrsvpr::BenchReport& report = accuracy_bench();
  const bool rate_ok = report.mrs.success_rate >= kAccuracySuccessMin;
  const bool median_ok =
      report.mrs.median_error <= report.baseline.median_error;
  detail = "success rate " + fmt(report.mrs.success_rate) + " (bar " +
           fmt(kAccuracySuccessMin) + ") within +/-" +
           std::to_string(kAccuracyToleranceFrames) +
           " frames over " + std::to_string(kAccuracyTrials) +
           " trials, warps {0.9, 1.0, 1.1}; median error " +
           fmt(report.mrs.median_error) + " vs baseline " +
           fmt(report.baseline.median_error);
  return rate_ok && median_ok;
}

bool criterion_cost_reduction(std::string& detail) {
  const mrsvpr::BenchReport& report = accuracy_bench();
  const double invocation_bar =
      report.predicted_speedup * kInvocationBarFraction;
  const bool invocation_ok = report.invocation_ratio_median >= invocation_bar;
  const bool wall_ok = report.wall_ratio_median >= kWallRatioMin;
  detail = "invocation ratio " + fmt(report.invocation_ratio_median) +
           (invocation_ok ? " >= " : " < ") + "bar " + fmt(invocation_bar) +
           " (= predicted " + fmt(report.predicted_speedup) + " x " +
           fmt(kInvocationBarFraction) + "); wall-clock ratio " +
           fmt(report.wall_ratio_median) + (wall_ok ? " >= " : " < ") +
           fmt(kWallRatioMin);
  return invocation_ok && wall_ok;
}

std::string sweep_synth_sets() {
  return "--set synth.ref_len=" + std::to_string(kAccuracyRefLen) +
         " --set synth.test_len=" + std::to_string(kAccuracyTestLen) +
         " --set synth.noise=" + fmt(kAccuracyNoise) +
         " --set bench.trials=" + std::to_string(kAccuracyTrials) +
         " --set bench.tolerance_frames=" +
         std::to_string(kAccuracyToleranceFrames) +
         " --set bench.run_baseline=false";
}

bool criterion_depth_degradation(std::string& detail) {
  const RunResult run =
      run_cli("sweep " + sweep_synth_sets() + " --lmax 1..4 --tau 2.0 --seed " +
              std::to_string(kSweepDepthSeed));
  if (run.exit_code != 0) {
    detail = "sweep failed: " + run.err;
    return false;
  }
  const auto rows = parse_sweep(run.out);
  if (rows.size() != 4) {
    detail = "expected 4 sweep rows, got " + std::to_string(rows.size());
    return false;
  }
  // Row cells: lmax, tau, status, trials, median, q1, q3, ...
  struct Depth {
    std::string status;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
  };
  std::vector<Depth> depths;
  for (const auto& row : rows) {
    Depth d;
    d.status = row[2];
    if (d.status == "ok") {
      d.median = std::stod(row[4]);
      d.q1 = std::stod(row[5]);
      d.q3 = std::stod(row[6]);
    }
    depths.push_back(d);
  }

  bool ok = true;
  std::ostringstream why;
  // Depths 1-3 must run and their interquartile ranges must overlap pairwise.
  for (int i = 0; i < 3; ++i) {
    ok &= depths[i].status == "ok";
  }
  bool iqr_overlap = true;
  for (int a = 0; a < 3 && ok; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      iqr_overlap &= depths[a].q1 <= depths[b].q3 &&
                     depths[b].q1 <= depths[a].q3;
    }
  }
  ok &= iqr_overlap;

  // Depth 4 either cannot be scheduled or must be strictly worse.
  const bool depth4_rejected = depths[3].status == "infeasible";
  const bool depth4_worse =
      depths[3].status == "ok" && depths[3].median > depths[2].median;
  ok &= depth4_rejected || depth4_worse;

  why << "depth 4 "
      << (depth4_rejected
              ? "rejected as schedule-infeasible"
              : (depth4_worse ? "strictly worse (median " +
                                    fmt(depths[3].median) + " > " +
                                    fmt(depths[2].median) + ")"
                              : "neither rejected nor worse"))
      << "; depth 1-3 medians " << fmt(depths[0].median) << "/"
      << fmt(depths[1].median) << "/" << fmt(depths[2].median)
      << " with IQRs [" << fmt(depths[0].q1) << "," << fmt(depths[0].q3)
      << "] [" << fmt(depths[1].q1) << "," << fmt(depths[1].q3) << "] ["
      << fmt(depths[2].q1) << "," << fmt(depths[2].q3) << "] "
      << (iqr_overlap ? "overlapping" : "NOT overlapping");
  detail = why.str();
  return ok;
}

bool criterion_overlap_sensitivity(std::string& detail) {
  const std::string sets =
      "--set synth.ref_len=" + std::to_string(kAccuracyRefLen) +
      " --set synth.test_len=" + std::to_string(kAccuracyTestLen) +
      " --set synth.noise=" + fmt(kTauSweepNoise) +
      " --set bench.trials=" + std::to_string(kAccuracyTrials) +
      " --set bench.tolerance_frames=" +
      std::to_string(kAccuracyToleranceFrames) +
      " --set bench.run_baseline=false --set pipeline.id_shift=0";
  const RunResult run = run_cli("sweep " + sets +
                                " --lmax 3..3 --tau 0.9,1.0,1.5,2.0,2.5 "
                                "--seed " +
                                std::to_string(kSweepTauSeed));
  if (run.exit_code != 0) {
    detail = "sweep failed: " + run.err;
    return false;
  }
  const auto rows = parse_sweep(run.out);
  if (rows.size() != 5) {
    detail = "expected 5 sweep rows, got " + std::to_string(rows.size());
    return false;
  }
  double success_no_overlap = -1.0;
  double success_tau2 = -1.0;
  std::vector<double> evaluations;  // for tau in {1.0, 1.5, 2.0, 2.5}
  std::ostringstream rates;
  for (const auto& row : rows) {
    if (row[2] != "ok") {
      detail = "tau " + row[1] + " unexpectedly " + row[2];
      return false;
    }
    const double tau = std::stod(row[1]);
    const double success = std::stod(row[7]);
    const double evals = std::stod(row[9]);
    rates << " tau " << row[1] << ": success " << success << ", evals "
          << evals << ";";
    if (tau == 0.9) {
      success_no_overlap = success;
    }
    if (tau == 2.0) {
      success_tau2 = success;
    }
    if (tau >= 1.0) {
      evaluations.push_back(evals);
    }
  }
  const bool success_ordered = success_no_overlap < success_tau2;
  bool evals_increase = evaluations.size() == 4;
  for (std::size_t i = 1; i < evaluations.size(); ++i) {
    evals_increase &= evaluations[i] > evaluations[i - 1];
  }
  detail = std::string("success(tau 0.9) ") + fmt(success_no_overlap) +
           (success_ordered ? " < " : " !< ") + "success(tau 2.0) " +
           fmt(success_tau2) + "; evaluation medians " +
           (evals_increase ? "strictly increase" : "do NOT increase") +
           " over tau {1.0, 1.5, 2.0, 2.5} (id_shift 0, noise " +
           fmt(kTauSweepNoise) + ") —" + rates.str();
  return success_ordered && evals_increase;
}

bool criterion_determinism(std::string& detail) {
  const std::string data_dir = workspace() + "/data";
  const RunResult synth = run_cli(
      "synth --set synth.ref_len=400 --set synth.test_len=60 "
      "--set synth.dim=32 --set synth.noise=0 --set synth.embed_end=260 "
      "--seed 5 --out " + data_dir);
  if (synth.exit_code != 0) {
    detail = "synth failed: " + synth.err;
    return false;
  }

  const std::string match_args = "match --ref " + data_dir + "/ref.csv" +
                                 " --test " + data_dir + "/test.csv" +
                                 " --set pipeline.depth=2 --seed 7";
  const RunResult m1 = run_cli(match_args);
  const RunResult m2 = run_cli(match_args);
  const RunResult m3 = run_cli(match_args + " --set pipeline.workers=4");
  const bool match_ok = m1.exit_code == 0 && m2.exit_code == 0 &&
                        m3.exit_code == 0 && m1.out == m2.out &&
                        m1.out == m3.out && !m1.out.empty();

  const std::string bench_args =
      "bench --set synth.ref_len=300 --set synth.test_len=50 "
      "--set synth.dim=16 --set synth.noise=0.01 --set pipeline.depth=2 "
      "--set bench.trials=3 --seed 11 --out " + workspace() + "/bench";
  const RunResult b1 = run_cli(bench_args);
  const RunResult b2 = run_cli(bench_args);
  const RunResult b3 = run_cli(bench_args + " --set pipeline.workers=2");
  const bool bench_ok = b1.exit_code == 0 && b2.exit_code == 0 &&
                        b3.exit_code == 0 && b1.out == b2.out &&
                        b1.out == b3.out && !b1.out.empty();

  detail = std::string("match payloads ") +
           (match_ok ? "byte-identical" : "DIFFER") +
           " across 2 repeats + workers=4; bench payloads " +
           (bench_ok ? "byte-identical" : "DIFFER") +
           " across 2 repeats + workers=2 (timing excluded by default)";
  return match_ok && bench_ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    bool (*fn)(std::string&);
  };
  const Criterion criteria[] = {
      {"worked-value conformance", criterion_worked_values},
      {"exhaustive-oracle equivalence", criterion_oracle_equivalence},
      {"stochastic accuracy", criterion_stochastic_accuracy},
      {"search-cost reduction", criterion_cost_reduction},
      {"pyramid depth degradation", criterion_depth_degradation},
      {"overlap-factor sensitivity", criterion_overlap_sensitivity},
      {"seeded determinism", criterion_determinism},
  };

  int passed = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << "criterion " << index << ": " << (ok ? "PASS" : "FAIL")
              << " — " << criterion.label << ": " << detail << "\n";
    passed += ok ? 1 : 0;
  }
  std::cout << "acceptance: " << passed << "/" << index
            << " criteria passed\n";
  return passed == index ? 0 : 1;
}
