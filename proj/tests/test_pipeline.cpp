#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mrsvpr/error.hpp"
#include "mrsvpr/pipeline.hpp"
#include "mrsvpr/seqmatch.hpp"
#include "mrsvpr/synth.hpp"
#include "mrsvpr/types.hpp"

using namespace mrsvpr;

namespace {

SyntheticResult aligned_pair(std::uint64_t seed) {
  // embed_end 700 with test_len 100 starts the window at frame 601, which
  // lines up with the decimation grids of every level of a depth-3 schedule,
  // so an exactly zero-scoring trajectory exists at all resolutions.
  SyntheticSpec spec;
  spec.ref_len = 1000;
  spec.test_len = 100;
  spec.dim = 32;
  spec.warp = 1.0;
  spec.noise = 0.0;
  spec.embed_end = 700;
  return make_synthetic(spec, seed);
}

PipelineConfig seeded_config(std::uint64_t seed) {
  PipelineConfig config;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("predicted speedup follows the closed form") {
  CHECK(predicted_speedup(300, 2.0, 3) == doctest::Approx(400.0).epsilon(1e-12));
  CHECK(predicted_speedup(100, 2.0, 3) ==
        doctest::Approx(400.0 / 3.0).epsilon(1e-12));
  CHECK(predicted_speedup(100, 2.0, 1) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK_THROWS_AS(predicted_speedup(0, 2.0, 3), InputError);
  CHECK_THROWS_AS(predicted_speedup(100, 0.0, 3), ConfigError);
  CHECK_THROWS_AS(predicted_speedup(100, 2.0, 0), ConfigError);
  CHECK_THROWS_AS(predicted_speedup(100, 2.0, 31), ConfigError);
}

TEST_CASE("the seed is mandatory") {
  const SyntheticResult data = aligned_pair(1);
  PipelineConfig config;  // no seed
  CHECK_THROWS_AS(run_mrs(data.reference, data.test, config), ConfigError);
}

TEST_CASE("config bounds are enforced") {
  const SyntheticResult data = aligned_pair(2);
  auto expect_config_error = [&](auto&& mutate) {
    PipelineConfig config = seeded_config(7);
    mutate(config);
    CHECK_THROWS_AS(run_mrs(data.reference, data.test, config), ConfigError);
  };
  expect_config_error([](PipelineConfig& c) { c.depth = 0; });
  expect_config_error([](PipelineConfig& c) { c.tau = 0.0; });
  expect_config_error([](PipelineConfig& c) { c.tau = 16.5; });
  expect_config_error([](PipelineConfig& c) { c.thres_particle_frac = 0.0; });
  expect_config_error([](PipelineConfig& c) { c.thres_particle_frac = 1.1; });
  expect_config_error([](PipelineConfig& c) { c.coverage_threshold = 0.0; });
  expect_config_error([](PipelineConfig& c) { c.coverage_threshold = 1.5; });
  expect_config_error([](PipelineConfig& c) { c.iteration_cap = 0; });
  expect_config_error([](PipelineConfig& c) { c.iteration_cap = 1001; });
  expect_config_error([](PipelineConfig& c) { c.workers = 0; });
  expect_config_error([](PipelineConfig& c) { c.workers = 257; });
  expect_config_error([](PipelineConfig& c) { c.min_coarse_test_len = 0; });
  expect_config_error([](PipelineConfig& c) {
    c.id_shift_policy = IdShiftPolicy::kFixed;
    c.id_shift_fixed = -1;
  });
  expect_config_error([](PipelineConfig& c) {
    c.jitter_policy = JitterPolicy::kFixed;
    c.jitter_fixed = -0.5;
  });
}

TEST_CASE("input sequences are validated") {
  const SyntheticResult data = aligned_pair(3);
  const PipelineConfig config = seeded_config(1);
  CHECK_THROWS_AS(run_mrs(FrameSequence{}, data.test, config), InputError);
  CHECK_THROWS_AS(run_mrs(data.reference, FrameSequence{}, config), InputError);
  CHECK_THROWS_AS(run_mrs(data.test, data.reference, config),
                  InputError);  // test longer than reference
  SyntheticSpec other;
  other.ref_len = 200;
  other.test_len = 50;
  other.dim = 16;  // mismatched descriptor dim
  const SyntheticResult odd = make_synthetic(other, 4);
  CHECK_THROWS_AS(run_mrs(data.reference, odd.test, config), InputError);
}

TEST_CASE("a schedule too deep for the test sequence fails loudly") {
  const SyntheticResult data = aligned_pair(5);
  PipelineConfig config = seeded_config(1);
  config.depth = 4;  // ceil(100/8) = 13 < 16 coarse frames
  CHECK_THROWS_AS(run_mrs(data.reference, data.test, config), InfeasibleError);
}

TEST_CASE("noiseless aligned embedding is recovered exactly") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    const SyntheticResult data = aligned_pair(seed);
    const MatchResult got =
        run_mrs(data.reference, data.test, seeded_config(seed * 100));
    CHECK(got.best_index == data.truth_end);
    CHECK(got.best_score == 0.0);

    // The exhaustive baseline agrees end to end.
    const BaselineResult base = seqslam_baseline(data.reference, data.test);
    CHECK(got.best_index == base.best_index);
    CHECK(got.best_score == base.best_score);
  }
}

TEST_CASE("unaligned noiseless embeddings are still recovered exactly") {
  // embed_end 703: the window start 604 is off the coarse decimation grids,
  // so coarse levels only see near-zero lines; full resolution plus the final
  // refinement must still land on the exact end frame.
  SyntheticSpec spec;
  spec.ref_len = 1000;
  spec.test_len = 100;
  spec.dim = 32;
  spec.embed_end = 703;
  for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
    const SyntheticResult data = make_synthetic(spec, seed);
    const MatchResult got =
        run_mrs(data.reference, data.test, seeded_config(seed));
    CHECK(got.best_index == 703);
    CHECK(got.best_score == 0.0);
  }
}

TEST_CASE("matching survives moderate observation noise") {
  SyntheticSpec spec;
  spec.ref_len = 1000;
  spec.test_len = 100;
  spec.dim = 64;
  spec.noise = 0.05;
  for (std::uint64_t seed : {31ULL, 32ULL, 33ULL, 34ULL, 35ULL}) {
    const SyntheticResult data = make_synthetic(spec, seed);
    const MatchResult got =
        run_mrs(data.reference, data.test, seeded_config(seed + 1000));
    CHECK(std::llabs(got.best_index - data.truth_end) <= 3);
  }
}

TEST_CASE("the same seed reproduces the run bit for bit") {
  const SyntheticResult data = aligned_pair(40);
  const MatchResult a = run_mrs(data.reference, data.test, seeded_config(99));
  const MatchResult b = run_mrs(data.reference, data.test, seeded_config(99));
  CHECK(a.best_index == b.best_index);
  CHECK(a.best_score == b.best_score);
  CHECK(a.ranked == b.ranked);
  CHECK(a.total_particle_evaluations == b.total_particle_evaluations);
  CHECK(a.total_trajectory_scores == b.total_trajectory_scores);
  CHECK(a.refine_trajectory_scores == b.refine_trajectory_scores);
  CHECK(a.total_distance_fills == b.total_distance_fills);
  REQUIRE(a.levels.size() == b.levels.size());
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    CHECK(a.levels[i].iterations == b.levels[i].iterations);
    CHECK(a.levels[i].resamples == b.levels[i].resamples);
    CHECK(a.levels[i].n_eff == b.levels[i].n_eff);
    CHECK(a.levels[i].spans == b.levels[i].spans);
    CHECK(a.levels[i].coverage == b.levels[i].coverage);
  }
}

TEST_CASE("results are identical for any worker count") {
  SyntheticSpec spec;
  spec.ref_len = 800;
  spec.test_len = 80;
  spec.dim = 32;
  spec.noise = 0.02;
  const SyntheticResult data = make_synthetic(spec, 50);

  PipelineConfig config = seeded_config(123);
  const MatchResult one = run_mrs(data.reference, data.test, config);
  config.workers = 3;
  const MatchResult three = run_mrs(data.reference, data.test, config);
  config.workers = 8;
  const MatchResult eight = run_mrs(data.reference, data.test, config);

  for (const MatchResult* r : {&three, &eight}) {
    CHECK(r->best_index == one.best_index);
    CHECK(r->best_score == one.best_score);
    CHECK(r->ranked == one.ranked);
    CHECK(r->total_trajectory_scores == one.total_trajectory_scores);
    CHECK(r->total_particle_evaluations == one.total_particle_evaluations);
    REQUIRE(r->levels.size() == one.levels.size());
    for (std::size_t i = 0; i < one.levels.size(); ++i) {
      CHECK(r->levels[i].n_eff == one.levels[i].n_eff);
      CHECK(r->levels[i].spans == one.levels[i].spans);
      CHECK(r->levels[i].trajectory_scores == one.levels[i].trajectory_scores);
    }
    // Only the cost accounting may differ between the dense level cache and
    // the per-call memo strips.
  }
}

TEST_CASE("the level trace reflects the schedule and particle budget") {
  const SyntheticResult data = aligned_pair(60);
  PipelineConfig config = seeded_config(7);
  const MatchResult r = run_mrs(data.reference, data.test, config);

  REQUIRE(r.levels.size() == 3);
  CHECK(r.levels[0].interval == 4);
  CHECK(r.levels[1].interval == 2);
  CHECK(r.levels[2].interval == 1);
  CHECK(r.levels[0].ref_len == 250);
  CHECK(r.levels[0].test_len == 25);
  CHECK(r.levels[2].ref_len == 1000);
  CHECK(r.levels[2].test_len == 100);

  // tau = 2 on a 10x length ratio: 20 particles, halved at each promotion.
  CHECK(r.levels[0].particles_in == 20);
  CHECK(r.levels[1].particles_in == 10);
  CHECK(r.levels[2].particles_in == 5);
  CHECK(r.ranked.size() == 5);

  std::int64_t sum_scores = r.refine_trajectory_scores;
  std::int64_t sum_evals = 0;
  for (const LevelTrace& lv : r.levels) {
    CHECK(lv.iterations >= 2);  // the first iteration can never converge
    CHECK(lv.iterations <= config.iteration_cap);
    CHECK(static_cast<int>(lv.n_eff.size()) == lv.iterations);
    CHECK(static_cast<int>(lv.spans.size()) == lv.iterations);
    CHECK(static_cast<int>(lv.coverage.size()) == lv.iterations);
    CHECK(lv.coverage.front() == 1.0);  // defined: no previous span
    for (double n : lv.n_eff) {
      CHECK(n >= 1.0);
      CHECK(n <= static_cast<double>(lv.particles_in) + 1e-9);
    }
    for (std::int64_t span : lv.spans) {
      CHECK(span >= 1);
      CHECK(span <= lv.ref_len);
    }
    sum_scores += lv.trajectory_scores;
    sum_evals += lv.particle_evaluations;
  }
  CHECK(r.total_trajectory_scores == sum_scores);
  CHECK(r.total_particle_evaluations == sum_evals);

  // Ranked is sorted by weight, best first, with full-resolution indices.
  for (std::size_t i = 1; i < r.ranked.size(); ++i) {
    CHECK(r.ranked[i - 1].second >= r.ranked[i].second);
  }
  for (const auto& [index, weight] : r.ranked) {
    CHECK(index >= 1);
    CHECK(index <= 1000);
    CHECK(weight >= 0.0);
  }
  // The winner is the refinement of the top-ranked particle.
  CHECK(std::llabs(r.best_index - r.ranked.front().first) <= 4);
}

TEST_CASE("tau controls the initial particle count") {
  const SyntheticResult data = aligned_pair(70);
  for (const auto& [tau, expected] :
       std::vector<std::pair<double, std::int64_t>>{
           {2.0, 20}, {3.0, 30}, {4.5, 45}, {7.5, 75}}) {
    PipelineConfig config = seeded_config(1);
    config.tau = tau;
    const MatchResult r = run_mrs(data.reference, data.test, config);
    CHECK(r.levels[0].particles_in == expected);
  }
}

TEST_CASE("window and jitter policies are echoed in the trace") {
  const SyntheticResult data = aligned_pair(80);

  PipelineConfig config = seeded_config(2);
  config.id_shift_policy = IdShiftPolicy::kHalf;
  config.jitter_policy = JitterPolicy::kQuarter;
  MatchResult r = run_mrs(data.reference, data.test, config);
  // Levels have test lengths 25, 50, 100.
  CHECK(r.levels[0].id_shift == 13);
  CHECK(r.levels[1].id_shift == 25);
  CHECK(r.levels[2].id_shift == 50);
  CHECK(r.levels[0].jitter_sigma == 7.0);
  CHECK(r.levels[1].jitter_sigma == 13.0);
  CHECK(r.levels[2].jitter_sigma == 25.0);

  config = seeded_config(2);
  config.id_shift_policy = IdShiftPolicy::kFixed;
  config.id_shift_fixed = 6;
  config.jitter_policy = JitterPolicy::kFixed;
  config.jitter_fixed = 1.5;
  r = run_mrs(data.reference, data.test, config);
  for (const LevelTrace& lv : r.levels) {
    CHECK(lv.id_shift == 6);
    CHECK(lv.jitter_sigma == 1.5);
  }

  config = seeded_config(2);  // auto: wide at the coarsest, narrow after
  r = run_mrs(data.reference, data.test, config);
  CHECK(r.levels[0].id_shift == 7);  // max(4, ceil(25/4))
  CHECK(r.levels[1].id_shift == 4);
  CHECK(r.levels[2].id_shift == 4);
}

TEST_CASE("depth one runs a single-level filter") {
  SyntheticSpec spec;
  spec.ref_len = 300;
  spec.test_len = 50;
  spec.dim = 32;
  spec.embed_end = 200;
  const SyntheticResult data = make_synthetic(spec, 90);
  PipelineConfig config = seeded_config(5);
  config.depth = 1;
  const MatchResult r = run_mrs(data.reference, data.test, config);
  REQUIRE(r.levels.size() == 1);
  CHECK(r.levels[0].interval == 1);
  CHECK(r.best_index == 200);
  CHECK(r.best_score == 0.0);
}

TEST_CASE("an oversized particle budget for a tiny range fails loudly") {
  SyntheticSpec spec;
  spec.ref_len = 100;
  spec.test_len = 90;
  spec.dim = 8;
  const SyntheticResult data = make_synthetic(spec, 91);
  PipelineConfig config = seeded_config(1);
  config.depth = 2;   // coarse level: ref 50, test 45 -> only 6 positions
  config.tau = 16.0;  // asks for ceil(100/90*16) = 18 particles
  CHECK_THROWS_AS(run_mrs(data.reference, data.test, config), InputError);
}

TEST_CASE("coverage shrinks monotonically in nearly all runs") {
  // Statistical property: within a level, the union span should not grow
  // after the first iteration (resampling jitter may cause rare exceptions).
  int runs = 0;
  int monotone = 0;
  SyntheticSpec spec;
  spec.ref_len = 500;
  spec.test_len = 64;
  spec.dim = 24;
  spec.noise = 0.02;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SyntheticResult data = make_synthetic(spec, 9000 + seed);
    PipelineConfig config = seeded_config(seed);
    const MatchResult r = run_mrs(data.reference, data.test, config);
    ++runs;
    bool ok = true;
    for (const LevelTrace& lv : r.levels) {
      for (std::size_t i = 1; i < lv.spans.size(); ++i) {
        if (lv.spans[i] > lv.spans[i - 1]) {
          ok = false;
        }
      }
    }
    if (ok) {
      ++monotone;
    }
  }
  CHECK(monotone >= static_cast<int>(std::ceil(0.95 * runs)));
}

TEST_CASE("custom velocity sweeps are honored") {
  const SyntheticResult data = aligned_pair(95);
  PipelineConfig config = seeded_config(3);
  config.velocities = {1.0};
  const MatchResult r = run_mrs(data.reference, data.test, config);
  CHECK(r.best_index == data.truth_end);
  CHECK(r.best_score == 0.0);

  config.velocities = {};
  CHECK_THROWS_AS(run_mrs(data.reference, data.test, config), ConfigError);
  config.velocities = {0.8, -1.0};
  CHECK_THROWS_AS(run_mrs(data.reference, data.test, config), ConfigError);
}
