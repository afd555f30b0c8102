#pragma once

#include <cstdint>
#include <string>

#include "mrsvpr/bench.hpp"
#include "mrsvpr/pipeline.hpp"
#include "mrsvpr/seqmatch.hpp"

namespace mrsvpr {

/// Report builders. JSON payloads have sorted keys and round-trip-exact
/// numbers, so equal results serialize to identical bytes. Everything that
/// depends on measured time or worker count lives under a single "timing"
/// key, which `include_timing = false` omits.

std::string match_report_json(const MatchResult& result,
                              const PipelineConfig& config,
                              std::int64_t ref_len, std::int64_t test_len,
                              std::int64_t dim, bool include_timing);

std::string baseline_report_json(const BaselineResult& result,
                                 std::int64_t ref_len, std::int64_t test_len,
                                 std::int64_t dim, bool enhance,
                                 std::int64_t enhance_radius,
                                 bool include_timing, double wall_ms);

std::string bench_report_json(const BenchReport& report, bool include_timing);

/// Flat tables. `match_levels_csv` describes the per-level trace of a match;
/// the bench tables mirror the JSON trial rows and PR curves.
std::string match_levels_csv(const MatchResult& result);
std::string bench_trials_csv(const BenchReport& report);
std::string bench_pr_csv(const BenchReport& report);

/// Shortest round-trip decimal form of a double (same form JSON uses).
std::string format_double(double v);

}  // namespace mrsvpr
