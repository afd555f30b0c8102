#include "mrsvpr/pyramid.hpp"

#include <algorithm>
#include <string>

#include "mrsvpr/error.hpp"

namespace mrsvpr {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

}  // namespace

LevelSchedule LevelSchedule::build(std::int64_t ref_len, std::int64_t test_len,
                                   int depth,
                                   std::int64_t min_coarse_test_len) {
  if (depth < 1) {
    throw ConfigError("pyramid: depth must be >= 1");
  }
  if (depth > 30) {
    throw ConfigError("pyramid: depth " + std::to_string(depth) +
                      " is unreasonably large");
  }
  if (ref_len <= 0 || test_len <= 0) {
    throw InputError("pyramid: sequence lengths must be positive");
  }
  if (test_len > ref_len) {
    throw InputError("pyramid: test sequence longer than reference (" +
                     std::to_string(test_len) + " > " +
                     std::to_string(ref_len) + ")");
  }
  LevelSchedule schedule;
  schedule.levels_.reserve(depth);
  for (int i = 1; i <= depth; ++i) {
    Level lv;
    lv.level = i;
    lv.interval = std::int64_t{1} << (depth - i);
    lv.ref_len = ceil_div(ref_len, lv.interval);
    lv.test_len = ceil_div(test_len, lv.interval);
    schedule.levels_.push_back(lv);
  }
  const Level& coarse = schedule.levels_.front();
  if (coarse.test_len < min_coarse_test_len) {
    throw InfeasibleError(
        "pyramid: level 1 (interval " + std::to_string(coarse.interval) +
        ") leaves only " + std::to_string(coarse.test_len) +
        " test frames, below the minimum of " +
        std::to_string(min_coarse_test_len) +
        "; reduce the depth or use a longer test sequence");
  }
  return schedule;
}

const Level& LevelSchedule::level(int i) const {
  if (i < 1 || i > depth()) {
    throw InputError("pyramid: level " + std::to_string(i) +
                     " outside [1, " + std::to_string(depth()) + "]");
  }
  return levels_[i - 1];
}

FrameSequence decimate(const FrameSequence& seq, std::int64_t interval) {
  if (interval <= 0) {
    throw InputError("decimate: interval must be positive");
  }
  if (seq.empty()) {
    throw InputError("decimate: empty sequence");
  }
  if (interval == 1) {
    return seq;
  }
  const std::int64_t count = ceil_div(seq.size(), interval);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count * seq.dim()));
  std::vector<std::int64_t> source;
  source.reserve(count);
  for (std::int64_t k = 0; k < count; ++k) {
    const std::span<const double> f = seq.frame(k * interval);
    values.insert(values.end(), f.begin(), f.end());
    source.push_back(seq.source_index(k * interval));
  }
  // The values come straight out of a validated sequence; skip the
  // per-element checks from_descriptors would repeat.
  FrameSequence out;
  out.count_ = count;
  out.dim_ = seq.dim();
  out.values_ = std::move(values);
  out.source_ = std::move(source);
  return out;
}

std::int64_t promote_index(std::int64_t index, const Level& from,
                           const Level& to) {
  if (to.interval * 2 != from.interval) {
    throw InputError("promote: levels are not adjacent");
  }
  if (index < 1 || index > from.ref_len) {
    throw InputError("promote: index " + std::to_string(index) +
                     " outside level range [1, " +
                     std::to_string(from.ref_len) + "]");
  }
  return std::clamp(index * 2, to.test_len, to.ref_len);
}

std::int64_t demote_index(std::int64_t index, const Level& from,
                          const Level& to) {
  if (from.interval * 2 != to.interval) {
    throw InputError("demote: levels are not adjacent");
  }
  if (index < 1 || index > from.ref_len) {
    throw InputError("demote: index " + std::to_string(index) +
                     " outside level range [1, " +
                     std::to_string(from.ref_len) + "]");
  }
  return std::clamp((index + 1) / 2, to.test_len, to.ref_len);
}

}  // namespace mrsvpr
