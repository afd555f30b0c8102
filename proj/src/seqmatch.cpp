#include "mrsvpr/seqmatch.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mrsvpr/descriptor.hpp"

namespace mrsvpr {

DifferenceMatrix::DifferenceMatrix(std::int64_t rows, std::int64_t cols)
    : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) {
    throw InputError("difference matrix: dimensions must be positive");
  }
  d_.assign(static_cast<std::size_t>(rows * cols), 0.0);
}

DifferenceMatrix build_difference_matrix(const FrameSequence& test,
                                         const FrameSequence& window) {
  if (test.empty() || window.empty()) {
    throw InputError("difference matrix: sequences must be nonempty");
  }
  if (test.dim() != window.dim()) {
    throw InputError("difference matrix: descriptor dims differ (" +
                     std::to_string(test.dim()) + " vs " +
                     std::to_string(window.dim()) + ")");
  }
  DifferenceMatrix d(test.size(), window.size());
  for (std::int64_t t = 1; t <= test.size(); ++t) {
    const std::span<const double> a = test.frame(t - 1);
    for (std::int64_t j = 1; j <= window.size(); ++j) {
      d.at(t, j) = distance(a, window.frame(j - 1));
    }
  }
  return d;
}

void enhance_difference_matrix(DifferenceMatrix& d, std::int64_t radius) {
  if (radius <= 0) {
    throw ConfigError("enhance: radius must be positive");
  }
  const std::int64_t rows = d.rows();
  const std::int64_t cols = d.cols();
  std::vector<double> row(static_cast<std::size_t>(cols));
  for (std::int64_t t = 1; t <= rows; ++t) {
    for (std::int64_t j = 1; j <= cols; ++j) {
      row[j - 1] = d.at(t, j);
    }
    for (std::int64_t j = 1; j <= cols; ++j) {
      const std::int64_t lo = std::max<std::int64_t>(1, j - radius);
      const std::int64_t hi = std::min<std::int64_t>(cols, j + radius);
      double mean = 0.0;
      for (std::int64_t k = lo; k <= hi; ++k) {
        mean += row[k - 1];
      }
      mean /= static_cast<double>(hi - lo + 1);
      double var = 0.0;
      for (std::int64_t k = lo; k <= hi; ++k) {
        var += (row[k - 1] - mean) * (row[k - 1] - mean);
      }
      var /= static_cast<double>(hi - lo + 1);
      const double sd = std::max(std::sqrt(var), 1e-6);
      d.at(t, j) = (row[j - 1] - mean) / sd;
    }
  }
}

std::optional<double> trajectory_score(const DifferenceMatrix& d,
                                       std::int64_t j, double v) {
  if (v <= 0.0) {
    throw InputError("trajectory_score: velocity must be positive");
  }
  return detail::trajectory_score_with(
      [&d](std::int64_t t, std::int64_t col) { return d.at(t, col); },
      d.cols(), d.rows(), j, v);
}

namespace {

void check_pair(const FrameSequence& t_m, const FrameSequence& t_n) {
  if (t_m.empty() || t_n.empty()) {
    throw InputError("sequence match: sequences must be nonempty");
  }
  if (t_m.dim() != t_n.dim()) {
    throw InputError("sequence match: descriptor dims differ (" +
                     std::to_string(t_m.dim()) + " vs " +
                     std::to_string(t_n.dim()) + ")");
  }
}

void check_velocities(std::span<const double> velocities) {
  if (velocities.empty()) {
    throw ConfigError("sequence match: velocity sweep must be nonempty");
  }
  for (double v : velocities) {
    if (!(v > 0.0)) {
      throw ConfigError("sequence match: velocities must be positive");
    }
  }
}

}  // namespace

namespace detail {

EvalResult evaluate_memoized(const FrameSequence& t_m, const FrameSequence& t_n,
                             std::int64_t id_prev, std::int64_t id_shift,
                             std::span<const double> velocities,
                             std::int64_t* distance_fills) {
  check_pair(t_m, t_n);
  check_velocities(velocities);
  if (id_shift < 0) {
    throw InputError("evaluate: id_shift must be >= 0");
  }
  if (id_prev < 1 || id_prev > t_m.size()) {
    throw InputError("evaluate: id_prev " + std::to_string(id_prev) +
                     " outside reference [1, " + std::to_string(t_m.size()) +
                     "]");
  }

  const std::int64_t m = t_m.size();
  const std::int64_t len = t_n.size();
  const std::int64_t j_lo = std::max<std::int64_t>(1, id_prev - id_shift);
  const std::int64_t j_hi = std::min(m, id_prev + id_shift);
  if (j_lo > j_hi) {
    throw InfeasibleError(
        "evaluate: search window lies outside the reference");
  }

  // Lines reach at most v_max * (len - 1) columns left of their end index;
  // memoize distances over just that strip so repeated candidates share work.
  const double v_max = *std::max_element(velocities.begin(), velocities.end());
  const std::int64_t reach_lo = std::max<std::int64_t>(
      1, round_half_up(j_lo - v_max * (len - 1)));
  const std::int64_t strip = j_hi - reach_lo + 1;
  std::vector<double> memo(static_cast<std::size_t>(strip * len),
                           std::numeric_limits<double>::quiet_NaN());
  const auto cell = [&](std::int64_t t, std::int64_t col) {
    double& slot = memo[(t - 1) * strip + (col - reach_lo)];
    if (std::isnan(slot)) {
      slot = distance(t_n.frame(t - 1), t_m.frame(col - 1));
      if (distance_fills != nullptr) {
        ++*distance_fills;
      }
    }
    return slot;
  };
  return scan_candidates(cell, m, len, j_lo, j_hi, velocities);
}

}  // namespace detail

EvalResult evaluate(const FrameSequence& t_m, const FrameSequence& t_n,
                    std::int64_t id_prev, std::int64_t id_shift,
                    std::span<const double> velocities) {
  return detail::evaluate_memoized(t_m, t_n, id_prev, id_shift, velocities,
                                   nullptr);
}

BaselineResult seqslam_baseline(const FrameSequence& reference,
                                const FrameSequence& test,
                                std::span<const double> velocities,
                                bool enhance, std::int64_t enhance_radius) {
  check_pair(reference, test);
  check_velocities(velocities);
  if (test.size() > reference.size()) {
    throw InputError("baseline: test sequence longer than reference (" +
                     std::to_string(test.size()) + " > " +
                     std::to_string(reference.size()) + ")");
  }
  DifferenceMatrix d = build_difference_matrix(test, reference);
  if (enhance) {
    enhance_difference_matrix(d, enhance_radius);
  }
  const EvalResult r = detail::scan_candidates(
      [&d](std::int64_t t, std::int64_t col) { return d.at(t, col); },
      d.cols(), d.rows(), 1, d.cols(), velocities);
  return BaselineResult{r.best_score, r.best_index, r.scores_evaluated};
}

}  // namespace mrsvpr
