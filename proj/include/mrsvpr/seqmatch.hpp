#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mrsvpr/error.hpp"
#include "mrsvpr/types.hpp"

namespace mrsvpr {

/// The fixed trajectory-velocity sweep, in scan order.
inline constexpr double kDefaultVelocities[] = {0.8, 0.9, 1.0, 1.1, 1.2};

/// Rounds to the nearest integer with halves toward +infinity.
inline std::int64_t round_half_up(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5));
}

/// Dense pairwise L1 distance matrix between a test sequence (rows) and a
/// reference window (columns). Indexed 1-based to match the trajectory
/// formulas: at(t, j) is the distance between test frame t and window
/// column j.
class DifferenceMatrix {
 public:
  DifferenceMatrix(std::int64_t rows, std::int64_t cols);

  double at(std::int64_t t, std::int64_t j) const {
    return d_[(t - 1) * cols_ + (j - 1)];
  }
  double& at(std::int64_t t, std::int64_t j) {
    return d_[(t - 1) * cols_ + (j - 1)];
  }

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

 private:
  std::int64_t rows_;
  std::int64_t cols_;
  std::vector<double> d_;
};

/// Fills a difference matrix with every test-vs-window descriptor distance.
/// Throws InputError on empty inputs or dimension mismatch.
DifferenceMatrix build_difference_matrix(const FrameSequence& test,
                                         const FrameSequence& window);

/// Optional local contrast enhancement: within each row, every entry is
/// re-expressed relative to the mean and standard deviation of a sliding
/// window of +-radius columns around it (std floored at 1e-6).
void enhance_difference_matrix(DifferenceMatrix& d, std::int64_t radius);

/// Result of a candidate scan: the minimum trajectory score, the reference
/// end index (column coordinate) achieving it, and how many candidate lines
/// were actually scored. Ties break toward the smallest end index, then the
/// smallest velocity.
struct EvalResult {
  double best_score = 0.0;
  std::int64_t best_index = 0;
  std::int64_t scores_evaluated = 0;
};

/// Sums matrix cells along the constant-velocity line that ends at column j:
/// score = sum over t = 1..L of D(t, round(j - v * (L - t))).
/// Returns nullopt when the line leaves the matrix (the candidate is simply
/// not scorable; callers skip it).
std::optional<double> trajectory_score(const DifferenceMatrix& d,
                                       std::int64_t j, double v);

/// Scores every candidate (end index, velocity) with end indices in
/// [id_prev - id_shift, id_prev + id_shift] against the reference sequence
/// t_m, and returns the arg-min with the count of scored lines. Candidates
/// whose line leaves the available frames are skipped and not counted.
/// Throws InputError on empty/mismatched sequences, InfeasibleError when no
/// candidate at all can be scored.
EvalResult evaluate(const FrameSequence& t_m, const FrameSequence& t_n,
                    std::int64_t id_prev, std::int64_t id_shift,
                    std::span<const double> velocities = kDefaultVelocities);

/// Brute-force SeqSLAM matcher: builds the full test x reference difference
/// matrix and scans every feasible end index at every velocity.
/// `evaluations` counts the scored (end index, velocity) pairs.
struct BaselineResult {
  double best_score = 0.0;
  std::int64_t best_index = 0;
  std::int64_t evaluations = 0;
};

BaselineResult seqslam_baseline(const FrameSequence& reference,
                                const FrameSequence& test,
                                std::span<const double> velocities =
                                    kDefaultVelocities,
                                bool enhance = false,
                                std::int64_t enhance_radius = 10);

namespace detail {

/// evaluate() with an optional count of distance computations performed
/// (cache misses of the per-call memo strip).
EvalResult evaluate_memoized(const FrameSequence& t_m, const FrameSequence& t_n,
                             std::int64_t id_prev, std::int64_t id_shift,
                             std::span<const double> velocities,
                             std::int64_t* distance_fills);

/// Shared candidate-scan core. `cell(t, col)` returns the distance between
/// test frame t and reference column col (both 1-based); it is only invoked
/// for in-bounds cells. Lines are feasible iff the whole line stays within
/// [1, n_cols]; since velocities are positive the endpoints suffice.
template <typename CellFn>
std::optional<double> trajectory_score_with(CellFn&& cell, std::int64_t n_cols,
                                            std::int64_t test_len,
                                            std::int64_t j, double v) {
  if (j < 1 || j > n_cols) {
    return std::nullopt;
  }
  if (round_half_up(j - v * (test_len - 1)) < 1) {
    return std::nullopt;
  }
  double sum = 0.0;
  for (std::int64_t t = 1; t <= test_len; ++t) {
    sum += cell(t, round_half_up(j - v * (test_len - t)));
  }
  return sum;
}

template <typename CellFn>
EvalResult scan_candidates(CellFn&& cell, std::int64_t n_cols,
                           std::int64_t test_len, std::int64_t j_lo,
                           std::int64_t j_hi,
                           std::span<const double> velocities) {
  EvalResult best;
  bool found = false;
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    for (double v : velocities) {
      const std::optional<double> score =
          trajectory_score_with(cell, n_cols, test_len, j, v);
      if (!score) {
        continue;
      }
      ++best.scores_evaluated;
      if (!found || *score < best.best_score) {
        found = true;
        best.best_score = *score;
        best.best_index = j;
      }
    }
  }
  if (!found) {
    throw InfeasibleError(
        "evaluate: no scorable trajectory in the search window (reference "
        "too short for the window and velocity sweep)");
  }
  return best;
}

}  // namespace detail

}  // namespace mrsvpr
