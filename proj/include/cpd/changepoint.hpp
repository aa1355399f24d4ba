#pragma once

// Multiple change-point estimation with a known number of change points.
//
// For every grid scale j = 1..floor(log2 n) and offset t = 1..kappa+1 the
// series is cut at evenly spaced boundaries. The kappa segments with the
// highest intra-segment score each yield a candidate from the single
// change-point estimator, and the grid is rated by gamma(t, j): the smallest,
// over three interleaved partitions into 3-segment windows, of the kappa-th
// largest window score. The estimate is the gamma * 2^-j weighted mean of the
// sorted candidate vectors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpd/distance.hpp"

namespace cpd {

/// How truncation depths are chosen for each distance evaluation.
///
/// Unset depths are derived per call from the operands: m_max from the
/// shorter operand's length, l_max from the smallest gap between the values
/// involved, capped at l_cap.
struct DepthPolicy {
  std::optional<int> m_max;
  std::optional<int> l_max;
  int l_cap = 20;
};

/// Depths for comparing operands drawn from `values`, the shorter of which holds `shorter` samples.
DistanceParams resolve_depths(std::span<const double> values, std::size_t shorter, const DepthPolicy& policy);

struct GridSpec {
  int j = 1;
  int t = 1;
  double alpha = 0.0;   ///< 2^-j / 3
  double weight = 0.0;  ///< 2^-j
  std::size_t spacing = 0;  ///< floor(n alpha), the extension used by the single estimator
  std::vector<std::size_t> boundaries;  ///< floor(n alpha (i + 1/(t+1))), i = 0..3*2^j - 1
};

/// Boundaries of grid (j, t), computed in exact integer arithmetic. Returns
/// nullopt when n alpha_j < 1 (grid finer than one sample per segment).
std::optional<GridSpec> grid_boundaries(std::size_t n, int j, int t);

/// Delta over every consecutive boundary pair (b_{i-1}, b_i), i = 1..; windows
/// too short to split score 0.
std::vector<double> segment_scores(std::span<const double> x, const GridSpec& grid, const DepthPolicy& policy);

/// gamma(t, j). Zero when any partition offset has fewer than kappa windows.
double grid_gamma(std::span<const double> x, const GridSpec& grid, std::size_t kappa, const DepthPolicy& policy);

struct GridRecord {
  int j = 1;
  int t = 1;
  double weight = 0.0;
  double gamma = 0.0;
  /// Sorted candidate change points (1-based sample indices); empty when gamma is 0.
  std::vector<std::size_t> candidates;
};

struct EstimateReport {
  std::size_t kappa = 0;
  std::size_t n = 0;
  std::vector<double> theta_hat;
  std::vector<GridRecord> grids;  ///< ascending (j, t)
  double eta = 0.0;
  DepthPolicy depths;
};

/// Runs the full estimator. Throws InvalidInput for kappa < 1 and NoSignal
/// when every grid scores zero.
EstimateReport estimate_changepoints(std::span<const double> x, std::size_t kappa, const DepthPolicy& policy = {});

struct ChangePointTruth {
  std::vector<double> theta;
  double lambda_min = 0.0;

  std::size_t kappa() const noexcept { return theta.size(); }
};

/// Validates (strictly increasing, inside (0, 1)) and fills lambda_min, the
/// smallest gap including the ends 0 and 1.
ChangePointTruth make_truth(std::vector<double> theta);

/// sum_k |theta_hat_k - theta_k|. Throws InvalidInput on a kappa mismatch.
double error_rate(std::span<const double> theta_hat, const ChangePointTruth& truth);
double error_rate(const EstimateReport& report, const ChangePointTruth& truth);

}  // namespace cpd
