#include "cpd/changepoint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "cpd/errors.hpp"

namespace cpd {

namespace {

// Delta_x(a, b) with per-call depths; 0 for windows that cannot be halved.
double window_score(std::span<const double> x, std::size_t a, std::size_t b, const DepthPolicy& policy) {
  if (b <= a) return 0.0;
  const std::size_t left = (a + b) / 2 - a + 1;
  const std::size_t right = b - (a + b + 1) / 2 + 1;
  const auto params = resolve_depths(x.subspan(a - 1, b - a + 1), std::min(left, right), policy);
  return score_delta(x, a, b, params).value_or(0.0);
}

std::size_t segment_start(std::size_t boundary) { return std::max<std::size_t>(1, boundary); }

}  // namespace

DistanceParams resolve_depths(std::span<const double> values, std::size_t shorter, const DepthPolicy& policy) {
  int m = 0;
  int l = 0;
  if (policy.m_max) {
    m = *policy.m_max;
  } else {
    m = std::max(1, static_cast<int>(std::bit_width(std::max<std::size_t>(shorter, 1))) - 1);
  }
  if (policy.l_max) {
    l = *policy.l_max;
  } else {
    // All values equal: no gap to resolve, so fall back to the cap.
    const auto gap = min_separation(values, {});
    l = gap ? default_depths(2, *gap, policy.l_cap).l_max : policy.l_cap;
  }
  return DistanceParams(m, l);
}

std::optional<GridSpec> grid_boundaries(std::size_t n, int j, int t) {
  if (j < 1 || j > 60) throw InvalidInput("grid_boundaries: iteration index out of range");
  if (t < 1) throw InvalidInput("grid_boundaries: offset index must be >= 1");
  // alpha_j = 1 / (3 * 2^j); the last index floor(1/alpha_j - 1/(t+1)) is 3 * 2^j - 1.
  const std::uint64_t cells = 3ULL << j;
  if (n < cells) return std::nullopt;
  GridSpec g;
  g.j = j;
  g.t = t;
  g.weight = std::ldexp(1.0, -j);
  g.alpha = g.weight / 3.0;
  g.spacing = n / cells;
  const std::uint64_t denom = cells * static_cast<std::uint64_t>(t + 1);
  g.boundaries.reserve(cells);
  for (std::uint64_t i = 0; i < cells; ++i) {
    const std::uint64_t numer = static_cast<std::uint64_t>(n) * (i * static_cast<std::uint64_t>(t + 1) + 1);
    g.boundaries.push_back(static_cast<std::size_t>(numer / denom));
  }
  return g;
}

std::vector<double> segment_scores(std::span<const double> x, const GridSpec& grid, const DepthPolicy& policy) {
  std::vector<double> scores;
  const auto& b = grid.boundaries;
  for (std::size_t i = 1; i < b.size(); ++i) scores.push_back(window_score(x, segment_start(b[i - 1]), b[i], policy));
  return scores;
}

double grid_gamma(std::span<const double> x, const GridSpec& grid, std::size_t kappa, const DepthPolicy& policy) {
  if (kappa < 1) throw InvalidInput("grid_gamma: kappa must be >= 1");
  const auto& b = grid.boundaries;
  if (b.empty()) return 0.0;
  const std::size_t last = b.size() - 1;
  double gamma = 0.0;
  for (std::size_t offset = 0; offset < 3; ++offset) {
    if (last < offset) return 0.0;
    const std::size_t windows = (last - offset) / 3;
    if (windows < kappa) return 0.0;
    std::vector<double> d;
    d.reserve(windows);
    for (std::size_t i = 1; i <= windows; ++i) {
      d.push_back(window_score(x, segment_start(b[offset + 3 * (i - 1)]), b[offset + 3 * i], policy));
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kappa - 1), d.end(), std::greater<>());
    const double kth = d[kappa - 1];
    gamma = offset == 0 ? kth : std::min(gamma, kth);
  }
  return gamma;
}

EstimateReport estimate_changepoints(std::span<const double> x, std::size_t kappa, const DepthPolicy& policy) {
  if (kappa < 1) throw InvalidInput("estimate_changepoints: kappa must be >= 1");
  if (x.empty()) throw InvalidInput("estimate_changepoints: empty series");
  const std::size_t n = x.size();
  const int iterations = static_cast<int>(std::bit_width(n)) - 1;
  const std::size_t min_segment = static_cast<std::size_t>(std::max(2, policy.m_max.value_or(2)));

  EstimateReport report;
  report.kappa = kappa;
  report.n = n;
  report.depths = policy;

  for (int j = 1; j <= iterations; ++j) {
    for (int t = 1; t <= static_cast<int>(kappa) + 1; ++t) {
      GridRecord rec;
      rec.j = j;
      rec.t = t;
      rec.weight = std::ldexp(1.0, -j);
      const auto grid = grid_boundaries(n, j, t);
      if (grid && grid->spacing >= min_segment) rec.gamma = grid_gamma(x, *grid, kappa, policy);

      if (rec.gamma > 0.0) {
        const auto scores = segment_scores(x, *grid, policy);
        std::vector<std::size_t> order(scores.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) { return scores[lhs] > scores[rhs]; });
        for (std::size_t k = 0; k < kappa; ++k) {
          const std::size_t a = segment_start(grid->boundaries[order[k]]);
          const std::size_t b = grid->boundaries[order[k] + 1];
          const std::size_t first = a > grid->spacing ? a - grid->spacing : 1;
          const std::size_t last = std::min(n, b + grid->spacing);
          const std::size_t mid = (a + b) / 2;
          const auto params = resolve_depths(x.subspan(first - 1, last - first + 1),
                                             std::min(mid - first + 1, last - mid + 1), policy);
          const auto candidate = estimate_single_extended(x, a, b, grid->spacing, params);
          if (!candidate) {
            // No admissible split point: the grid cannot produce a full candidate vector.
            rec.gamma = 0.0;
            rec.candidates.clear();
            break;
          }
          rec.candidates.push_back(*candidate);
        }
        std::sort(rec.candidates.begin(), rec.candidates.end());
      }
      report.eta += rec.weight * rec.gamma;
      report.grids.push_back(std::move(rec));
    }
  }

  if (!(report.eta > 0.0)) throw NoSignal("every grid scored zero; no change-point estimate exists");

  std::vector<double> sums(kappa, 0.0);
  for (const auto& rec : report.grids) {
    if (rec.gamma <= 0.0) continue;
    for (std::size_t k = 0; k < kappa; ++k) sums[k] += rec.weight * rec.gamma * static_cast<double>(rec.candidates[k]);
  }
  const double scale = static_cast<double>(n) * report.eta;
  report.theta_hat.reserve(kappa);
  for (double s : sums) report.theta_hat.push_back(s / scale);
  return report;
}

ChangePointTruth make_truth(std::vector<double> theta) {
  if (theta.empty()) throw InvalidInput("change-point truth needs at least one parameter");
  double prev = 0.0;
  double gap = 1.0;
  for (double th : theta) {
    if (!(th > prev && th < 1.0)) throw InvalidInput("change-point parameters must be strictly increasing inside (0, 1)");
    gap = std::min(gap, th - prev);
    prev = th;
  }
  gap = std::min(gap, 1.0 - prev);
  return ChangePointTruth{std::move(theta), gap};
}

double error_rate(std::span<const double> theta_hat, const ChangePointTruth& truth) {
  if (theta_hat.size() != truth.theta.size()) {
    throw InvalidInput("error_rate: estimate has " + std::to_string(theta_hat.size()) + " change points, truth has " +
                       std::to_string(truth.theta.size()));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < theta_hat.size(); ++k) total += std::abs(theta_hat[k] - truth.theta[k]);
  return total;
}

double error_rate(const EstimateReport& report, const ChangePointTruth& truth) {
  return error_rate(report.theta_hat, truth);
}

}  // namespace cpd
