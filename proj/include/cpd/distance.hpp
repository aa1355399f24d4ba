#pragma once

// Empirical distributional distance between sequences, and the two window
// operators built on it: the intra-window score and the single change-point
// estimator.
//
// Every stratum (m, l) contributes w_m * w_l * sum_B |nu(x1,B) - nu(x2,B)|
// with w_j = 1 / (j (j + 1)). The per-stratum sum is evaluated exactly in
// integers as sum_B |c1(B) N2 - c2(B) N1| / (N1 N2) and the strata are
// accumulated m-major, so any two routes that count correctly agree to the
// last bit.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cpd/frequency.hpp"

namespace cpd {

/// 1 / (j (j + 1)); sums to 1 over j >= 1.
inline double weight(int j) noexcept { return 1.0 / (static_cast<double>(j) * (static_cast<double>(j) + 1.0)); }

struct DistanceParams {
  int m_max = 1;
  int l_max = 1;

  DistanceParams() = default;
  /// Throws InvalidInput unless both depths are >= 1.
  DistanceParams(int m_max, int l_max);
  explicit DistanceParams(const Depths& d) : DistanceParams(d.m_max, d.l_max) {}

  friend bool operator==(const DistanceParams&, const DistanceParams&) = default;
};

/// Per-stratum sums, indexed [m-1][l-1].
using StratumMatrix = std::vector<std::vector<double>>;

/// sum_m sum_l w_m w_l v[m][l], accumulated m-major.
double combine_strata(const StratumMatrix& values);

/// Upper bound 2 (sum_{m<=m_max} w_m)(sum_{l<=l_max} w_l), never reached.
double distance_bound(const DistanceParams& p) noexcept;

/// sum_B |nu(x1,B) - nu(x2,B)| for every stratum up to the given depths.
StratumMatrix stratum_distances(std::span<const double> x1, std::span<const double> x2,
                                const DistanceParams& p);

/// d-hat(x1, x2). Throws InvalidInput when either sequence is empty.
double empirical_distance(std::span<const double> x1, std::span<const double> x2,
                          const DistanceParams& p);

/// Probability model queried cell by cell.
class ProcessOracle {
 public:
  virtual ~ProcessOracle() = default;

  /// rho(B).
  virtual double cell_probability(const CellId& cell) const = 0;

  /// Total mass of stratum (m, l); 1 for a probability measure.
  virtual double stratum_total(int m, int l) const { return (void)m, (void)l, 1.0; }

  virtual bool supports(int m, int l) const = 0;
};

/// d-hat(x, rho). Cells the sequence never visits contribute their whole
/// mass, which is stratum_total minus the mass of the visited cells.
/// Throws UnsupportedProcess when the oracle lacks a stratum.
double distance_to_process(std::span<const double> x, const ProcessOracle& rho, const DistanceParams& p);

/// Delta_x(a, b): distance between X_{a..floor((a+b)/2)} and X_{ceil((a+b)/2)..b}.
///
/// 1-based inclusive indices. Returns nullopt when b <= a (no two halves);
/// throws InvalidInput when the window leaves 1..n.
std::optional<double> score_delta(std::span<const double> x, std::size_t a, std::size_t b,
                                  const DistanceParams& p);

/// Phi_x(a, b, alpha) with the extension given as an explicit sample count:
///   argmax_{t in a..b} d-hat(X_{A..t}, X_{t..B}),
///   A = max(1, a - extension), B = min(n, b + extension).
/// Only split points where both operands hold at least max(2, m_max) samples
/// are admissible; ties go to the smallest t. Returns nullopt when no split
/// point is admissible.
std::optional<std::size_t> estimate_single_extended(std::span<const double> x, std::size_t a,
                                                    std::size_t b, std::size_t extension,
                                                    const DistanceParams& p);

/// Phi_x(a, b, alpha): estimate_single_extended with extension floor(n alpha).
std::optional<std::size_t> estimate_single(std::span<const double> x, std::size_t a, std::size_t b,
                                           double alpha, const DistanceParams& p);

/// Smallest number of samples an operand of Phi must hold.
inline std::size_t min_operand_length(const DistanceParams& p) noexcept {
  return static_cast<std::size_t>(p.m_max < 2 ? 2 : p.m_max);
}

}  // namespace cpd
