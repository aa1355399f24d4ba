#pragma once

// Slow reference implementations for equivalence tests. Nothing here shares
// code with the fast paths, and nothing here is linked into the estimator.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cpd/distance.hpp"

namespace cpd::oracle {

/// d-hat(x1, x2) by direct enumeration: every window is mapped to its cell
/// coordinates and tallied in an ordered map, stratum by stratum.
double brute_force_distance(std::span<const double> x1, std::span<const double> x2, int m_max, int l_max);

/// Phi by exhaustive scan over t with brute_force_distance; same contract as
/// estimate_single.
std::optional<std::size_t> brute_force_phi(std::span<const double> x, std::size_t a, std::size_t b, double alpha,
                                           const DistanceParams& p);

/// I.i.d. process whose marginal is a piecewise-uniform density on [0, 1].
class IidUniformOracle : public ProcessOracle {
 public:
  struct Piece {
    double low;
    double high;
    double mass;
  };

  /// Throws InvalidInput unless pieces lie in [0, 1], have low < high, and masses sum to 1.
  explicit IidUniformOracle(std::vector<Piece> pieces);

  /// Uniform on [low, high].
  static IidUniformOracle uniform(double low = 0.0, double high = 1.0);

  /// Marginal mass of [low, high).
  double interval_mass(double low, double high) const;

  double cell_probability(const CellId& cell) const override;
  bool supports(int m, int l) const override { return m >= 1 && l >= 1; }

 private:
  std::vector<Piece> pieces_;
};

/// iid_cell_probability: product over coordinates of the interval masses.
double iid_cell_probability(const IidUniformOracle& rho, const CellId& cell);

/// Truncated d(rho1, rho2) over the same depths, by enumerating all cells of [0, 1]^m.
double process_distance(const IidUniformOracle& rho1, const IidUniformOracle& rho2, int m_max, int l_max);

}  // namespace cpd::oracle
