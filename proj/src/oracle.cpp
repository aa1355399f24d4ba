#include "cpd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

#include "cpd/errors.hpp"

namespace cpd::oracle {

namespace {

using Cell = std::vector<long long>;

long long cell_coordinate(double v, int l) { return static_cast<long long>(std::floor(v * std::exp2(l))); }

std::map<Cell, long long> tally(std::span<const double> x, int m, int l) {
  std::map<Cell, long long> cells;
  if (x.size() < static_cast<std::size_t>(m)) return cells;
  for (std::size_t i = 0; i + static_cast<std::size_t>(m) <= x.size(); ++i) {
    Cell c;
    for (int k = 0; k < m; ++k) c.push_back(cell_coordinate(x[i + static_cast<std::size_t>(k)], l));
    ++cells[c];
  }
  return cells;
}

}  // namespace

double brute_force_distance(std::span<const double> x1, std::span<const double> x2, int m_max, int l_max) {
  double total = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    const long long n1 = x1.size() >= static_cast<std::size_t>(m) ? static_cast<long long>(x1.size()) - m + 1 : 0;
    const long long n2 = x2.size() >= static_cast<std::size_t>(m) ? static_cast<long long>(x2.size()) - m + 1 : 0;
    for (int l = 1; l <= l_max; ++l) {
      double stratum = 0.0;
      if (n1 > 0 && n2 > 0) {
        const auto t1 = tally(x1, m, l);
        const auto t2 = tally(x2, m, l);
        // |c1/n1 - c2/n2| summed over the union, scaled by n1*n2 to stay in integers.
        long long s = 0;
        for (const auto& [cell, c1] : t1) {
          auto it = t2.find(cell);
          const long long c2 = it == t2.end() ? 0 : it->second;
          s += std::llabs(c1 * n2 - c2 * n1);
        }
        for (const auto& [cell, c2] : t2) {
          if (!t1.contains(cell)) s += c2 * n1;
        }
        stratum = static_cast<double>(s) / static_cast<double>(n1 * n2);
      } else if (n1 > 0 || n2 > 0) {
        stratum = 1.0;
      }
      total += (1.0 / (m * (m + 1.0))) * (1.0 / (l * (l + 1.0))) * stratum;
    }
  }
  return total;
}

std::optional<std::size_t> brute_force_phi(std::span<const double> x, std::size_t a, std::size_t b, double alpha,
                                           const DistanceParams& p) {
  const std::size_t n = x.size();
  if (a < 1 || b < a || b > n) throw InvalidInput("brute_force_phi: window outside the series");
  const auto reach = static_cast<std::size_t>(std::floor(static_cast<double>(n) * alpha));
  const std::size_t first = a > reach ? a - reach : 1;
  const std::size_t last = std::min(n, b + reach);
  const std::size_t need = static_cast<std::size_t>(std::max(2, p.m_max));
  std::optional<std::size_t> best_t;
  double best = 0.0;
  for (std::size_t t = a; t <= b; ++t) {
    const std::size_t left = t - first + 1;
    const std::size_t right = last >= t ? last - t + 1 : 0;
    if (t < first || left < need || right < need) continue;
    const double d = brute_force_distance(x.subspan(first - 1, left), x.subspan(t - 1, right), p.m_max, p.l_max);
    if (!best_t || d > best) {
      best = d;
      best_t = t;
    }
  }
  return best_t;
}

IidUniformOracle::IidUniformOracle(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  double mass = 0.0;
  for (const auto& piece : pieces_) {
    if (!(piece.low >= 0.0 && piece.high <= 1.0 && piece.low < piece.high && piece.mass >= 0.0)) {
      throw InvalidInput("piecewise-uniform oracle: bad piece");
    }
    mass += piece.mass;
  }
  if (std::abs(mass - 1.0) > 1e-12) throw InvalidInput("piecewise-uniform oracle: masses must sum to 1");
}

IidUniformOracle IidUniformOracle::uniform(double low, double high) { return IidUniformOracle({{low, high, 1.0}}); }

double IidUniformOracle::interval_mass(double low, double high) const {
  double mass = 0.0;
  for (const auto& piece : pieces_) {
    const double overlap = std::min(high, piece.high) - std::max(low, piece.low);
    if (overlap > 0.0) mass += piece.mass * overlap / (piece.high - piece.low);
  }
  return mass;
}

double IidUniformOracle::cell_probability(const CellId& cell) const { return iid_cell_probability(*this, cell); }

double iid_cell_probability(const IidUniformOracle& rho, const CellId& cell) {
  const double side = std::exp2(-cell.l);
  double prob = 1.0;
  for (auto c : cell.coords) {
    const double low = static_cast<double>(c) * side;
    prob *= rho.interval_mass(low, low + side);
  }
  return prob;
}

double process_distance(const IidUniformOracle& rho1, const IidUniformOracle& rho2, int m_max, int l_max) {
  double total = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    for (int l = 1; l <= l_max; ++l) {
      const long long side = 1LL << l;
      CellId cell{m, l, std::vector<std::int64_t>(static_cast<std::size_t>(m), 0)};
      double stratum = 0.0;
      // Odometer over {0..2^l-1}^m.
      while (true) {
        stratum += std::abs(rho1.cell_probability(cell) - rho2.cell_probability(cell));
        std::size_t k = 0;
        while (k < cell.coords.size() && ++cell.coords[k] == side) cell.coords[k++] = 0;
        if (k == cell.coords.size()) break;
      }
      total += (1.0 / (m * (m + 1.0))) * (1.0 / (l * (l + 1.0))) * stratum;
    }
  }
  return total;
}

}  // namespace cpd::oracle
