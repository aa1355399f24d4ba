#include "cpd/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "cpd/errors.hpp"

namespace cpd {

namespace {

std::int64_t window_count(std::size_t n, int m) {
  const auto len = static_cast<std::int64_t>(n);
  return std::max<std::int64_t>(0, len - m + 1);
}

// sum_B |c1 N2 - c2 N1| / (N1 N2), rounded once.
double exact_ratio(std::int64_t numerator, std::int64_t n1, std::int64_t n2) {
  return static_cast<double>(numerator) / static_cast<double>(n1 * n2);
}

// Counts of one stratum on both sides of a moving split point. Only cells
// occupied on both sides are tracked individually: a cell seen on one side
// only contributes its whole count, which the side totals already carry.
class SplitStratum {
 public:
  SplitStratum(int m, int l, std::span<const std::uint32_t> ids, std::size_t distinct)
      : m_(m),
        l_(l),
        ids_(ids.begin(), ids.end()),
        left_(distinct, 0),
        right_(distinct, 0),
        slot_(distinct, -1) {}

  int m() const { return m_; }
  int l() const { return l_; }

  // Split at window-relative position tau: left windows start in
  // 0..tau-m+1, right windows in tau..W-m.
  void reset(std::int64_t tau) {
    tau_ = tau;
    const std::int64_t last_start = static_cast<std::int64_t>(ids_.size()) - 1;
    for (std::int64_t s = 0; s <= tau - m_ + 1 && s <= last_start; ++s) add_left(ids_[static_cast<std::size_t>(s)]);
    for (std::int64_t s = tau; s <= last_start; ++s) add_right(ids_[static_cast<std::size_t>(s)]);
  }

  void advance() {
    const std::int64_t last_start = static_cast<std::int64_t>(ids_.size()) - 1;
    const std::int64_t entering = tau_ + 2 - m_;
    if (entering >= 0 && entering <= last_start) add_left(ids_[static_cast<std::size_t>(entering)]);
    if (tau_ <= last_start) remove_right(ids_[static_cast<std::size_t>(tau_)]);
    ++tau_;
  }

  double value(std::int64_t window_length) const {
    const std::int64_t nl = std::max<std::int64_t>(0, tau_ - m_ + 2);
    const std::int64_t nr = std::max<std::int64_t>(0, window_length - m_ - tau_ + 1);
    if (nl == 0 && nr == 0) return 0.0;
    if (nl == 0 || nr == 0) return 1.0;
    std::int64_t s = nr * (nl - shared_left_) + nl * (nr - shared_right_);
    for (std::uint32_t id : shared_) s += std::llabs(left_[id] * nr - right_[id] * nl);
    return exact_ratio(s, nl, nr);
  }

 private:
  void attach(std::uint32_t id) {
    slot_[id] = static_cast<std::int32_t>(shared_.size());
    shared_.push_back(id);
    shared_left_ += left_[id];
    shared_right_ += right_[id];
  }

  void detach(std::uint32_t id) {
    shared_left_ -= left_[id];
    shared_right_ -= right_[id];
    const std::int32_t pos = slot_[id];
    const std::uint32_t moved = shared_.back();
    shared_[static_cast<std::size_t>(pos)] = moved;
    slot_[moved] = pos;
    shared_.pop_back();
    slot_[id] = -1;
  }

  void add_left(std::uint32_t id) {
    ++left_[id];
    if (slot_[id] >= 0) {
      ++shared_left_;
    } else if (right_[id] > 0) {
      attach(id);
    }
  }

  void add_right(std::uint32_t id) {
    ++right_[id];
    if (slot_[id] >= 0) {
      ++shared_right_;
    } else if (left_[id] > 0) {
      attach(id);
    }
  }

  void remove_right(std::uint32_t id) {
    if (slot_[id] >= 0 && right_[id] == 1) {
      detach(id);
      --right_[id];
      return;
    }
    --right_[id];
    if (slot_[id] >= 0) --shared_right_;
  }

  int m_;
  int l_;
  std::int64_t tau_ = 0;
  std::vector<std::uint32_t> ids_;
  std::vector<std::int64_t> left_;
  std::vector<std::int64_t> right_;
  std::vector<std::int32_t> slot_;
  std::vector<std::uint32_t> shared_;
  std::int64_t shared_left_ = 0;
  std::int64_t shared_right_ = 0;
};

}  // namespace

DistanceParams::DistanceParams(int m, int l) : m_max(m), l_max(l) {
  if (m_max < 1 || l_max < 1) {
    throw InvalidInput("distance depths must be >= 1 (got m_max=" + std::to_string(m_max) +
                       ", l_max=" + std::to_string(l_max) + ")");
  }
}

double combine_strata(const StratumMatrix& values) {
  double total = 0.0;
  for (std::size_t m = 0; m < values.size(); ++m) {
    for (std::size_t l = 0; l < values[m].size(); ++l) {
      total += weight(static_cast<int>(m) + 1) * weight(static_cast<int>(l) + 1) * values[m][l];
    }
  }
  return total;
}

double distance_bound(const DistanceParams& p) noexcept {
  // Partial sums of 1/(j(j+1)) telescope to k/(k+1).
  const double wm = static_cast<double>(p.m_max) / (p.m_max + 1.0);
  const double wl = static_cast<double>(p.l_max) / (p.l_max + 1.0);
  return 2.0 * wm * wl;
}

StratumMatrix stratum_distances(std::span<const double> x1, std::span<const double> x2,
                                const DistanceParams& p) {
  StratumMatrix v(static_cast<std::size_t>(p.m_max), std::vector<double>(static_cast<std::size_t>(p.l_max), 0.0));
  // Once every window owns its cell at (m, l), the same holds for all larger m and l.
  int saturated_from = p.m_max + 1;
  std::vector<std::int64_t> c1, c2;

  for (int l = 1; l <= p.l_max; ++l) {
    const auto q1 = quantize(x1, l);
    const auto q2 = quantize(x2, l);
    const std::span<const std::int64_t> seqs[] = {q1, q2};
    std::optional<GramIndex> index;

    for (int m = 1; m <= p.m_max; ++m) {
      const std::int64_t n1 = window_count(x1.size(), m);
      const std::int64_t n2 = window_count(x2.size(), m);
      double& out = v[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(l - 1)];
      if (n1 == 0 && n2 == 0) {
        out = 0.0;
        continue;
      }
      if (n1 == 0 || n2 == 0) {
        out = 1.0;
        continue;
      }
      if (m >= saturated_from) {
        out = 2.0;
        continue;
      }
      if (!index) {
        index.emplace(std::span<const std::span<const std::int64_t>>(seqs));
      } else {
        index->extend();
      }
      if (index->saturated()) {
        saturated_from = m;
        out = 2.0;
        continue;
      }
      c1.assign(index->distinct(), 0);
      c2.assign(index->distinct(), 0);
      for (std::uint32_t id : index->ids(0)) ++c1[id];
      for (std::uint32_t id : index->ids(1)) ++c2[id];
      std::int64_t s = 0;
      for (std::size_t id = 0; id < c1.size(); ++id) s += std::llabs(c1[id] * n2 - c2[id] * n1);
      out = exact_ratio(s, n1, n2);
    }
  }
  return v;
}

double empirical_distance(std::span<const double> x1, std::span<const double> x2,
                          const DistanceParams& p) {
  if (x1.empty() || x2.empty()) throw InvalidInput("empirical_distance: sequences must be nonempty");
  return combine_strata(stratum_distances(x1, x2, p));
}

double distance_to_process(std::span<const double> x, const ProcessOracle& rho, const DistanceParams& p) {
  StratumMatrix v(static_cast<std::size_t>(p.m_max), std::vector<double>(static_cast<std::size_t>(p.l_max), 0.0));
  for (int m = 1; m <= p.m_max; ++m) {
    for (int l = 1; l <= p.l_max; ++l) {
      if (!rho.supports(m, l)) {
        throw UnsupportedProcess("process oracle does not cover stratum m=" + std::to_string(m) +
                                 ", l=" + std::to_string(l));
      }
      const FrequencyTable table = build_frequency_table(x, m, l);
      const double total = rho.stratum_total(m, l);
      double visited_mass = 0.0;
      double sum = 0.0;
      const double windows = static_cast<double>(table.window_count());
      CellId cell{m, l, {}};
      for (const auto& [coords, count] : table.counts()) {
        cell.coords = coords;
        const double prob = rho.cell_probability(cell);
        visited_mass += prob;
        sum += std::abs(static_cast<double>(count) / windows - prob);
      }
      v[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(l - 1)] = sum + (total - visited_mass);
    }
  }
  return combine_strata(v);
}

std::optional<double> score_delta(std::span<const double> x, std::size_t a, std::size_t b,
                                  const DistanceParams& p) {
  if (a < 1 || b > x.size()) {
    throw InvalidInput("score_delta: window " + std::to_string(a) + ".." + std::to_string(b) +
                       " outside 1.." + std::to_string(x.size()));
  }
  if (b <= a) return std::nullopt;
  const std::size_t left_end = (a + b) / 2;
  const std::size_t right_start = (a + b + 1) / 2;
  return empirical_distance(x.subspan(a - 1, left_end - a + 1), x.subspan(right_start - 1, b - right_start + 1), p);
}

std::optional<std::size_t> estimate_single_extended(std::span<const double> x, std::size_t a,
                                                    std::size_t b, std::size_t extension,
                                                    const DistanceParams& p) {
  const std::size_t n = x.size();
  if (a < 1 || b < a || b > n) {
    throw InvalidInput("estimate_single: window " + std::to_string(a) + ".." + std::to_string(b) +
                       " outside 1.." + std::to_string(n));
  }
  const std::size_t first = a > extension ? a - extension : 1;
  const std::size_t last = std::min(n, b + extension);
  const std::size_t min_len = min_operand_length(p);
  // Both X_{first..t} and X_{t..last} need min_len samples.
  const std::size_t lo = std::max(a, first + min_len - 1);
  if (last + 1 < min_len) return std::nullopt;
  const std::size_t hi = std::min(b, last + 1 - min_len);
  if (lo > hi) return std::nullopt;

  const auto window = x.subspan(first - 1, last - first + 1);
  const auto width = static_cast<std::int64_t>(window.size());

  StratumMatrix v(static_cast<std::size_t>(p.m_max), std::vector<double>(static_cast<std::size_t>(p.l_max), 2.0));
  std::vector<SplitStratum> strata;
  int saturated_from = p.m_max + 1;
  for (int l = 1; l <= p.l_max; ++l) {
    const auto symbols = quantize(window, l);
    GramIndex index{std::span<const std::int64_t>(symbols)};
    for (int m = 1; m <= p.m_max && m < saturated_from; ++m) {
      if (m > 1) index.extend();
      // Saturated strata with m >= 2 share no cell across the split and
      // always score exactly 2; m = 1 still shares the split sample.
      if (m > 1 && index.saturated()) {
        saturated_from = m;
        break;
      }
      strata.emplace_back(m, l, index.ids(0), index.distinct());
    }
  }

  std::optional<std::size_t> best_t;
  double best = -1.0;
  for (std::size_t t = lo; t <= hi; ++t) {
    const auto tau = static_cast<std::int64_t>(t - first);
    for (auto& s : strata) {
      if (t == lo) {
        s.reset(tau);
      } else {
        s.advance();
      }
      v[static_cast<std::size_t>(s.m() - 1)][static_cast<std::size_t>(s.l() - 1)] = s.value(width);
    }
    const double d = combine_strata(v);
    if (d > best) {
      best = d;
      best_t = t;
    }
  }
  return best_t;
}

std::optional<std::size_t> estimate_single(std::span<const double> x, std::size_t a, std::size_t b,
                                           double alpha, const DistanceParams& p) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("estimate_single: alpha must lie in (0, 1)");
  const auto extension = static_cast<std::size_t>(std::floor(static_cast<double>(x.size()) * alpha));
  return estimate_single_extended(x, a, b, extension, p);
}

}  // namespace cpd
