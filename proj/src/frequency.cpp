#include "cpd/frequency.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cpd/errors.hpp"

namespace cpd {

std::int64_t quantize_value(double x, int level) {
  if (!std::isfinite(x)) throw InvalidInput("quantize_value: non-finite sample");
  if (level < 1) throw InvalidInput("quantize_value: resolution level must be >= 1");
  // Scaling by a power of two is exact, so the floor is the exact cell.
  const double scaled = std::floor(std::ldexp(x, level));
  constexpr double kLimit = 9.2233720368547758e18;  // 2^63
  if (!(scaled >= -kLimit && scaled < kLimit)) {
    throw InvalidInput("quantize_value: coordinate overflow at level " + std::to_string(level));
  }
  return static_cast<std::int64_t>(scaled);
}

std::vector<std::int64_t> quantize(std::span<const double> x, int level) {
  std::vector<std::int64_t> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(quantize_value(v, level));
  return out;
}

FrequencyTable::FrequencyTable(int m, int l, std::int64_t window_count, Counts counts)
    : m_(m), l_(l), window_count_(window_count), counts_(std::move(counts)) {}

std::int64_t FrequencyTable::count(const CellId& cell) const {
  if (cell.m != m_ || cell.l != l_) return 0;
  auto it = counts_.find(cell.coords);
  return it == counts_.end() ? 0 : it->second;
}

double FrequencyTable::frequency(const CellId& cell) const {
  if (window_count_ == 0) return 0.0;
  return static_cast<double>(count(cell)) / static_cast<double>(window_count_);
}

FrequencyTable build_frequency_table(std::span<const double> x, int m, int l) {
  if (m < 1) throw InvalidInput("build_frequency_table: gram length must be >= 1");
  const auto symbols = quantize(x, l);
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  const std::int64_t windows = std::max<std::int64_t>(0, n - m + 1);
  FrequencyTable::Counts counts;
  if (windows == 0) return FrequencyTable(m, l, 0, std::move(counts));

  GramIndex index{std::span<const std::int64_t>(symbols)};
  while (index.order() < m) index.extend();

  // Count by dense id, then attach coordinates from the first occurrence.
  const auto ids = index.ids(0);
  std::vector<std::int64_t> per_id(index.distinct(), 0);
  std::vector<std::size_t> first(index.distinct(), 0);
  for (std::size_t i = ids.size(); i-- > 0;) {
    ++per_id[ids[i]];
    first[ids[i]] = i;
  }
  counts.reserve(index.distinct());
  for (std::size_t id = 0; id < per_id.size(); ++id) {
    const auto start = symbols.begin() + static_cast<std::ptrdiff_t>(first[id]);
    counts.emplace(std::vector<std::int64_t>(start, start + m), per_id[id]);
  }
  return FrequencyTable(m, l, windows, std::move(counts));
}

double nu(std::span<const double> x, const CellId& cell) {
  if (cell.m < 1 || static_cast<std::size_t>(cell.m) > x.size()) return 0.0;
  if (cell.coords.size() != static_cast<std::size_t>(cell.m)) {
    throw InvalidInput("nu: cell coordinate count differs from its gram length");
  }
  std::int64_t hits = 0;
  const std::size_t windows = x.size() - static_cast<std::size_t>(cell.m) + 1;
  for (std::size_t i = 0; i < windows; ++i) {
    bool inside = true;
    for (int k = 0; k < cell.m && inside; ++k) {
      inside = quantize_value(x[i + static_cast<std::size_t>(k)], cell.l) == cell.coords[static_cast<std::size_t>(k)];
    }
    hits += inside ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(windows);
}

std::optional<double> min_separation(std::span<const double> x1, std::span<const double> x2) {
  std::vector<double> values;
  values.reserve(x1.size() + x2.size());
  values.insert(values.end(), x1.begin(), x1.end());
  values.insert(values.end(), x2.begin(), x2.end());
  std::sort(values.begin(), values.end());
  std::optional<double> best;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double gap = values[i] - values[i - 1];
    if (gap > 0.0 && (!best || gap < *best)) best = gap;
  }
  return best;
}

Depths default_depths(std::size_t n, double s_min, int cap) {
  if (n < 1) throw InvalidInput("default_depths: length must be positive");
  if (!(s_min > 0.0)) throw InvalidInput("default_depths: s_min must be positive");
  if (cap < 1) throw InvalidInput("default_depths: resolution cap must be >= 1");
  Depths d;
  d.m_max = std::max(1, static_cast<int>(std::bit_width(n)) - 1);
  const double bits = std::ceil(std::log2(1.0 / s_min));
  d.l_max = static_cast<int>(std::clamp(bits, 1.0, static_cast<double>(cap)));
  return d;
}

GramIndex::GramIndex(std::span<const std::int64_t> sequence)
    : GramIndex(std::span<const std::span<const std::int64_t>>(&sequence, 1)) {}

GramIndex::GramIndex(std::span<const std::span<const std::int64_t>> sequences) {
  absl::flat_hash_map<std::int64_t, std::uint32_t> dictionary;
  symbol_ids_.reserve(sequences.size());
  for (const auto& seq : sequences) {
    std::vector<std::uint32_t> ids(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      auto [it, inserted] = dictionary.try_emplace(seq[i], static_cast<std::uint32_t>(dictionary.size()));
      ids[i] = it->second;
    }
    symbol_ids_.push_back(std::move(ids));
  }
  distinct_ = dictionary.size();
  ids_ = symbol_ids_;
}

std::size_t GramIndex::windows() const noexcept {
  std::size_t total = 0;
  for (const auto& ids : ids_) total += ids.size();
  return total;
}

void GramIndex::extend() {
  absl::flat_hash_map<std::uint64_t, std::uint32_t> dictionary;
  dictionary.reserve(windows());
  for (std::size_t s = 0; s < ids_.size(); ++s) {
    auto& ids = ids_[s];
    const auto& symbols = symbol_ids_[s];
    const std::size_t next = ids.empty() ? 0 : ids.size() - 1;
    for (std::size_t i = 0; i < next; ++i) {
      const std::uint64_t key = (static_cast<std::uint64_t>(ids[i]) << 32) |
                                symbols[i + static_cast<std::size_t>(order_)];
      auto [it, inserted] = dictionary.try_emplace(key, static_cast<std::uint32_t>(dictionary.size()));
      ids[i] = it->second;
    }
    ids.resize(next);
  }
  distinct_ = dictionary.size();
  ++order_;
}

}  // namespace cpd
