#pragma once

// Multi-resolution quantization and exact m-gram frequency counting.
//
// A cell of stratum (m, l) is the origin-anchored cube
//   [c_1 2^-l, (c_1+1) 2^-l) x ... x [c_m 2^-l, (c_m+1) 2^-l)
// identified by its integer coordinates. Cells are never materialized; a
// table only holds the occupied ones.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace cpd {

struct CellId {
  int m = 1;
  int l = 1;
  std::vector<std::int64_t> coords;

  friend bool operator==(const CellId&, const CellId&) = default;
};

/// floor(x * 2^l). Throws InvalidInput for non-finite x, l < 1, or a
/// coordinate that does not fit in 63 bits.
std::int64_t quantize_value(double x, int level);

/// quantize_value applied to every sample.
std::vector<std::int64_t> quantize(std::span<const double> x, int level);

/// Sparse count table of one (m, l) stratum.
class FrequencyTable {
 public:
  using Counts = absl::flat_hash_map<std::vector<std::int64_t>, std::int64_t>;

  FrequencyTable(int m, int l, std::int64_t window_count, Counts counts);

  int gram_length() const noexcept { return m_; }
  int resolution() const noexcept { return l_; }

  /// max(0, n - m + 1).
  std::int64_t window_count() const noexcept { return window_count_; }

  /// Number of windows falling in `cell`; 0 for unoccupied cells and for
  /// cells of another stratum.
  std::int64_t count(const CellId& cell) const;

  /// nu(x, cell): count / window_count, or 0 when there are no windows.
  double frequency(const CellId& cell) const;

  std::size_t occupied() const noexcept { return counts_.size(); }
  const Counts& counts() const noexcept { return counts_; }

 private:
  int m_;
  int l_;
  std::int64_t window_count_;
  Counts counts_;
};

FrequencyTable build_frequency_table(std::span<const double> x, int m, int l);

/// Frequency with which the m-windows of x fall in `cell`.
double nu(std::span<const double> x, const CellId& cell);

/// Smallest nonzero gap between any two values drawn from x1 and x2.
/// Returns nullopt when all values coincide.
std::optional<double> min_separation(std::span<const double> x1, std::span<const double> x2);

struct Depths {
  int m_max = 1;
  int l_max = 1;

  friend bool operator==(const Depths&, const Depths&) = default;
};

/// m_max = max(1, floor(log2 n)), l_max = clamp(ceil(log2(1/s_min)), 1, cap).
Depths default_depths(std::size_t n, double s_min, int cap);

/// Dense, collision-free identifiers for the m-grams of one or more symbol
/// sequences at a fixed resolution.
///
/// The id of the m-gram starting at i is derived from the id of the
/// (m-1)-gram at i and the symbol at i+m-1, so equal ids mean equal
/// coordinate tuples. Ids are shared across all sequences of the index.
class GramIndex {
 public:
  explicit GramIndex(std::span<const std::span<const std::int64_t>> sequences);
  explicit GramIndex(std::span<const std::int64_t> sequence);

  /// Current gram length m (starts at 1).
  int order() const noexcept { return order_; }

  /// Advance from m-grams to (m+1)-grams.
  void extend();

  /// ids(s)[i] identifies the m-gram of sequence s starting at i; size is
  /// max(0, len - m + 1).
  std::span<const std::uint32_t> ids(std::size_t sequence) const { return ids_.at(sequence); }

  /// Number of distinct m-grams over all sequences.
  std::size_t distinct() const noexcept { return distinct_; }

  /// Total number of m-windows over all sequences.
  std::size_t windows() const noexcept;

  /// True when no two windows share a cell. Stays true for larger m and l.
  bool saturated() const noexcept { return distinct_ == windows(); }

 private:
  int order_ = 1;
  std::size_t distinct_ = 0;
  std::vector<std::vector<std::uint32_t>> symbol_ids_;
  std::vector<std::vector<std::uint32_t>> ids_;
};

}  // namespace cpd
