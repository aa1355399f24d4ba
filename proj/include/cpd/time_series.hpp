#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cpd {

/// Nonempty sequence of finite real samples.
///
/// Operations that take windows use 1-based inclusive indices `a..b`, the
/// way change-point positions are reported; `window(a, b)` converts.
class TimeSeries {
 public:
  /// Throws InvalidInput when `samples` is empty or holds a NaN/infinity.
  explicit TimeSeries(std::vector<double> samples);

  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }

  std::span<const double> samples() const noexcept { return samples_; }
  operator std::span<const double>() const noexcept { return samples_; }

  /// View of X_{a..b}, 1-based and inclusive. Throws InvalidInput when out of range.
  std::span<const double> window(std::size_t a, std::size_t b) const;

  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

 private:
  std::vector<double> samples_;
};

}  // namespace cpd
