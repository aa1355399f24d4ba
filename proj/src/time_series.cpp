#include "cpd/time_series.hpp"

#include <cmath>
#include <string>

#include "cpd/errors.hpp"

namespace cpd {

TimeSeries::TimeSeries(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw InvalidInput("time series must hold at least one sample");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InvalidInput("time series sample " + std::to_string(i + 1) + " is not finite");
    }
  }
}

std::span<const double> TimeSeries::window(std::size_t a, std::size_t b) const {
  if (a < 1 || b < a || b > samples_.size()) {
    throw InvalidInput("window " + std::to_string(a) + ".." + std::to_string(b) + " outside 1.." +
                       std::to_string(samples_.size()));
  }
  return std::span<const double>(samples_).subspan(a - 1, b - a + 1);
}

}  // namespace cpd
