#pragma once

// Synthetic stationary ergodic data: the irrational-rotation process that
// switches between two uniform laws, random change-point placement, and
// multi-segment composition with ground truth.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cpd/changepoint.hpp"
#include "cpd/time_series.hpp"

namespace cpd {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// r_i = r_{i-1} + alpha mod 1; Y_i ~ u1 when r_i <= 0.5, else u2.
///
/// alpha is held in long double; its mantissa bounds how faithfully an
/// irrational rotation is simulated.
struct RotationProcessSpec {
  long double alpha = 0.0L;
  Interval u1;
  Interval u2;
  std::uint64_t seed = 0;
};

/// Throws InvalidInput unless 0 < alpha < 1 and both intervals have low < high.
void validate(const RotationProcessSpec& spec);

/// Rotation phases r_1..r_m starting from r_0.
std::vector<long double> rotation_phases(long double alpha, long double r0, std::size_t m);

/// m samples of the rotation process. r_0 is the first uniform draw of the
/// stream unless `r0` is given; each step then draws y^(1) from u1 and
/// y^(2) from u2 and keeps the one selected by r_i.
TimeSeries rotation_sample(const RotationProcessSpec& spec, std::size_t m, std::optional<long double> r0 = std::nullopt);

/// Uniformly random kappa change points with every gap (including to 0 and
/// 1) at least lambda_min. Throws InvalidInput when (kappa + 1) lambda_min > 1
/// in exact arithmetic, or kappa < 1, or lambda_min <= 0.
ChangePointTruth random_changepoints(std::size_t kappa, double lambda_min, std::uint64_t seed);

struct LabeledSequence {
  TimeSeries series;
  ChangePointTruth truth;
  std::vector<std::size_t> segment_ends;  ///< 1-based last index of each segment; the k-th is floor(n theta_k)
  std::vector<std::size_t> segment_process;  ///< index into the spec list for each segment
};

/// Concatenates kappa+1 segments, segment k spanning floor(n theta_{k-1})+1 ..
/// floor(n theta_k). Segment k draws from child stream k of `seed`.
/// Throws InvalidInput on a spec count other than kappa+1, on consecutive
/// specs with equal alpha, or on an empty segment.
LabeledSequence compose_sequence(std::size_t n, const ChangePointTruth& truth,
                                 const std::vector<RotationProcessSpec>& specs, std::uint64_t seed);

/// Four rotation processes with alphas near 0.12, 0.14, 0.16 and 0.18, all
/// switching between uniforms on [0, 0.7] and [0.3, 1], so every segment
/// shares the same one-dimensional marginal.
std::vector<RotationProcessSpec> reference_processes();

}  // namespace cpd
