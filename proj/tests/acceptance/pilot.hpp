#pragma once

// Pre-registered pilot for the rotation-process protocol gate.
//
// Produced once with `cpd experiment --seed 7` (kappa 3, lambda_min 0.1,
// reference alphas, n = 2000, 5000, 10000, 50 runs). The gated run uses
// master seed 1, so the two runs share no sequence. The threshold is the
// pilot mean at n = 10000 plus two standard errors of that mean.

namespace pilot {

inline constexpr unsigned long long kSeed = 7;
inline constexpr double kMeanAt2000 = 0.32866238471193016;
inline constexpr double kMeanAt5000 = 0.36032816820253394;
inline constexpr double kMeanAt10000 = 0.32052831073950305;
inline constexpr double kStdErrAt10000 = 0.024262180929619213;
inline constexpr double kThresholdAt10000 = kMeanAt10000 + 2.0 * kStdErrAt10000;

}  // namespace pilot
