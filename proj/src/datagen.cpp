#include "cpd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpd/errors.hpp"
#include "cpd/rng.hpp"

namespace cpd {

namespace {

bool valid(const Interval& u) { return std::isfinite(u.low) && std::isfinite(u.high) && u.low < u.high; }

}  // namespace

void validate(const RotationProcessSpec& spec) {
  if (!(spec.alpha > 0.0L && spec.alpha < 1.0L)) throw InvalidInput("rotation alpha must lie in (0, 1)");
  if (!valid(spec.u1) || !valid(spec.u2)) throw InvalidInput("uniform intervals need low < high");
}

std::vector<long double> rotation_phases(long double alpha, long double r0, std::size_t m) {
  std::vector<long double> r;
  r.reserve(m);
  long double phase = r0;
  for (std::size_t i = 0; i < m; ++i) {
    phase += alpha;
    if (phase >= 1.0L) phase -= 1.0L;
    r.push_back(phase);
  }
  return r;
}

TimeSeries rotation_sample(const RotationProcessSpec& spec, std::size_t m, std::optional<long double> r0) {
  validate(spec);
  if (m < 1) throw InvalidInput("rotation_sample: length must be >= 1");
  Rng rng(spec.seed);
  long double phase = r0 ? *r0 : static_cast<long double>(rng.uniform01());
  std::vector<double> y;
  y.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    phase += spec.alpha;
    if (phase >= 1.0L) phase -= 1.0L;
    const double first = rng.uniform(spec.u1.low, spec.u1.high);
    const double second = rng.uniform(spec.u2.low, spec.u2.high);
    y.push_back(phase <= 0.5L ? first : second);
  }
  return TimeSeries(std::move(y));
}

ChangePointTruth random_changepoints(std::size_t kappa, double lambda_min, std::uint64_t seed) {
  if (kappa < 1) throw InvalidInput("random_changepoints: kappa must be >= 1");
  if (!(lambda_min > 0.0) || !std::isfinite(lambda_min)) throw InvalidInput("random_changepoints: lambda_min must be positive");
  // fma rounds the exact (kappa+1) * lambda_min - 1 once, so its sign is exact.
  const double k1 = static_cast<double>(kappa + 1);
  const double excess = std::fma(k1, lambda_min, -1.0);
  if (excess > 0.0) {
    throw InvalidInput("infeasible change-point layout: " + std::to_string(kappa) + " change points cannot be " +
                       std::to_string(lambda_min) + " apart");
  }
  // Uniform on the feasible set: kappa sorted uniforms on [0, slack] shifted by k * lambda_min.
  const double slack = -excess;
  Rng rng(seed);
  std::vector<double> theta(kappa);
  for (int attempt = 0;; ++attempt) {
    for (auto& u : theta) u = slack * rng.uniform01();
    std::sort(theta.begin(), theta.end());
    for (std::size_t k = 0; k < kappa; ++k) theta[k] += static_cast<double>(k + 1) * lambda_min;
    // Rounding can shave an ulp off a gap; redraw a few times before accepting that.
    const double tolerance = attempt < 64 ? 0.0 : 1e-12;
    double prev = 0.0;
    bool ok = true;
    for (double th : theta) {
      ok = ok && th - prev >= lambda_min - tolerance && th > prev;
      prev = th;
    }
    ok = ok && 1.0 - prev >= lambda_min - tolerance && prev < 1.0;
    if (ok) break;
  }
  return make_truth(std::move(theta));
}

LabeledSequence compose_sequence(std::size_t n, const ChangePointTruth& truth,
                                 const std::vector<RotationProcessSpec>& specs, std::uint64_t seed) {
  const std::size_t kappa = truth.kappa();
  if (specs.size() != kappa + 1) {
    throw InvalidInput("compose_sequence: need " + std::to_string(kappa + 1) + " process specs, got " +
                       std::to_string(specs.size()));
  }
  for (std::size_t k = 1; k < specs.size(); ++k) {
    if (specs[k].alpha == specs[k - 1].alpha) {
      throw InvalidInput("compose_sequence: segments " + std::to_string(k) + " and " + std::to_string(k + 1) +
                         " use the same rotation alpha");
    }
  }

  std::vector<std::size_t> ends;
  for (double th : truth.theta) ends.push_back(static_cast<std::size_t>(std::floor(static_cast<double>(n) * th)));
  ends.push_back(n);

  std::vector<double> samples;
  samples.reserve(n);
  std::vector<std::size_t> process;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    if (ends[k] <= begin) {
      throw InvalidInput("compose_sequence: n=" + std::to_string(n) + " leaves segment " + std::to_string(k + 1) +
                         " empty");
    }
    RotationProcessSpec spec = specs[k];
    spec.seed = derive_seed(seed, k);
    const TimeSeries segment = rotation_sample(spec, ends[k] - begin);
    samples.insert(samples.end(), segment.begin(), segment.end());
    process.push_back(k);
    begin = ends[k];
  }
  return LabeledSequence{TimeSeries(std::move(samples)), truth, std::move(ends), std::move(process)};
}

std::vector<RotationProcessSpec> reference_processes() {
  const Interval u1{0.0, 0.7};
  const Interval u2{0.3, 1.0};
  // 0.12 + (sqrt 2 - 1)/100, 0.14 + (sqrt 3 - 1)/100, 0.16 + (sqrt 5 - 2)/100, 0.18 + (pi - 3)/100
  return {
      {0.1241421356237309504880L, u1, u2, 0},
      {0.1473205080756887729353L, u1, u2, 0},
      {0.1623606797749978969641L, u1, u2, 0},
      {0.1814159265358979323846L, u1, u2, 0},
  };
}

}  // namespace cpd
