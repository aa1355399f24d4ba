#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cpd/changepoint.hpp"
#include "cpd/datagen.hpp"
#include "cpd/errors.hpp"
#include "cpd/frequency.hpp"
#include "support.hpp"

using testing_support::uniform_series;

namespace {

// Alternating blocks drawn from U[0, 0.5) and U[0.5, 1).
std::vector<double> block_series(std::mt19937_64& gen, const std::vector<std::size_t>& ends) {
  std::vector<double> x;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    const double lo = k % 2 ? 0.5 : 0.0;
    const auto part = uniform_series(gen, ends[k] - begin, lo, lo + 0.5);
    x.insert(x.end(), part.begin(), part.end());
    begin = ends[k];
  }
  return x;
}

}  // namespace

TEST_CASE("grid boundaries examples") {
  const auto g1 = cpd::grid_boundaries(600, 1, 1);
  REQUIRE(g1.has_value());
  CHECK(g1->alpha == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(g1->weight == 0.5);
  CHECK(g1->spacing == 100);
  CHECK(g1->boundaries == std::vector<std::size_t>{50, 150, 250, 350, 450, 550});

  const auto g2 = cpd::grid_boundaries(600, 1, 2);
  REQUIRE(g2.has_value());
  CHECK(g2->boundaries == std::vector<std::size_t>{33, 133, 233, 333, 433, 533});

  CHECK_FALSE(cpd::grid_boundaries(10, 5, 1).has_value());
  CHECK_THROWS_AS(cpd::grid_boundaries(10, 0, 1), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::grid_boundaries(10, 1, 0), cpd::InvalidInput);
}

TEST_CASE("grid boundaries are increasing, evenly spaced and inside the series") {
  for (std::size_t n : {6, 7, 100, 997, 2000, 10007}) {
    for (int j = 1; j <= 12; ++j) {
      for (int t = 1; t <= 5; ++t) {
        const auto g = cpd::grid_boundaries(n, j, t);
        const std::size_t cells = std::size_t{3} << j;
        if (n < cells) {
          CHECK_FALSE(g.has_value());
          continue;
        }
        REQUIRE(g.has_value());
        CHECK(g->boundaries.size() == cells);
        const double step = static_cast<double>(n) / static_cast<double>(cells);
        for (std::size_t i = 0; i < g->boundaries.size(); ++i) {
          CHECK(g->boundaries[i] <= n);
          const double exact = step * (static_cast<double>(i) + 1.0 / (t + 1.0));
          CHECK(std::abs(static_cast<double>(g->boundaries[i]) - exact) < 1.0 + 1e-9);
          if (i > 0) {
            const auto gap = g->boundaries[i] - g->boundaries[i - 1];
            CHECK(gap >= g->spacing);
            CHECK(gap <= g->spacing + 1);
          }
        }
      }
    }
  }
}

TEST_CASE("resolve_depths") {
  const std::vector<double> v{0.0, 0.25, 1.0};
  const auto auto_depths = cpd::resolve_depths(v, 1024, {});
  CHECK(auto_depths == cpd::DistanceParams(10, 2));
  const std::vector<double> same(5, 0.3);
  CHECK(cpd::resolve_depths(same, 5, {}).l_max == 20);
  cpd::DepthPolicy capped;
  capped.l_cap = 4;
  CHECK(cpd::resolve_depths(same, 5, capped).l_max == 4);
  CHECK(cpd::resolve_depths(std::vector<double>{0.0, 1e-9}, 5, capped).l_max == 4);
  cpd::DepthPolicy fixed;
  fixed.m_max = 3;
  fixed.l_max = 2;
  CHECK(cpd::resolve_depths(v, 1024, fixed) == cpd::DistanceParams(3, 2));
  CHECK(cpd::resolve_depths(v, 1, {}).m_max == 1);
}

TEST_CASE("segment scores single out the segment holding a jump") {
  std::mt19937_64 gen(31);
  const auto x = block_series(gen, {400, 1200});
  const auto g = cpd::grid_boundaries(1200, 1, 1);
  REQUIRE(g.has_value());
  const auto scores = cpd::segment_scores(x, *g, {});
  REQUIRE(scores.size() == 5);
  // Segment (300, 500) is split at 400.
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != 1) CHECK(scores[1] > scores[i]);
  }
  const std::vector<double> constant(1200, 0.7);
  for (double s : cpd::segment_scores(constant, *g, {})) CHECK(s == 0.0);
}

TEST_CASE("grid gamma degenerate cases") {
  const std::vector<double> constant(600, 0.2);
  const auto g = cpd::grid_boundaries(600, 1, 1);
  REQUIRE(g.has_value());
  CHECK(cpd::grid_gamma(constant, *g, 1, {}) == 0.0);

  std::mt19937_64 gen(32);
  const auto x = uniform_series(gen, 600);
  // Six boundaries leave one 3-segment window per offset at most.
  CHECK(cpd::grid_gamma(x, *g, 1, {}) > 0.0);
  CHECK(cpd::grid_gamma(x, *g, 2, {}) == 0.0);
  CHECK_THROWS_AS(cpd::grid_gamma(x, *g, 0, {}), cpd::InvalidInput);
}

TEST_CASE("grid gamma stays away from zero with one clear change") {
  const auto procs = cpd::reference_processes();
  const auto truth = cpd::make_truth({0.5});
  const auto seq = cpd::compose_sequence(10000, truth, {procs[0], procs[3]}, 41);
  const auto x = seq.series.samples();
  const auto plug_in = cpd::empirical_distance(
      x.subspan(0, 5000), x.subspan(5000), cpd::resolve_depths(x, 5000, {}));
  for (int j = 3; j <= 5; ++j) {
    const auto g = cpd::grid_boundaries(x.size(), j, 1);
    REQUIRE(g.has_value());
    CHECK(cpd::grid_gamma(x, *g, 1, {}) > 0.5 * plug_in);
  }
}

TEST_CASE("estimate on a constant series has no signal") {
  const std::vector<double> constant(500, 0.5);
  CHECK_THROWS_AS(cpd::estimate_changepoints(constant, 1), cpd::NoSignal);
  CHECK_THROWS_AS(cpd::estimate_changepoints(constant, 3), cpd::NoSignal);
  CHECK_THROWS_AS(cpd::estimate_changepoints(std::vector<double>{0.1, 0.9}, 1), cpd::NoSignal);
  CHECK_THROWS_AS(cpd::estimate_changepoints(constant, 0), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::estimate_changepoints(std::vector<double>{}, 1), cpd::InvalidInput);
}

TEST_CASE("estimate report invariants") {
  std::mt19937_64 gen(33);
  const auto x = block_series(gen, {1000, 2000, 3000});
  const auto report = cpd::estimate_changepoints(x, 2);
  CHECK(report.kappa == 2);
  CHECK(report.n == 3000);
  REQUIRE(report.theta_hat.size() == 2);

  double eta = 0.0;
  std::vector<double> lo(2, 1.0), hi(2, 0.0);
  int expected_grids = 0;
  for (int j = 1; (std::size_t{1} << j) <= 3000; ++j) expected_grids += 3;
  CHECK(static_cast<int>(report.grids.size()) == expected_grids);
  for (const auto& rec : report.grids) {
    CHECK(rec.weight == std::ldexp(1.0, -rec.j));
    CHECK(rec.gamma >= 0.0);
    eta += rec.weight * rec.gamma;
    if (rec.gamma == 0.0) {
      CHECK(rec.candidates.empty());
      continue;
    }
    REQUIRE(rec.candidates.size() == 2);
    CHECK(std::is_sorted(rec.candidates.begin(), rec.candidates.end()));
    for (std::size_t k = 0; k < 2; ++k) {
      lo[k] = std::min(lo[k], rec.candidates[k] / 3000.0);
      hi[k] = std::max(hi[k], rec.candidates[k] / 3000.0);
    }
  }
  CHECK(report.eta == doctest::Approx(eta).epsilon(1e-14));
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(report.theta_hat[k] >= lo[k] - 1e-12);
    CHECK(report.theta_hat[k] <= hi[k] + 1e-12);
  }
  CHECK(cpd::error_rate(report, cpd::make_truth({1.0 / 3.0, 2.0 / 3.0})) < 0.03);
}

TEST_CASE("estimate is deterministic") {
  std::mt19937_64 gen(34);
  const auto x = block_series(gen, {700, 1500});
  const auto a = cpd::estimate_changepoints(x, 1);
  const auto b = cpd::estimate_changepoints(x, 1);
  CHECK(a.theta_hat == b.theta_hat);
  CHECK(a.eta == b.eta);
  REQUIRE(a.grids.size() == b.grids.size());
  for (std::size_t i = 0; i < a.grids.size(); ++i) {
    CHECK(a.grids[i].gamma == b.grids[i].gamma);
    CHECK(a.grids[i].candidates == b.grids[i].candidates);
  }
  CHECK(std::abs(a.theta_hat[0] - 700.0 / 1500.0) < 0.02);
}

TEST_CASE("fixed depths are honoured") {
  std::mt19937_64 gen(35);
  const auto x = block_series(gen, {600, 1400});
  cpd::DepthPolicy p;
  p.m_max = 2;
  p.l_max = 1;
  const auto report = cpd::estimate_changepoints(x, 1, p);
  CHECK(report.depths.m_max == 2);
  CHECK(std::abs(report.theta_hat[0] - 600.0 / 1400.0) < 0.02);
}

TEST_CASE("error rate") {
  const auto truth = cpd::make_truth({0.25, 0.7});
  CHECK(truth.lambda_min == doctest::Approx(0.25));
  CHECK(cpd::error_rate(std::vector<double>{0.25, 0.7}, truth) == 0.0);
  CHECK(cpd::error_rate(std::vector<double>{0.3, 0.6}, truth) == doctest::Approx(0.15).epsilon(1e-14));
  CHECK_THROWS_AS(cpd::error_rate(std::vector<double>{0.3}, truth), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::make_truth({0.5, 0.4}), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::make_truth({0.0}), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::make_truth({}), cpd::InvalidInput);
}
