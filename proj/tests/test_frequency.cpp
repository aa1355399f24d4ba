#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "cpd/errors.hpp"
#include "cpd/frequency.hpp"
#include "cpd/time_series.hpp"

using cpd::CellId;

namespace {

std::vector<double> random_series(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(gen);
  return x;
}

}  // namespace

TEST_CASE("time series rejects empty and non-finite input") {
  CHECK_THROWS_AS(cpd::TimeSeries({}), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::TimeSeries({0.1, NAN}), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::TimeSeries({INFINITY}), cpd::InvalidInput);
  const cpd::TimeSeries x({1, 2, 3, 4});
  CHECK(x.window(2, 3).size() == 2);
  CHECK(x.window(2, 3)[0] == 2);
  CHECK_THROWS_AS(x.window(0, 2), cpd::InvalidInput);
  CHECK_THROWS_AS(x.window(3, 5), cpd::InvalidInput);
}

TEST_CASE("quantize_value uses origin-anchored floor cells") {
  CHECK(cpd::quantize_value(0.0, 1) == 0);
  CHECK(cpd::quantize_value(0.74, 2) == 2);
  CHECK(cpd::quantize_value(-0.1, 1) == -1);
  CHECK(cpd::quantize_value(0.5, 1) == 1);
  CHECK(cpd::quantize_value(-0.5, 1) == -1);
  CHECK(cpd::quantize_value(1.0, 3) == 8);
  CHECK_THROWS_AS(cpd::quantize_value(NAN, 1), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::quantize_value(0.1, 0), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::quantize_value(1e300, 40), cpd::InvalidInput);
}

TEST_CASE("frequency table of four samples") {
  const std::vector<double> x{0.1, 0.2, 0.6, 0.7};

  const auto t1 = cpd::build_frequency_table(x, 1, 1);
  CHECK(t1.window_count() == 4);
  CHECK(t1.occupied() == 2);
  CHECK(t1.count({1, 1, {0}}) == 2);
  CHECK(t1.count({1, 1, {1}}) == 2);

  const auto t2 = cpd::build_frequency_table(x, 2, 1);
  CHECK(t2.window_count() == 3);
  CHECK(t2.occupied() == 3);
  CHECK(t2.count({2, 1, {0, 0}}) == 1);
  CHECK(t2.count({2, 1, {0, 1}}) == 1);
  CHECK(t2.count({2, 1, {1, 1}}) == 1);
  CHECK(t2.count({2, 1, {1, 0}}) == 0);
  CHECK(t2.count({1, 1, {0}}) == 0);

  const auto t3 = cpd::build_frequency_table(std::vector<double>{0.3}, 2, 1);
  CHECK(t3.window_count() == 0);
  CHECK(t3.occupied() == 0);
  CHECK(t3.frequency({2, 1, {0, 0}}) == 0.0);
}

TEST_CASE("nu counts windows directly") {
  const std::vector<double> x{0.1, 0.2, 0.6, 0.7};
  CHECK(cpd::nu(x, {1, 1, {0}}) == 0.5);
  CHECK(cpd::nu(x, {2, 1, {0, 0}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cpd::nu(x, {5, 1, {0, 0, 0, 0, 0}}) == 0.0);
  CHECK_THROWS_AS(cpd::nu(x, {2, 1, {0}}), cpd::InvalidInput);
}

TEST_CASE("min_separation") {
  CHECK(cpd::min_separation(std::vector<double>{0.0, 0.5}, std::vector<double>{0.25}) == 0.25);
  CHECK_FALSE(cpd::min_separation(std::vector<double>{0.3, 0.3}, std::vector<double>{0.3}).has_value());
  CHECK(cpd::min_separation(std::vector<double>{0, 1}, std::vector<double>{0, 1}) == 1.0);
}

TEST_CASE("default_depths") {
  CHECK(cpd::default_depths(1024, 1.0 / 64, 20) == cpd::Depths{10, 6});
  CHECK(cpd::default_depths(2, 0.5, 20) == cpd::Depths{1, 1});
  CHECK(cpd::default_depths(1000000, 1e-12, 20) == cpd::Depths{19, 20});
  CHECK(cpd::default_depths(1, 4.0, 20) == cpd::Depths{1, 1});
  CHECK_THROWS_AS(cpd::default_depths(10, 0.0, 20), cpd::InvalidInput);
  CHECK_THROWS_AS(cpd::default_depths(0, 0.5, 20), cpd::InvalidInput);
}

TEST_CASE("table counts sum to the window count") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_series(gen, 1 + gen() % 60, -1.0, 2.0);
    for (int m = 1; m <= 5; ++m) {
      for (int l = 1; l <= 4; ++l) {
        const auto t = cpd::build_frequency_table(x, m, l);
        std::int64_t total = 0;
        for (const auto& [coords, c] : t.counts()) {
          CHECK(static_cast<int>(coords.size()) == m);
          CHECK(c > 0);
          total += c;
        }
        const std::int64_t expected = x.size() >= static_cast<std::size_t>(m) ? static_cast<std::int64_t>(x.size()) - m + 1 : 0;
        CHECK(total == expected);
        CHECK(t.window_count() == expected);
      }
    }
  }
}

TEST_CASE("table agrees with a naive recount") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_series(gen, 1 + gen() % 40, 0.0, 1.0);
    const int m = 1 + static_cast<int>(gen() % 4);
    const int l = 1 + static_cast<int>(gen() % 4);
    const auto t = cpd::build_frequency_table(x, m, l);
    std::map<std::vector<std::int64_t>, std::int64_t> naive;
    for (std::size_t i = 0; i + m <= x.size(); ++i) {
      std::vector<std::int64_t> key;
      for (int k = 0; k < m; ++k) key.push_back(static_cast<std::int64_t>(std::floor(x[i + k] * (1 << l))));
      ++naive[key];
    }
    CHECK(t.occupied() == naive.size());
    for (const auto& [key, c] : naive) {
      CHECK(t.count({m, l, key}) == c);
      CHECK(t.frequency({m, l, key}) == cpd::nu(x, {m, l, key}));
    }
  }
}

TEST_CASE("coarser cells aggregate finer cells") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = random_series(gen, 5 + gen() % 80, -1.0, 2.0);
    for (int m = 1; m <= 3; ++m) {
      for (int l = 1; l <= 3; ++l) {
        const auto fine = cpd::build_frequency_table(x, m, l + 1);
        const auto coarse = cpd::build_frequency_table(x, m, l);
        std::map<std::vector<std::int64_t>, std::int64_t> merged;
        for (const auto& [coords, c] : fine.counts()) {
          std::vector<std::int64_t> parent;
          for (auto v : coords) parent.push_back(v >> 1);
          merged[parent] += c;
        }
        CHECK(merged.size() == coarse.occupied());
        for (const auto& [coords, c] : merged) CHECK(coarse.count({m, l, coords}) == c);
      }
    }
  }
}

TEST_CASE("occupied cells never shrink with m or l") {
  std::mt19937_64 gen(14);
  const auto x = random_series(gen, 300, 0.0, 1.0);
  for (int m = 1; m < 5; ++m) {
    for (int l = 1; l < 5; ++l) {
      const auto base = cpd::build_frequency_table(x, m, l).occupied();
      CHECK(cpd::build_frequency_table(x, m, l + 1).occupied() >= base);
      // One window fewer per extra gram symbol.
      CHECK(cpd::build_frequency_table(x, m + 1, l).occupied() + 1 >= base);
    }
  }
}

TEST_CASE("gram index ids are shared and collision-free") {
  const std::vector<std::int64_t> a{0, 1, 0, 1, 2};
  const std::vector<std::int64_t> b{1, 0, 1, 3};
  const std::vector<std::span<const std::int64_t>> seqs{a, b};
  cpd::GramIndex index(seqs);
  CHECK(index.order() == 1);
  CHECK(index.distinct() == 4);
  CHECK(index.windows() == 9);
  index.extend();
  CHECK(index.order() == 2);
  CHECK(index.windows() == 7);
  // (0,1) (1,0) (0,1) (1,2) | (1,0) (0,1) (1,3)
  CHECK(index.distinct() == 4);
  CHECK(index.ids(0)[0] == index.ids(0)[2]);
  CHECK(index.ids(0)[0] == index.ids(1)[1]);
  CHECK(index.ids(0)[1] == index.ids(1)[0]);
  CHECK(index.ids(0)[3] != index.ids(1)[2]);
  CHECK_FALSE(index.saturated());
  index.extend();
  index.extend();
  // (0,1,0,1) (1,0,1,2) | (1,0,1,3)
  CHECK(index.saturated());
}
