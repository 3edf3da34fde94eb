#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hscale/rng.hpp"
#include "hscale/stats.hpp"
#include "hscale/wiener.hpp"

using namespace hscale;

TEST(DeriveSeed, PureAndSeparatesCoordinates) {
  static_assert(derive_seed(1, StreamTag::path, {2}) == derive_seed(1, StreamTag::path, {2}));
  EXPECT_NE(derive_seed(1, StreamTag::path, {2}), derive_seed(1, StreamTag::path, {3}));
  EXPECT_NE(derive_seed(1, StreamTag::path, {2}), derive_seed(1, StreamTag::wiener, {2}));
  EXPECT_NE(derive_seed(1, StreamTag::path, {2, 3}), derive_seed(1, StreamTag::path, {3, 2}));
}

TEST(TimeGrid, StepCountAbsorbsRepresentationError) {
  EXPECT_EQ(TimeGrid(0.1, 0.01).steps(), 10u);
  EXPECT_EQ(TimeGrid(1.0, 0.1).steps(), 10u);
  EXPECT_EQ(TimeGrid(1.0, 0.3).steps(), 3u);
  EXPECT_THROW(TimeGrid(0.1, 0.2), DomainError);
  EXPECT_THROW(TimeGrid(0.0, 0.01), DomainError);
  const auto g = TimeGrid::from_steps(0.3, 7);
  EXPECT_EQ(g.steps(), 7u);
  EXPECT_NEAR(g.final_time(), 0.3, 1e-15);
}

TEST(Wiener, IncrementVarianceMatchesDt) {
  // 10 keys x 10^4 steps = 10^5 increments with variance dt.
  const TimeGrid g = TimeGrid::from_steps(1.0, 10000);
  std::vector<Key> ids;
  for (Key k = 0; k < 10; ++k) ids.push_back(k);
  const WienerPath w(g, make_keys(ids), 99);
  std::vector<double> sq;
  std::vector<double> z;
  for (std::size_t i = 0; i < w.num_keys(); ++i) {
    for (double d : w.stream(i)) {
      sq.push_back(d * d);
      z.push_back(d);
    }
  }
  const double dt = g.dt();
  EXPECT_NEAR(mean(sq), dt, 3.0 * standard_error(sq));
  EXPECT_NEAR(mean(z), 0.0, 3.0 * standard_error(z));
  // Var(dW^2) = 2 dt^2 gives a fixed-width check too.
  EXPECT_NEAR(mean(sq), dt, 3.0 * std::sqrt(2.0) * dt / std::sqrt(static_cast<double>(sq.size())));
}

TEST(Wiener, KeysAreUncorrelated) {
  const TimeGrid g = TimeGrid::from_steps(1.0, 100000);
  const WienerPath w(g, make_keys({3, 8}), 5);
  const auto a = w.stream(0);
  const auto b = w.stream(1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    sab += a[j] * b[j];
    saa += a[j] * a[j];
    sbb += b[j] * b[j];
  }
  EXPECT_LT(std::abs(sab / std::sqrt(saa * sbb)), 3.0 / std::sqrt(1e5));
}

TEST(Wiener, DeterministicAndReplayable) {
  const TimeGrid g(0.5, 0.01);
  const auto keys = make_keys({-2, 0, 7});
  const WienerPath w1(g, keys, 1234);
  const WienerPath w2(g, keys, 1234);
  const WienerPath w3(g, keys, 1235);
  bool any_diff = false;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < g.steps(); ++j) {
      EXPECT_EQ(w1.increment(i, j), w2.increment(i, j));
      any_diff |= w1.increment(i, j) != w3.increment(i, j);
    }
  }
  EXPECT_TRUE(any_diff);
  EXPECT_EQ(WienerPath::replay(1234, 7, 17, g.dt()), w1.increment(2, 17));
  EXPECT_EQ(WienerPath::replay(1234, -2, 0, g.dt()), w1.increment(0, 0));
}

TEST(Wiener, StreamDependsOnlyOnSeedAndKey) {
  const TimeGrid g(0.2, 0.01);
  const WienerPath small(g, make_keys({4}), 8);
  const WienerPath big(g, make_keys({1, 2, 3, 4, 5}), 8);
  for (std::size_t j = 0; j < g.steps(); ++j) EXPECT_EQ(small.increment(0, j), big.increment(3, j));
}

TEST(Wiener, CumulativeSumsIncrements) {
  const TimeGrid g(0.1, 0.01);
  const WienerPath w = sample_scalar_wiener(g, 2);
  ASSERT_TRUE(w.is_scalar());
  const auto W = w.cumulative(0);
  ASSERT_EQ(W.size(), g.size());
  EXPECT_EQ(W[0], 0.0);
  double s = 0.0;
  for (std::size_t j = 0; j < g.steps(); ++j) {
    s += w.increment(0, j);
    EXPECT_DOUBLE_EQ(W[j + 1], s);
  }
}

TEST(Wiener, PathSeedsDistinct) {
  EXPECT_NE(path_seed(1, 0), path_seed(1, 1));
  EXPECT_NE(path_seed(1, 0), path_seed(2, 0));
}

TEST(Stats, LogLogSlope) {
  const std::vector<double> x{1, 2, 4, 8};
  const std::vector<double> y{3, 3 * std::sqrt(2.0), 6, 6 * std::sqrt(2.0)};
  EXPECT_NEAR(loglog_slope(x, y), 0.5, 1e-14);
  EXPECT_THROW(loglog_slope(std::vector<double>{1}, std::vector<double>{1}), DomainError);
}
