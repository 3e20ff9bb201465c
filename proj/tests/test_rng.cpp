#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "ridgepois/rng.hpp"
#include "test_support.hpp"

namespace ridgepois {
namespace {

TEST(Rng, SameKeySameStream) {
  CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
  EXPECT_EQ(a.counter(), 100u);
}

TEST(Rng, DeriveSeedSeparatesIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t g = 0; g < 30; ++g)
    for (std::uint64_t t = 0; t < 30; ++t) seen.insert(derive_seed(7, g, t));
  EXPECT_EQ(seen.size(), 900u);
  EXPECT_NE(derive_seed(7, 1, 2), derive_seed(7, 2, 1));
  EXPECT_NE(derive_seed(7, Stream::Features), derive_seed(7, Stream::Labels));
  static_assert(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}

TEST(Rng, UniformMoments) {
  CounterRng rng(1);
  std::vector<double> xs(200000);
  for (auto& x : xs) {
    x = rng.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
  EXPECT_NEAR(test::mean(xs), 0.5, 4.0 * std::sqrt(1.0 / 12.0 / xs.size()));
}

TEST(Rng, NormalMoments) {
  CounterRng rng(2);
  const std::size_t N = 400000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / N, 0.0, 4.0 / std::sqrt(double(N)));
  EXPECT_NEAR(s2 / N, 1.0, 4.0 * std::sqrt(2.0 / N));
  EXPECT_NEAR(s4 / N, 3.0, 4.0 * std::sqrt(96.0 / N));
}

TEST(Rng, SignAndBelow) {
  CounterRng rng(3);
  int plus = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    const double s = rng.sign();
    ASSERT_TRUE(s == 1.0 || s == -1.0);
    plus += s > 0;
  }
  EXPECT_NEAR(double(plus) / N, 0.5, 4.0 * 0.5 / std::sqrt(double(N)));

  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.below(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (const int k : counts) EXPECT_NEAR(k, 10000, 500);
  EXPECT_EQ(rng.below(1), 0u);
}

}  // namespace
}  // namespace ridgepois
