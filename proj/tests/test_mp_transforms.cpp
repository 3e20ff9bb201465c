#include <cmath>

#include <gtest/gtest.h>

#include "ridgepois/error.hpp"
#include "ridgepois/mp_transforms.hpp"
#include "test_support.hpp"

namespace ridgepois {
namespace {

// Reference values from adaptive quadrature of the Marcenko-Pastur density
// (30 significant digits): m = int rho(x)/(x - z), m' = int rho(x)/(x - z)^2,
// plus the atom (1 - 1/c)/(-z) for c > 1.
struct QuadratureRef {
  double c, z, m, m_prime, m_tilde, m_tilde_prime;
};
constexpr QuadratureRef kRefs[] = {
    {0.1, -0.1, 0.9901951359278483, 1.0671108178232734, 9.0990195135927843, 90.106711081782317},
    {0.5, -0.01, 1.9244744895969657, 7.1352159026047493, 50.962237244798482, 5003.5676079513022},
    {1.0, -0.5, 1.0, 1.3333333333333333, 1.0, 1.3333333333333333},
    {0.5, -2.0, 0.35078105935821217, 0.12878236306898486, 0.42539052967910609, 0.18939118153449243},
    {2.0, -0.5, 1.2807764064044151, 2.2126781251816649, 0.56155281280883027, 0.42535625036332974},
    {1.5, -0.001, 334.65874568822537, 333341.17625529667, 1.9881185323380717, 11.764382945020213},
};

TEST(MpTransforms, MatchesDensityQuadrature) {
  for (const auto& ref : kRefs) {
    const AspectRatio c{ref.c};
    const TransformValues t = mp_transform_values(c, ref.z);
    EXPECT_NEAR(t.m, ref.m, 1e-12 * ref.m) << "c=" << ref.c << " z=" << ref.z;
    EXPECT_NEAR(t.m_prime, ref.m_prime, 1e-10 * ref.m_prime) << "c=" << ref.c << " z=" << ref.z;
    EXPECT_NEAR(t.m_tilde, ref.m_tilde, 1e-12 * ref.m_tilde) << "c=" << ref.c << " z=" << ref.z;
    EXPECT_NEAR(t.m_tilde_prime, ref.m_tilde_prime, 1e-10 * ref.m_tilde_prime)
        << "c=" << ref.c << " z=" << ref.z;
  }
}

TEST(MpTransforms, StieltjesExample) {
  const double m = mp_stieltjes(AspectRatio{0.1}, -0.1);
  EXPECT_NEAR(m, 0.990195, 5e-7);
  EXPECT_LT(mp_self_consistency_residual(AspectRatio{0.1}, -0.1, m), 1e-12);
}

TEST(MpTransforms, LargeLambdaBehavesLikeProbabilityMeasure) {
  for (const double lambda : {1e2, 1e4, 1e6}) {
    const double m = mp_stieltjes(AspectRatio{1.0}, -lambda);
    // m(-l) = 1/l - E[x]/l^2 + ..., E[x] = 1
    EXPECT_NEAR(m * lambda, 1.0, 2.0 / lambda);
  }
}

TEST(MpTransforms, BoundsOnNegativeAxis) {
  const double m = mp_stieltjes(AspectRatio{0.5}, -0.01);
  EXPECT_GT(m, 0.0);
  EXPECT_LT(m, 100.0);
}

TEST(MpTransforms, CompanionRelation) {
  for (const double z : {-0.01, -0.5, -3.0}) {
    EXPECT_DOUBLE_EQ(mp_companion(AspectRatio{1.0}, z), mp_stieltjes(AspectRatio{1.0}, z));
  }
  EXPECT_NEAR(mp_companion(AspectRatio{0.1}, -0.1), 9.0990195, 1e-6);
  EXPECT_NEAR(mp_companion(AspectRatio{0.5}, -1.0), 0.5 * mp_stieltjes(AspectRatio{0.5}, -1.0) + 0.5,
              1e-15);
}

TEST(MpTransforms, DerivativesMatchFiniteDifferences) {
  struct Case {
    double c, z;
  };
  for (const Case k : {Case{0.1, -0.1}, Case{1.0, -0.5}, Case{0.5, -2.0}, Case{2.0, -0.5}}) {
    const AspectRatio c{k.c};
    const double h = 1e-6 * std::max(1.0, std::abs(k.z));
    const double fd_m = (mp_stieltjes(c, k.z + h) - mp_stieltjes(c, k.z - h)) / (2 * h);
    const double fd_mt = (mp_companion(c, k.z + h) - mp_companion(c, k.z - h)) / (2 * h);
    EXPECT_LE(test::rel_err(mp_stieltjes_derivative(c, k.z), fd_m), 1e-6);
    EXPECT_LE(test::rel_err(mp_companion_derivative(c, k.z), fd_mt), 1e-6);
  }
}

TEST(MpTransforms, DerivativesArePositive) {
  EXPECT_GT(mp_stieltjes_derivative(AspectRatio{0.5}, -2.0), 0.0);
  EXPECT_GT(mp_companion_derivative(AspectRatio{2.0}, -0.5), 0.0);
  EXPECT_DOUBLE_EQ(mp_companion_derivative(AspectRatio{1.0}, -0.3),
                   mp_stieltjes_derivative(AspectRatio{1.0}, -0.3));
}

TEST(MpTransforms, Table1GridInvariants) {
  for (const double c : test::kTable1C) {
    for (const double lambda : test::kTable1Lambda) {
      const AspectRatio ratio{c};
      const TransformValues t = mp_transform_values(ratio, -lambda);
      EXPECT_LE(mp_self_consistency_residual(ratio, -lambda, t.m), 1e-10) << c << " " << lambda;
      EXPECT_GT(t.m, 0.0);
      EXPECT_LT(t.m, 1.0 / lambda);
      EXPECT_GT(t.m_tilde, 0.0);
      EXPECT_LT(t.m_tilde, 1.0 / lambda);
      EXPECT_GT(t.m_prime, 0.0);
      EXPECT_GT(t.m_tilde_prime, 0.0);
      EXPECT_LE(std::abs(t.m_tilde - (c * t.m - (1.0 - c) / -lambda)), 1e-12 * std::max(1.0, t.m_tilde));
    }
  }
}

TEST(MpTransforms, RidgelessLimits) {
  const double c = 0.5;
  const double lambda = 1e-8;
  const TransformValues t = mp_transform_values(AspectRatio{c}, -lambda);
  EXPECT_LE(std::abs((t.m_tilde - lambda * t.m_tilde_prime) - c / (1.0 - c)), 1e-3);
  EXPECT_LE(std::abs((1.0 - lambda * t.m_tilde) - c), 1e-3);
}

TEST(MpTransforms, TinyCzUsesStableForm) {
  // |c z| << 1e-8: the direct quadratic-root formula would lose all digits.
  const double m = mp_stieltjes(AspectRatio{1e-6}, -1e-4);
  EXPECT_LT(mp_self_consistency_residual(AspectRatio{1e-6}, -1e-4, m), 1e-12);
  EXPECT_NEAR(m, 1.0 / (1.0 + 1e-4), 1e-5);
}

TEST(MpTransforms, WishartSpectrumAgrees) {
  const std::uint64_t p = 500;
  const double c = 0.5;
  const double lambda = 0.1;
  const double observed = test::wishart_resolvent_trace(p, c, lambda, 99);
  EXPECT_LE(std::abs(observed - mp_stieltjes(AspectRatio{c}, -lambda)), 5.0 / std::sqrt(double(p)));
}

TEST(MpTransforms, RejectsNonNegativeZ) {
  try {
    mp_stieltjes(AspectRatio{0.5}, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonNegativeZ);
  }
  EXPECT_THROW(mp_companion(AspectRatio{0.5}, 1.0), Error);
  EXPECT_THROW(mp_stieltjes_derivative(AspectRatio{0.5}, std::nan("")), Error);
  EXPECT_THROW(AspectRatio{0.0}, Error);
  EXPECT_THROW(AspectRatio{-1.0}, Error);
}

}  // namespace
}  // namespace ridgepois
