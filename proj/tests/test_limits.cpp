#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "zaslab/limits.hpp"

using namespace zaslab;

TEST(Limits, ApproachRadii) {
  const std::vector<double> r = approachRadii(0.5, 4, 20);
  ASSERT_EQ(r.size(), 17u);
  EXPECT_EQ(r.front(), 0.5 * (1 + 1.0 / 16));
  EXPECT_EQ(r.back(), 0.5 * (1 + std::ldexp(1.0, -20)));
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(r[i], r[i - 1]);
}

TEST(Limits, GeometricErrorIsRemovedExactly) {
  std::vector<double> s;
  for (int i = 0; i < 12; ++i) s.push_back(-9.0 + 3.0 * std::ldexp(1.0, -i));
  const SequenceLimit lim = extrapolateLimit(s);
  EXPECT_NEAR(lim.value, -9.0, 1e-13);
  EXPECT_FALSE(lim.diverged);
}

TEST(Limits, MixedPowerErrorsAlongGeometricGrid) {
  std::vector<double> s;
  for (int i = 4; i <= 20; ++i) {
    const double e = std::ldexp(1.0, -i);
    s.push_back(2.0 + 0.7 * std::sqrt(e) - 1.3 * e + 0.4 * e * std::sqrt(e));
  }
  const SequenceLimit lim = extrapolateLimit(s);
  EXPECT_NEAR(lim.value, 2.0, 1e-7);
  EXPECT_LT(lim.error_estimate, 1e-4);
  EXPECT_GT(std::abs(s.back() - 2.0), 1e-4);  // the raw tail alone would miss
}

TEST(Limits, ConstantSequence) {
  const std::vector<double> s(10, -1.0);
  const SequenceLimit lim = extrapolateLimit(s);
  EXPECT_EQ(lim.value, -1.0);
  EXPECT_EQ(lim.error_estimate, 0.0);
}

TEST(Limits, DivergenceSignatures) {
  std::vector<double> s;
  for (int i = 0; i < 8; ++i) s.push_back(-std::pow(2.0, 1.5 * i));
  EXPECT_TRUE(fallsWithWideningGaps(s));
  EXPECT_FALSE(belowThresholdAndDecreasing(s, -1e6));
  for (int i = 8; i < 20; ++i) s.push_back(-std::pow(2.0, 1.5 * i));
  EXPECT_TRUE(belowThresholdAndDecreasing(s, -1e6));

  std::vector<double> settling;
  for (int i = 0; i < 8; ++i) settling.push_back(-1.0 - std::ldexp(1.0, -i));
  EXPECT_FALSE(fallsWithWideningGaps(settling));
}

TEST(Limits, EmptySequenceThrows) {
  EXPECT_THROW(extrapolateLimit(std::vector<double>{}), ConvergenceError);
}
