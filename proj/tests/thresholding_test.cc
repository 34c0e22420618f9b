/*
 * Copyright 2026 The repeat-xai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "repeat/thresholding.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "repeat/common.h"
#include "oracles.h"
#include "test_util.h"

namespace repeat {
namespace {

using testing::MakeHistogram;
using testing::OtsuOracle;
using testing::RandomHistogram;
using testing::TriangleOracle;

TEST(ThresholdMeanTest, Examples) {
  EXPECT_EQ(ThresholdMean(ScalarMap(1, 4, {1, 2, 3, 6})), 3.0);
  EXPECT_EQ(ThresholdMean(ScalarMap(3, 3, 0.37)), 0.37);
}

TEST(ThresholdMeanTest, UniformSampleNearHalf) {
  std::mt19937_64 rng(71);
  const ScalarMap m = testing::RandomMap(rng, 100, 100);
  EXPECT_NEAR(ThresholdMean(m), 0.5, 0.015);
  double sum = 0.0;
  for (double v : m.data()) sum += v;
  EXPECT_NEAR(ThresholdMean(m), sum / 10000, 1e-12);
}

TEST(ThresholdOtsuTest, TwoMasses) {
  const Histogram h = MakeHistogram({10, 0, 0, 10}, 0.0, 4.0);
  const Threshold t = ThresholdOtsu(h);
  EXPECT_EQ(t.value, OtsuOracle(h));
  EXPECT_GT(t.value, 0.0);
  EXPECT_LT(t.value, 4.0);
  EXPECT_EQ(t.value, 1.0);
}

TEST(ThresholdOtsuTest, MatchesExhaustiveScan) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 1000; ++trial) {
    const Histogram h = RandomHistogram(rng);
    ASSERT_EQ(ThresholdOtsu(h).value, OtsuOracle(h)) << "trial " << trial;
  }
}

TEST(ThresholdTriangleTest, DecayingCounts) {
  const Histogram h = MakeHistogram({100, 50, 25, 12, 6, 3}, 0.0, 6.0);
  const Threshold t = ThresholdTriangle(h);
  EXPECT_EQ(t.value, TriangleOracle(h));
  // Line (0,100)-(5,3): bin 2 is farthest.
  EXPECT_EQ(t.value, 2.5);
}

TEST(ThresholdTriangleTest, TieGoesToLowerSide) {
  const Histogram symmetric = MakeHistogram({1, 2, 3, 9, 3, 2, 1}, 0.0, 7.0);
  EXPECT_LT(ThresholdTriangle(symmetric).value, 3.5);
  const Histogram right_tail = MakeHistogram({1, 9, 3, 2, 1, 1}, 0.0, 6.0);
  EXPECT_GT(ThresholdTriangle(right_tail).value, 1.5);
}

TEST(ThresholdTriangleTest, MatchesGeometricScan) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 1000; ++trial) {
    const Histogram h = RandomHistogram(rng);
    ASSERT_EQ(ThresholdTriangle(h).value, TriangleOracle(h)) << "trial " << trial;
  }
}

TEST(ThresholdLiTest, TwoPointMassesByHand) {
  std::vector<double> v(20, 1.0);
  v.insert(v.end(), 20, 9.0);
  const Histogram h = ComputeHistogram(v, 256);
  const double w = 8.0 / 256;
  const double mu0 = 1.0 + w / 2, mu1 = 9.0 - w / 2;
  // Start at the mean 5; the classes never change, so one update lands on
  // the fixed point.
  const double t1 = (mu0 - mu1) / (std::log(mu0) - std::log(mu1));
  const Threshold t = ThresholdLi(h);
  EXPECT_FALSE(t.not_converged);
  EXPECT_NEAR(t.value, t1, 1e-12);
  EXPECT_GT(t.value, 1.0);
  EXPECT_LT(t.value, 9.0);
}

TEST(ThresholdLiTest, FixedPointResidualBelowHalfBin) {
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 1000; ++trial) {
    const Histogram h = RandomHistogram(rng);
    const Threshold t = ThresholdLi(h);
    if (t.not_converged) continue;
    ASSERT_LT(std::abs(LiUpdate(h, t.value) - t.value), 0.5 * h.bin_width())
        << "trial " << trial;
  }
}

TEST(ThresholdLiTest, NegativeSupportIsShifted) {
  std::mt19937_64 rng(75);
  const ScalarMap m = testing::RandomMap(rng, 20, 20, -2.0, 1.0);
  const Threshold t = ComputeThreshold(m, ThresholdMethod::kLi);
  EXPECT_GT(t.value, m.Min());
  EXPECT_LT(t.value, m.Max());
}

TEST(DegenerateTest, AllMethodsFallBack) {
  const ScalarMap flat(4, 4, 0.3);
  for (ThresholdMethod m : {ThresholdMethod::kMean, ThresholdMethod::kOtsu,
                            ThresholdMethod::kTriangle, ThresholdMethod::kLi}) {
    const Threshold t = ComputeThreshold(flat, m);
    EXPECT_TRUE(t.degenerate) << ThresholdMethodName(m);
    EXPECT_EQ(t.value, 0.3);
    EXPECT_EQ(Binarize(flat, t.value).CountOnes(), 16u);
  }
}

TEST(BinarizeTest, Examples) {
  const ScalarMap m(2, 2, {0.1, 0.9, 0.5, 0.5});
  EXPECT_EQ(Binarize(m, 0.5), BinaryMask(2, 2, std::vector<uint8_t>{0, 1, 1, 1}));
  EXPECT_EQ(Binarize(m, 0.95).CountOnes(), 0u);
  EXPECT_EQ(Binarize(m, 0.1).CountOnes(), 4u);
}

TEST(BinarizeTest, MeanKeepsAtLeastOnePixel) {
  std::mt19937_64 rng(76);
  for (int trial = 0; trial < 200; ++trial) {
    ScalarMap m = testing::RandomMap(rng, 7, 5, -1.0, 1.0);
    m[trial % 35] = 1e6;
    ASSERT_GE(Binarize(m, ThresholdMean(m)).CountOnes(), 1u);
  }
}

TEST(ScaleInvarianceTest, EveryMethodScalesWithTheMap) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const ScalarMap m = testing::RandomMap(rng, 16, 16, 0.0, 1.0);
    for (ThresholdMethod method : {ThresholdMethod::kMean, ThresholdMethod::kOtsu,
                                   ThresholdMethod::kTriangle, ThresholdMethod::kLi}) {
      const double base = ComputeThreshold(m, method).value;
      for (double c : {0.1, 3.0, 42.0}) {
        std::vector<double> v(m.data().begin(), m.data().end());
        for (double& x : v) x *= c;
        const double scaled = ComputeThreshold(ScalarMap(16, 16, v), method).value;
        EXPECT_NEAR(scaled, c * base, 1e-9 * std::abs(c * base))
            << ThresholdMethodName(method) << " c=" << c;
      }
    }
  }
}

// Right-skewed family: a dim majority plus a thin bright tail.
ScalarMap SkewedMap(std::mt19937_64& rng) {
  std::exponential_distribution<double> bg(10.0);
  std::normal_distribution<double> fg(0.8, 0.05);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(32 * 32);
  for (double& x : v) x = u(rng) < 0.1 ? fg(rng) : bg(rng);
  return ScalarMap(32, 32, v);
}

TEST(ThresholdOrderingTest, MeanBelowOtsuOnSkewedMaps) {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 100; ++trial) {
    const ScalarMap m = SkewedMap(rng);
    const double mean = ComputeThreshold(m, ThresholdMethod::kMean).value;
    const double otsu = ComputeThreshold(m, ThresholdMethod::kOtsu).value;
    ASSERT_LE(mean, otsu);
    const BinaryMask a = Binarize(m, mean), b = Binarize(m, otsu);
    for (std::size_t p = 0; p < m.size(); ++p) ASSERT_LE(b[p], a[p]);
  }
}

TEST(ThresholdNamesTest, RoundTrip) {
  for (ThresholdMethod m : {ThresholdMethod::kMean, ThresholdMethod::kOtsu,
                            ThresholdMethod::kTriangle, ThresholdMethod::kLi}) {
    EXPECT_EQ(ParseThresholdMethod(ThresholdMethodName(m)), m);
  }
  EXPECT_THROW(ParseThresholdMethod("median"), ValidationError);
}

}  // namespace
}  // namespace repeat
