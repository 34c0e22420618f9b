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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "repeat/base_xai.h"
#include "repeat/common.h"
#include "test_util.h"

namespace repeat {
namespace {

TEST(MaskConfigTest, Defaults) {
  const MaskConfig cfg;
  EXPECT_EQ(cfg.grid, 7);
  EXPECT_EQ(cfg.cell_prob, 0.5);
  EXPECT_EQ(cfg.num_masks, 100);
}

TEST(MaskConfigTest, Validation) {
  EXPECT_THROW((MaskConfig{1, 0.5, 10}.Validate()), ValidationError);
  EXPECT_THROW((MaskConfig{7, 0.0, 10}.Validate()), ValidationError);
  EXPECT_THROW((MaskConfig{7, 1.0, 10}.Validate()), ValidationError);
  EXPECT_THROW((MaskConfig{7, 0.5, 1}.Validate()), ValidationError);
}

TEST(GenerateMasksTest, CellProbabilityLimits) {
  const MaskConfig ones{7, std::nextafter(1.0, 0.0), 20};
  for (const ScalarMap& m : GenerateMasks(ones, 13, 11, 1)) {
    for (double v : m.data()) ASSERT_EQ(v, 1.0);
  }
  const MaskConfig zeros{7, std::numeric_limits<double>::min(), 20};
  for (const ScalarMap& m : GenerateMasks(zeros, 13, 11, 1)) {
    for (double v : m.data()) ASSERT_EQ(v, 0.0);
  }
}

TEST(GenerateMasksTest, PixelMeanWithinBinomialBound) {
  // One pixel from each of 10,000 independent masks.
  for (double p : {0.2, 0.5, 0.8}) {
    const MaskConfig cfg{7, p, 10000};
    const auto masks = GenerateMasks(cfg, 9, 9, 77);
    double sum = 0.0;
    for (const ScalarMap& m : masks) sum += m(4, 4);
    const double bound = 3.0 * std::sqrt(p * (1 - p) / 10000);
    EXPECT_NEAR(sum / 10000, p, bound) << "p=" << p;
  }
}

TEST(GenerateMasksTest, DeterministicRangeAndSeedDependent) {
  const MaskConfig cfg{5, 0.5, 30};
  const auto a = GenerateMasks(cfg, 16, 12, 3);
  const auto b = GenerateMasks(cfg, 16, 12, 3);
  const auto c = GenerateMasks(cfg, 16, 12, 4);
  ASSERT_EQ(a.size(), 30u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const ScalarMap& m : a) {
    EXPECT_EQ(m.height(), 16);
    EXPECT_EQ(m.width(), 12);
    for (double v : m.data()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(GenerateMasksTest, PrefixStableInCount) {
  const auto few = GenerateMasks({7, 0.5, 5}, 10, 10, 9);
  const auto many = GenerateMasks({7, 0.5, 12}, 10, 10, 9);
  for (int n = 0; n < 5; ++n) EXPECT_EQ(few[n], many[n]);
}

Encoder LinearEncoder(ImageShape shape, int dim, uint64_t seed) {
  return Encoder::Build(EncoderKind::kLinearProjection, seed, shape, dim);
}

TEST(RelaxTest, AllOnesMasksGiveOne) {
  std::mt19937_64 rng(41);
  const ImageTensor x = testing::RandomImage(rng, {1, 8, 8});
  const Encoder enc = Encoder::Build(EncoderKind::kToyConv, 1, {1, 8, 8}, 16);
  const std::vector<ScalarMap> masks(4, ScalarMap(8, 8, 1.0));
  const RelaxOutput out = RelaxWithMasks(x, enc, masks);
  for (double v : out.importance.data()) EXPECT_NEAR(v, 1.0, 1e-12);
  for (double v : out.uncertainty.data()) EXPECT_NEAR(v, 0.0, 1e-24);
}

TEST(RelaxTest, AllZeroMasksGiveZero) {
  std::mt19937_64 rng(42);
  const ImageTensor x = testing::RandomImage(rng, {1, 4, 4});
  const Encoder enc = LinearEncoder({1, 4, 4}, 8, 2);
  const std::vector<ScalarMap> masks(3, ScalarMap(4, 4, 0.0));
  const RelaxOutput out = RelaxWithMasks(x, enc, masks);
  for (double s : out.similarities) EXPECT_EQ(s, 0.0);
  for (double v : out.importance.data()) EXPECT_EQ(v, 0.0);
  for (double v : out.uncertainty.data()) EXPECT_EQ(v, 0.0);
}

double Cos(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  return ab / std::sqrt(aa * bb);
}

TEST(RelaxTest, TwoHandMasksOnTwoByTwo) {
  // 8 x 4 projection, x = [0.2, 0.4, 0.6, 0.8].
  const std::vector<double> w{1, 0, 0, 0,  0, 1, 0, 0,  0, 0, 1, 0,  0, 0, 0, 1,
                              1, 1, 0, 0,  0, 0, 1, 1,  1, -1, 0, 0, 0, 0, 1, -1};
  const Encoder enc = Encoder::LinearFromWeights({1, 2, 2}, 8, w);
  const std::vector<double> x{0.2, 0.4, 0.6, 0.8};
  const std::vector<double> m1{1.0, 0.5, 0.0, 1.0};
  const std::vector<double> m2{0.0, 1.0, 1.0, 0.25};

  auto project = [&](const std::vector<double>& v) {
    std::vector<double> e(8, 0.0);
    for (int r = 0; r < 8; ++r) {
      for (int k = 0; k < 4; ++k) e[r] += w[r * 4 + k] * v[k];
    }
    return e;
  };
  const std::vector<double> h = project(x);
  const double s1 = Cos(h, project({0.2, 0.2, 0.0, 0.8}));
  const double s2 = Cos(h, project({0.0, 0.4, 0.6, 0.2}));

  const RelaxOutput out = RelaxWithMasks(
      ImageTensor({1, 2, 2}, x), enc,
      std::vector<ScalarMap>{ScalarMap(2, 2, m1), ScalarMap(2, 2, m2)});
  EXPECT_NEAR(out.similarities[0], s1, 1e-14);
  EXPECT_NEAR(out.similarities[1], s2, 1e-14);
  for (int p = 0; p < 4; ++p) {
    const double r = (s1 * m1[p] + s2 * m2[p]) / 2;
    const double u = ((s1 - r) * (s1 - r) * m1[p] + (s2 - r) * (s2 - r) * m2[p]) / 2;
    EXPECT_NEAR(out.importance[p], r, 1e-14);
    EXPECT_NEAR(out.uncertainty[p], u, 1e-14);
  }
}

TEST(RelaxTest, ConstantMasksGiveClosedForm) {
  const Encoder enc = LinearEncoder({1, 3, 3}, 8, 3);
  std::mt19937_64 rng(43);
  const ImageTensor x = testing::RandomImage(rng, {1, 3, 3});
  const std::vector<ScalarMap> masks(5, ScalarMap(3, 3, 0.5));
  const RelaxOutput out = RelaxWithMasks(x, enc, masks);
  // A linear encoder is scale equivariant, so every s_n is 1:
  // R = 0.5 and U = (1 - 0.5)^2 * 0.5.
  for (double s : out.similarities) EXPECT_NEAR(s, 1.0, 1e-12);
  for (double v : out.importance.data()) EXPECT_NEAR(v, 0.5, 1e-12);
  for (double v : out.uncertainty.data()) EXPECT_NEAR(v, 0.125, 1e-12);
}

TEST(RelaxTest, BoundedByLargestSimilarity) {
  std::mt19937_64 rng(44);
  for (EncoderKind kind : {EncoderKind::kLinearProjection, EncoderKind::kToyConv}) {
    const ImageShape shape{3, 12, 12};
    const Encoder enc = Encoder::Build(kind, 5, shape, 16);
    const RelaxOutput out =
        Relax(testing::RandomImage(rng, shape), enc, MaskConfig{4, 0.5, 40}, 8);
    double smax = 0.0;
    for (double s : out.similarities) smax = std::max(smax, std::abs(s));
    EXPECT_LE(smax, 1.0 + 1e-12);
    for (double v : out.importance.data()) EXPECT_LE(std::abs(v), smax + 1e-12);
    for (double v : out.uncertainty.data()) EXPECT_GE(v, 0.0);
  }
}

TEST(RelaxTest, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(45);
  const ImageShape shape{1, 16, 16};
  const Encoder enc = Encoder::Build(EncoderKind::kToyConv, 6, shape, 16);
  const ImageTensor x = testing::RandomImage(rng, shape);
  const MaskConfig cfg{7, 0.5, 50};
  const RelaxOutput a = Relax(x, enc, cfg, 11, 1);
  const RelaxOutput b = Relax(x, enc, cfg, 11, 4);
  EXPECT_EQ(a.importance, b.importance);
  EXPECT_EQ(a.uncertainty, b.uncertainty);
  EXPECT_EQ(a.similarities, b.similarities);
  EXPECT_EQ(RelaxImportance(x, enc, cfg, 11), a.importance);
  EXPECT_EQ(RelaxUncertainty(x, enc, cfg, 11), a.uncertainty);
  EXPECT_NE(Relax(x, enc, cfg, 12).importance, a.importance);
}

TEST(RelaxTest, ShapeMismatch) {
  const Encoder enc = LinearEncoder({1, 4, 4}, 8, 1);
  EXPECT_THROW(Relax(ImageTensor({1, 5, 4}, 0.5), enc, MaskConfig{}, 1),
               ValidationError);
  EXPECT_THROW(RelaxWithMasks(ImageTensor({1, 4, 4}, 0.5), enc,
                              std::vector<ScalarMap>{ScalarMap(3, 4, 1.0)}),
               ValidationError);
}

TEST(BaseImportanceTest, DispatchesOnMethod) {
  std::mt19937_64 rng(46);
  const ImageShape shape{1, 8, 8};
  const Encoder enc = LinearEncoder(shape, 8, 4);
  const ImageTensor x = testing::RandomImage(rng, shape);
  BaseConfig cfg;
  cfg.masks = {4, 0.5, 10};
  EXPECT_EQ(BaseImportance(x, enc, cfg, 3), RelaxImportance(x, enc, cfg.masks, 3));
  cfg.method = BaseMethod::kKernelShap;
  cfg.shap = {2, 16, ShapBaseline::kZero};
  EXPECT_EQ(BaseImportance(x, enc, cfg, 3),
            KernelShapImportance(x, enc, cfg.shap, 3));
  EXPECT_EQ(ParseBaseMethod("shap"), BaseMethod::kKernelShap);
  EXPECT_EQ(ParseBaseMethod(BaseMethodName(BaseMethod::kRelax)), BaseMethod::kRelax);
  EXPECT_THROW(ParseBaseMethod("lime"), ValidationError);
}

}  // namespace
}  // namespace repeat
