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

#ifndef REPEAT_ESTIMATOR_H_
#define REPEAT_ESTIMATOR_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "repeat/base_xai.h"
#include "repeat/encoder.h"
#include "repeat/tensor.h"
#include "repeat/thresholding.h"

namespace repeat {

// Pixel importance as a Bernoulli variable.
//
// Each of K stochastic base maps R(k) is thresholded into an indicator
// I(k) = [R(k) >= tau(k)] and weighted by W(k) = max(R(k), 0) / max R(k).
// The importance is the weighted sample mean p = (1/K) sum_k I(k) W(k) and
// the uncertainty is the Bernoulli variance p (1 - p).

struct RepeatConfig {
  int k = 10;
  BaseConfig base;
  ThresholdMethod threshold = ThresholdMethod::kMean;
  uint64_t seed = 0;
  int threads = 1;

  void Validate() const;
};

struct WeightMap {
  ScalarMap weights;
  // No strictly positive value: the weights are all zero.
  bool degenerate = false;
};

// Clips negatives to zero and divides by the post-clip maximum.
WeightMap ComputeWeightMap(const ScalarMap& base);

struct BernoulliSample {
  BinaryMask indicator;
  Threshold threshold;
};

BernoulliSample SampleBernoulli(const ScalarMap& base, ThresholdMethod method);

// (1/K) sum_k indicators[k] * weights[k]. K >= 2, shapes must agree.
ScalarMap AggregateImportance(std::span<const BinaryMask> indicators,
                              std::span<const ScalarMap> weights);

// p (1 - p) per pixel; p must lie in [0, 1].
ScalarMap BernoulliUncertainty(const ScalarMap& importance);

struct RealizationFlags {
  bool threshold_degenerate = false;
  bool threshold_not_converged = false;
  bool weights_degenerate = false;
};

struct RepeatResult {
  ScalarMap importance;
  ScalarMap uncertainty;
  std::vector<BinaryMask> realizations;
  std::vector<ScalarMap> weights;
  std::vector<double> thresholds;
  std::vector<RealizationFlags> flags;

  int DegenerateRealizations() const;
};

// Base map of one realization, given that realization's seed.
using BaseSampler = std::function<ScalarMap(uint64_t seed)>;

// Runs `base` for k = 0..K-1 with seed SplitSeed(seed, k). Fails when more
// than K/2 realizations have degenerate weights.
RepeatResult RepeatFromBase(const BaseSampler& base, int k,
                            ThresholdMethod method, uint64_t seed);

RepeatResult RepeatExplain(const ImageTensor& image, const Encoder& encoder,
                           const RepeatConfig& cfg);

}  // namespace repeat

#endif  // REPEAT_ESTIMATOR_H_
