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

#include "repeat/estimator.h"

#include <algorithm>
#include <string>
#include <utility>

#include "repeat/common.h"

namespace repeat {

void RepeatConfig::Validate() const {
  Require(k >= 2, "repeat.k must be at least 2, got " + std::to_string(k));
  Require(threads >= 1, "threads must be at least 1");
  if (base.method == BaseMethod::kRelax) {
    base.masks.Validate();
  } else {
    base.shap.Validate();
  }
}

WeightMap ComputeWeightMap(const ScalarMap& base) {
  WeightMap out{ScalarMap(base.height(), base.width(), 0.0), false};
  double peak = 0.0;
  for (double v : base.data()) peak = std::max(peak, v);
  if (peak <= 0.0) {
    out.degenerate = true;
    return out;
  }
  std::span<double> w = out.weights.mutable_data();
  for (std::size_t p = 0; p < w.size(); ++p) {
    w[p] = base[p] > 0.0 ? base[p] / peak : 0.0;
  }
  return out;
}

BernoulliSample SampleBernoulli(const ScalarMap& base, ThresholdMethod method) {
  const Threshold tau = ComputeThreshold(base, method);
  return {Binarize(base, tau.value), tau};
}

ScalarMap AggregateImportance(std::span<const BinaryMask> indicators,
                              std::span<const ScalarMap> weights) {
  Require(indicators.size() >= 2, "aggregation needs at least 2 realizations");
  Require(indicators.size() == weights.size(),
          "one weight map per indicator expected");
  const int height = indicators.front().height();
  const int width = indicators.front().width();
  for (std::size_t k = 0; k < indicators.size(); ++k) {
    Require(indicators[k].height() == height && indicators[k].width() == width &&
                weights[k].height() == height && weights[k].width() == width,
            "realization shapes differ");
  }

  ScalarMap out(height, width, 0.0);
  std::span<double> acc = out.mutable_data();
  for (std::size_t k = 0; k < indicators.size(); ++k) {
    for (std::size_t p = 0; p < acc.size(); ++p) {
      if (indicators[k][p]) acc[p] += weights[k][p];
    }
  }
  const double inv_k = 1.0 / static_cast<double>(indicators.size());
  for (double& v : acc) v *= inv_k;
  return out;
}

ScalarMap BernoulliUncertainty(const ScalarMap& importance) {
  ScalarMap out(importance.height(), importance.width(), 0.0);
  std::span<double> u = out.mutable_data();
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double v = importance[p];
    Require(v >= 0.0 && v <= 1.0, "importance must lie in [0, 1]");
    u[p] = v * (1.0 - v);
  }
  return out;
}

int RepeatResult::DegenerateRealizations() const {
  return static_cast<int>(std::count_if(flags.begin(), flags.end(),
                                        [](const RealizationFlags& f) {
                                          return f.weights_degenerate;
                                        }));
}

RepeatResult RepeatFromBase(const BaseSampler& base, int k,
                            ThresholdMethod method, uint64_t seed) {
  Require(k >= 2, "repeat.k must be at least 2, got " + std::to_string(k));
  RepeatResult result;
  result.realizations.reserve(k);
  result.weights.reserve(k);
  for (int r = 0; r < k; ++r) {
    const ScalarMap map = base(SplitSeed(seed, static_cast<uint64_t>(r)));
    BernoulliSample sample = SampleBernoulli(map, method);
    WeightMap weights = ComputeWeightMap(map);
    result.flags.push_back({sample.threshold.degenerate,
                            sample.threshold.not_converged, weights.degenerate});
    result.thresholds.push_back(sample.threshold.value);
    result.realizations.push_back(std::move(sample.indicator));
    result.weights.push_back(std::move(weights.weights));
  }
  const int degenerate = result.DegenerateRealizations();
  if (2 * degenerate > k) {
    throw Error(std::to_string(degenerate) + " of " + std::to_string(k) +
                " realizations have no positive base importance");
  }
  result.importance = AggregateImportance(result.realizations, result.weights);
  result.uncertainty = BernoulliUncertainty(result.importance);
  return result;
}

RepeatResult RepeatExplain(const ImageTensor& image, const Encoder& encoder,
                           const RepeatConfig& cfg) {
  cfg.Validate();
  Require(image.shape() == encoder.input_shape(),
          "image shape does not match encoder input");
  const BaseSampler base = [&](uint64_t seed) {
    return BaseImportance(image, encoder, cfg.base, seed, cfg.threads);
  };
  return RepeatFromBase(base, cfg.k, cfg.threshold, cfg.seed);
}

}  // namespace repeat
