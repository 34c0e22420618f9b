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
#include <numeric>
#include <vector>

#include "repeat/common.h"
#include "repeat/eval.h"

namespace repeat {

Complexity ComputeComplexity(const ScalarMap& uncertainty) {
  double total = 0.0;
  for (double v : uncertainty.data()) {
    Require(v >= 0.0, "uncertainty must be non-negative");
    total += v;
  }
  if (total == 0.0) return {0.0, true};
  return {ShannonEntropy(uncertainty.data()), false};
}

double DiscreteComplexity(const ScalarMap& map) {
  const Histogram h = ComputeHistogram(map.data(), kDefaultHistogramBins);
  return ShannonEntropy(std::span<const int64_t>(h.counts));
}

EmprtScore EmprtFromMaps(const ScalarMap& trained_uncertainty,
                         const ScalarMap& randomized_uncertainty) {
  EmprtScore out;
  out.trained_complexity = DiscreteComplexity(trained_uncertainty);
  out.randomized_complexity = DiscreteComplexity(randomized_uncertainty);
  if (out.trained_complexity == 0.0) {
    throw Error("eMPRT undefined: the trained model's uncertainty map is constant");
  }
  out.score = (out.randomized_complexity - out.trained_complexity) /
              out.trained_complexity;
  return out;
}

EmprtScore ComputeEmprt(const ImageTensor& image, const Encoder& encoder,
                        const RepeatConfig& cfg, uint64_t rand_seed) {
  const RepeatResult trained = RepeatExplain(image, encoder, cfg);
  const RepeatResult randomized =
      RepeatExplain(image, encoder.Randomize(rand_seed), cfg);
  return EmprtFromMaps(trained.uncertainty, randomized.uncertainty);
}

double AggregateUncertainty(const ScalarMap& uncertainty) {
  return uncertainty.Mean();
}

double Auroc(std::span<const double> scores, std::span<const int> labels) {
  Require(scores.size() == labels.size(), "one label per score expected");
  std::size_t positives = 0;
  for (int l : labels) {
    Require(l == 0 || l == 1, "labels must be 0 or 1");
    positives += static_cast<std::size_t>(l);
  }
  const std::size_t negatives = labels.size() - positives;
  Require(positives > 0 && negatives > 0, "AUROC needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] == 1) rank_sum += midrank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(positives);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(negatives));
}

double Median(std::vector<double> values) {
  Require(!values.empty(), "median of an empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace repeat
