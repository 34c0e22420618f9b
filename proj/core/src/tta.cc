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

#include <cmath>
#include <vector>

#include "repeat/base_xai.h"
#include "repeat/common.h"

namespace repeat {

ScalarMap TtaUncertainty(const ImageTensor& image, const ImportanceFn& base,
                         int n_aug, double drop_prob, uint64_t seed) {
  Require(n_aug >= 2, "tta.n must be at least 2");
  Require(drop_prob > 0.0 && drop_prob < 1.0, "tta.p must be in (0, 1)");

  const uint64_t base_seed = SplitSeed(seed, 0);
  const std::size_t plane = image.shape().pixels();
  std::vector<ScalarMap> maps;
  maps.reserve(n_aug);
  for (int a = 0; a < n_aug; ++a) {
    Rng rng(SplitSeed(seed, 1 + static_cast<uint64_t>(a)));
    std::vector<double> pixels(image.data().begin(), image.data().end());
    for (std::size_t p = 0; p < plane; ++p) {
      if (Bernoulli(rng, drop_prob)) {
        for (int c = 0; c < image.channels(); ++c) pixels[c * plane + p] = 0.0;
      }
    }
    maps.push_back(base(ImageTensor(image.shape(), std::move(pixels)), base_seed));
  }

  const int height = maps.front().height();
  const int width = maps.front().width();
  for (const ScalarMap& m : maps) {
    Require(m.height() == height && m.width() == width,
            "base maps of a TTA run must share a shape");
  }
  std::vector<double> stddev(maps.front().size());
  for (std::size_t p = 0; p < stddev.size(); ++p) {
    double mean = 0.0;
    for (const ScalarMap& m : maps) mean += m[p];
    mean /= n_aug;
    double var = 0.0;
    for (const ScalarMap& m : maps) var += (m[p] - mean) * (m[p] - mean);
    stddev[p] = std::sqrt(var / n_aug);
  }
  return ScalarMap(height, width, std::move(stddev));
}

ScalarMap TtaUncertainty(const ImageTensor& image, const Encoder& encoder,
                         const BaseConfig& cfg, int n_aug, double drop_prob,
                         uint64_t seed, int threads) {
  const ImportanceFn base = [&](const ImageTensor& augmented, uint64_t s) {
    return BaseImportance(augmented, encoder, cfg, s, threads);
  };
  return TtaUncertainty(image, base, n_aug, drop_prob, seed);
}

}  // namespace repeat
