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

#include <cstddef>
#include <vector>

#include "repeat/base_xai.h"
#include "repeat/common.h"

namespace repeat {

RelaxOutput RelaxWithMasks(const ImageTensor& image, const Encoder& encoder,
                           std::span<const ScalarMap> masks, int threads) {
  Require(image.shape() == encoder.input_shape(),
          "image shape does not match encoder input");
  Require(!masks.empty(), "RELAX needs at least one mask");
  const int height = image.height();
  const int width = image.width();
  const std::size_t plane = image.shape().pixels();
  for (const ScalarMap& m : masks) {
    Require(m.height() == height && m.width() == width,
            "mask shape does not match image");
  }

  const Embedding reference = encoder.Encode(image);
  std::vector<double> similarities(masks.size());
  ParallelFor(masks.size(), threads, [&](std::size_t n) {
    std::vector<double> masked(image.data().begin(), image.data().end());
    const std::span<const double> m = masks[n].data();
    for (std::size_t k = 0; k < masked.size(); ++k) masked[k] *= m[k % plane];
    similarities[n] = CosineSimilarity(reference, encoder.Encode(masked));
  });

  const double inv_n = 1.0 / static_cast<double>(masks.size());
  std::vector<double> importance(plane, 0.0);
  for (std::size_t n = 0; n < masks.size(); ++n) {
    const std::span<const double> m = masks[n].data();
    for (std::size_t p = 0; p < plane; ++p) importance[p] += similarities[n] * m[p];
  }
  for (double& v : importance) v *= inv_n;

  std::vector<double> uncertainty(plane, 0.0);
  for (std::size_t n = 0; n < masks.size(); ++n) {
    const std::span<const double> m = masks[n].data();
    for (std::size_t p = 0; p < plane; ++p) {
      const double d = similarities[n] - importance[p];
      uncertainty[p] += d * d * m[p];
    }
  }
  for (double& v : uncertainty) v *= inv_n;

  return {ScalarMap(height, width, std::move(importance)),
          ScalarMap(height, width, std::move(uncertainty)),
          std::move(similarities)};
}

RelaxOutput Relax(const ImageTensor& image, const Encoder& encoder,
                  const MaskConfig& cfg, uint64_t seed, int threads) {
  Require(image.shape() == encoder.input_shape(),
          "image shape does not match encoder input");
  const std::vector<ScalarMap> masks =
      GenerateMasks(cfg, image.height(), image.width(), seed);
  return RelaxWithMasks(image, encoder, masks, threads);
}

ScalarMap RelaxImportance(const ImageTensor& image, const Encoder& encoder,
                          const MaskConfig& cfg, uint64_t seed, int threads) {
  return Relax(image, encoder, cfg, seed, threads).importance;
}

ScalarMap RelaxUncertainty(const ImageTensor& image, const Encoder& encoder,
                           const MaskConfig& cfg, uint64_t seed, int threads) {
  return Relax(image, encoder, cfg, seed, threads).uncertainty;
}

}  // namespace repeat
