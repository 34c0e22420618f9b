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

#include <string>
#include <vector>

#include "repeat/base_xai.h"
#include "repeat/common.h"

namespace repeat {

void MaskConfig::Validate() const {
  Require(grid >= 2, "masks.grid must be at least 2");
  Require(cell_prob > 0.0 && cell_prob < 1.0, "masks.cell_prob must be in (0, 1)");
  Require(num_masks >= 2, "masks.n must be at least 2");
}

std::vector<ScalarMap> GenerateMasks(const MaskConfig& cfg, int height,
                                     int width, uint64_t seed) {
  cfg.Validate();
  Require(height > 0 && width > 0, "mask shape must be positive");

  const int cell_h = (height + cfg.grid - 1) / cfg.grid;
  const int cell_w = (width + cfg.grid - 1) / cfg.grid;
  const int up_h = height + cell_h;
  const int up_w = width + cell_w;

  std::vector<ScalarMap> masks;
  masks.reserve(cfg.num_masks);
  std::vector<double> cells(static_cast<std::size_t>(cfg.grid) * cfg.grid);
  for (int n = 0; n < cfg.num_masks; ++n) {
    Rng rng(SplitSeed(seed, static_cast<uint64_t>(n)));
    for (double& c : cells) c = Bernoulli(rng, cfg.cell_prob) ? 1.0 : 0.0;
    const int dy = static_cast<int>(UniformIndex(rng, cell_h));
    const int dx = static_cast<int>(UniformIndex(rng, cell_w));
    const std::vector<double> up = ResizePlane(cells, cfg.grid, cfg.grid, up_h, up_w);

    std::vector<double> crop(static_cast<std::size_t>(height) * width);
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        crop[static_cast<std::size_t>(i) * width + j] =
            up[static_cast<std::size_t>(i + dy) * up_w + (j + dx)];
      }
    }
    masks.emplace_back(height, width, std::move(crop));
  }
  return masks;
}

}  // namespace repeat
