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

#ifndef REPEAT_BASE_XAI_H_
#define REPEAT_BASE_XAI_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "repeat/encoder.h"
#include "repeat/tensor.h"

namespace repeat {

// Random occlusion masks: a grid x grid Bernoulli(cell_prob) pattern,
// bilinearly upsampled and cropped at a random integer offset.
struct MaskConfig {
  int grid = 7;
  double cell_prob = 0.5;
  int num_masks = 100;

  void Validate() const;
};

// Soft masks in [0, 1], one ScalarMap per mask. Mask n depends only on
// (cfg, height, width, seed, n).
std::vector<ScalarMap> GenerateMasks(const MaskConfig& cfg, int height,
                                     int width, uint64_t seed);

// RELAX on a fixed mask set. Similarities s_n = cos(h, f(x * M_n)).
//   importance_ij  = (1/N) sum_n s_n M_n(i,j)
//   uncertainty_ij = (1/N) sum_n (s_n - importance_ij)^2 M_n(i,j)
struct RelaxOutput {
  ScalarMap importance;
  ScalarMap uncertainty;
  std::vector<double> similarities;
};

RelaxOutput RelaxWithMasks(const ImageTensor& image, const Encoder& encoder,
                           std::span<const ScalarMap> masks, int threads = 1);

RelaxOutput Relax(const ImageTensor& image, const Encoder& encoder,
                  const MaskConfig& cfg, uint64_t seed, int threads = 1);

ScalarMap RelaxImportance(const ImageTensor& image, const Encoder& encoder,
                          const MaskConfig& cfg, uint64_t seed, int threads = 1);

ScalarMap RelaxUncertainty(const ImageTensor& image, const Encoder& encoder,
                           const MaskConfig& cfg, uint64_t seed, int threads = 1);

enum class ShapBaseline { kZero, kMeanPixel };

struct ShapConfig {
  int patch_grid = 8;
  int num_coalitions = 256;
  ShapBaseline baseline = ShapBaseline::kZero;

  int num_players() const { return patch_grid * patch_grid; }
  void Validate() const;
};

struct ShapResult {
  std::vector<double> attributions;  // one per player
  double empty_value = 0.0;          // v(empty)
  double full_value = 0.0;           // v(all players)
  bool exact = false;                // every coalition was enumerated
  bool ridge_fallback = false;       // the regression was singular
};

// Characteristic function over a coalition given as a 0/1 membership vector.
using CoalitionGame = std::function<double(std::span<const uint8_t>)>;

// Kernel SHAP for an arbitrary game. Enumerates every coalition when
// 2^players <= num_coalitions, otherwise samples num_coalitions - 2 coalitions
// (uniform size in [1, players-1], then a uniform subset of that size) next
// to the empty and full ones. v(empty) fixes the intercept and efficiency is
// an equality constraint; the remaining players are fitted by weighted least
// squares with Shapley-kernel weights (divided by the sampling probability
// when sampling). Game evaluations run on `threads` workers.
ShapResult KernelShapGame(int num_players, const CoalitionGame& game,
                          int num_coalitions, uint64_t seed, int threads = 1);

// Row-major patch index of every pixel for a patch_grid x patch_grid layout.
std::vector<int> PatchAssignment(int height, int width, int patch_grid);

// Label-free Kernel SHAP: v(S) = <f(x_S), f(x)> where x_S keeps the patches in
// S and replaces the others with the baseline.
ShapResult KernelShap(const ImageTensor& image, const Encoder& encoder,
                      const ShapConfig& cfg, uint64_t seed, int threads = 1);

// Broadcasts per-patch attributions onto the pixel grid.
ScalarMap AttributionMap(std::span<const double> attributions, int height,
                         int width, int patch_grid);

ScalarMap KernelShapImportance(const ImageTensor& image, const Encoder& encoder,
                               const ShapConfig& cfg, uint64_t seed,
                               int threads = 1);

enum class BaseMethod { kRelax, kKernelShap };

std::string_view BaseMethodName(BaseMethod method);
BaseMethod ParseBaseMethod(std::string_view name);

struct BaseConfig {
  BaseMethod method = BaseMethod::kRelax;
  MaskConfig masks;
  ShapConfig shap;
};

// One stochastic base importance map.
ScalarMap BaseImportance(const ImageTensor& image, const Encoder& encoder,
                         const BaseConfig& cfg, uint64_t seed, int threads = 1);

// Importance of an image under a given seed.
using ImportanceFn =
    std::function<ScalarMap(const ImageTensor& image, uint64_t seed)>;

// Test-time augmentation: n_aug copies of the image with each pixel zeroed
// (all channels) with probability drop_prob, one base map per copy using a
// single fixed base seed, and the per-pixel population standard deviation.
ScalarMap TtaUncertainty(const ImageTensor& image, const ImportanceFn& base,
                         int n_aug, double drop_prob, uint64_t seed);

ScalarMap TtaUncertainty(const ImageTensor& image, const Encoder& encoder,
                         const BaseConfig& cfg, int n_aug, double drop_prob,
                         uint64_t seed, int threads = 1);

}  // namespace repeat

#endif  // REPEAT_BASE_XAI_H_
