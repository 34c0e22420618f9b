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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "repeat/base_xai.h"
#include "repeat/common.h"

namespace repeat {

namespace {

constexpr double kRidgeLambda = 1e-8;

double BinomialCoefficient(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

struct Coalitions {
  std::vector<std::vector<uint8_t>> members;  // excludes empty and full
  bool exact = false;
};

Coalitions BuildCoalitions(int players, int budget, uint64_t seed) {
  Coalitions out;
  if (players < 63 && (uint64_t{1} << players) <= static_cast<uint64_t>(budget)) {
    out.exact = true;
    const uint64_t full = (uint64_t{1} << players) - 1;
    for (uint64_t bits = 1; bits < full; ++bits) {
      std::vector<uint8_t> z(players);
      for (int i = 0; i < players; ++i) z[i] = (bits >> i) & 1;
      out.members.push_back(std::move(z));
    }
    return out;
  }

  Rng rng(seed);
  std::vector<int> order(players);
  for (int c = 0; c < budget - 2; ++c) {
    const int size = 1 + static_cast<int>(UniformIndex(rng, players - 1));
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first `size` entries are a uniform subset.
    for (int i = 0; i < size; ++i) {
      const int j = i + static_cast<int>(UniformIndex(rng, players - i));
      std::swap(order[i], order[j]);
    }
    std::vector<uint8_t> z(players, 0);
    for (int i = 0; i < size; ++i) z[order[i]] = 1;
    out.members.push_back(std::move(z));
  }
  return out;
}

}  // namespace

void ShapConfig::Validate() const {
  Require(patch_grid >= 1 && num_players() >= 2,
          "shap.patch_grid squared must be at least 2");
  Require(num_coalitions >= num_players() + 2,
          "shap.coalitions must be at least patch_grid^2 + 2");
}

ShapResult KernelShapGame(int num_players, const CoalitionGame& game,
                          int num_coalitions, uint64_t seed, int threads) {
  Require(num_players >= 2, "Kernel SHAP needs at least 2 players");
  Require(num_coalitions >= num_players + 2,
          "Kernel SHAP needs at least players + 2 coalitions");
  const int m = num_players;
  const Coalitions coalitions = BuildCoalitions(m, num_coalitions, seed);

  ShapResult result;
  result.exact = coalitions.exact;
  const std::vector<uint8_t> empty(m, 0);
  const std::vector<uint8_t> full(m, 1);
  result.empty_value = game(empty);
  result.full_value = game(full);
  const double total_gain = result.full_value - result.empty_value;

  const std::size_t rows = coalitions.members.size();
  std::vector<double> values(rows);
  ParallelFor(rows, threads,
              [&](std::size_t r) { values[r] = game(coalitions.members[r]); });

  // Eliminate the last player through the efficiency constraint:
  //   v(S) - v0 - z_m * gain = sum_{i<m} (z_i - z_m) phi_i
  const int unknowns = m - 1;
  Eigen::MatrixXd design(rows, unknowns);
  Eigen::VectorXd target(rows);
  Eigen::VectorXd weight(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::vector<uint8_t>& z = coalitions.members[r];
    const int size = std::accumulate(z.begin(), z.end(), 0);
    const double zm = z[m - 1];
    for (int i = 0; i < unknowns; ++i) design(r, i) = z[i] - zm;
    target(r) = values[r] - result.empty_value - zm * total_gain;
    const double s = size;
    weight(r) = coalitions.exact
                    ? (m - 1.0) / (BinomialCoefficient(m, size) * s * (m - s))
                    : (m - 1.0) * (m - 1.0) / (s * (m - s));
  }

  const Eigen::VectorXd sqrt_w = weight.cwiseSqrt();
  const Eigen::MatrixXd weighted_design = sqrt_w.asDiagonal() * design;
  const Eigen::VectorXd weighted_target = sqrt_w.cwiseProduct(target);

  Eigen::VectorXd phi;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(weighted_design);
  if (qr.rank() == unknowns) {
    phi = qr.solve(weighted_target);
  } else {
    result.ridge_fallback = true;
    Eigen::MatrixXd normal = weighted_design.transpose() * weighted_design;
    normal.diagonal().array() += kRidgeLambda;
    phi = normal.ldlt().solve(weighted_design.transpose() * weighted_target);
  }

  result.attributions.assign(phi.data(), phi.data() + unknowns);
  result.attributions.push_back(total_gain - phi.sum());
  return result;
}

std::vector<int> PatchAssignment(int height, int width, int patch_grid) {
  Require(patch_grid >= 1 && patch_grid <= height && patch_grid <= width,
          "patch grid must fit inside the image");
  std::vector<int> patch(static_cast<std::size_t>(height) * width);
  for (int i = 0; i < height; ++i) {
    const int pi = static_cast<int>(static_cast<int64_t>(i) * patch_grid / height);
    for (int j = 0; j < width; ++j) {
      const int pj = static_cast<int>(static_cast<int64_t>(j) * patch_grid / width);
      patch[static_cast<std::size_t>(i) * width + j] = pi * patch_grid + pj;
    }
  }
  return patch;
}

ShapResult KernelShap(const ImageTensor& image, const Encoder& encoder,
                      const ShapConfig& cfg, uint64_t seed, int threads) {
  cfg.Validate();
  Require(image.shape() == encoder.input_shape(),
          "image shape does not match encoder input");
  const std::vector<int> patch =
      PatchAssignment(image.height(), image.width(), cfg.patch_grid);
  const std::size_t plane = image.shape().pixels();
  const int channels = image.channels();

  std::vector<double> baseline(channels, 0.0);
  if (cfg.baseline == ShapBaseline::kMeanPixel) {
    for (int c = 0; c < channels; ++c) {
      const auto ch = image.data().subspan(c * plane, plane);
      baseline[c] = std::accumulate(ch.begin(), ch.end(), 0.0) / plane;
    }
  }

  const Embedding reference = encoder.Encode(image);
  const CoalitionGame game = [&](std::span<const uint8_t> members) {
    std::vector<double> pixels(image.data().begin(), image.data().end());
    for (int c = 0; c < channels; ++c) {
      for (std::size_t p = 0; p < plane; ++p) {
        if (!members[patch[p]]) pixels[c * plane + p] = baseline[c];
      }
    }
    return Dot(encoder.Encode(pixels), reference);
  };
  return KernelShapGame(cfg.num_players(), game, cfg.num_coalitions, seed, threads);
}

ScalarMap AttributionMap(std::span<const double> attributions, int height,
                         int width, int patch_grid) {
  Require(attributions.size() == static_cast<std::size_t>(patch_grid) * patch_grid,
          "one attribution per patch expected");
  const std::vector<int> patch = PatchAssignment(height, width, patch_grid);
  std::vector<double> data(patch.size());
  for (std::size_t p = 0; p < patch.size(); ++p) data[p] = attributions[patch[p]];
  return ScalarMap(height, width, std::move(data));
}

ScalarMap KernelShapImportance(const ImageTensor& image, const Encoder& encoder,
                               const ShapConfig& cfg, uint64_t seed,
                               int threads) {
  const ShapResult r = KernelShap(image, encoder, cfg, seed, threads);
  return AttributionMap(r.attributions, image.height(), image.width(),
                        cfg.patch_grid);
}

std::string_view BaseMethodName(BaseMethod method) {
  return method == BaseMethod::kRelax ? "relax" : "shap";
}

BaseMethod ParseBaseMethod(std::string_view name) {
  if (name == "relax") return BaseMethod::kRelax;
  if (name == "shap" || name == "kernel-shap") return BaseMethod::kKernelShap;
  throw ValidationError("unknown base method '" + std::string(name) + "'");
}

ScalarMap BaseImportance(const ImageTensor& image, const Encoder& encoder,
                         const BaseConfig& cfg, uint64_t seed, int threads) {
  if (cfg.method == BaseMethod::kRelax) {
    return RelaxImportance(image, encoder, cfg.masks, seed, threads);
  }
  return KernelShapImportance(image, encoder, cfg.shap, seed, threads);
}

}  // namespace repeat
