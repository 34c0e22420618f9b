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
#include <string>
#include <vector>

#include "repeat/common.h"
#include "repeat/eval.h"

namespace repeat {

namespace {

struct Blob {
  double cy, cx, sigma, amplitude;
};

void AddBlob(std::vector<double>& plane, int height, int width, const Blob& b) {
  const double inv = 1.0 / (2.0 * b.sigma * b.sigma);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const double dy = i + 0.5 - b.cy;
      const double dx = j + 0.5 - b.cx;
      plane[static_cast<std::size_t>(i) * width + j] +=
          b.amplitude * std::exp(-(dy * dy + dx * dx) * inv);
    }
  }
}

double Uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformDouble(rng);
}

// Gray-level plane; color images get a per-channel tint of it.
std::vector<double> StructuredPlane(Rng& rng, int height, int width) {
  const double side = std::min(height, width);
  std::vector<double> plane(static_cast<std::size_t>(height) * width,
                            Uniform(rng, 0.05, 0.15));
  for (double& v : plane) v += 0.01 * StandardNormal(rng);
  const Blob object{Uniform(rng, 0.35, 0.65) * height,
                    Uniform(rng, 0.35, 0.65) * width,
                    Uniform(rng, 0.10, 0.16) * side, Uniform(rng, 0.7, 0.85)};
  AddBlob(plane, height, width, object);
  return plane;
}

std::vector<double> FluctuatingPlane(Rng& rng, int height, int width) {
  const double side = std::min(height, width);
  std::vector<double> plane(static_cast<std::size_t>(height) * width,
                            Uniform(rng, 0.35, 0.5));
  const double contrast = Uniform(rng, 0.02, 0.12);
  const int blobs = 3 + static_cast<int>(UniformIndex(rng, 4));
  for (int b = 0; b < blobs; ++b) {
    AddBlob(plane, height, width,
            {Uniform(rng, 0.0, 1.0) * height, Uniform(rng, 0.0, 1.0) * width,
             Uniform(rng, 0.08, 0.2) * side,
             contrast * Uniform(rng, 0.5, 1.5) * (Bernoulli(rng, 0.5) ? 1 : -1)});
  }
  for (double& v : plane) v += 0.08 * StandardNormal(rng);
  return plane;
}

}  // namespace

std::string_view CorpusKindName(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kStructured:
      return "structured";
    case CorpusKind::kNoise:
      return "noise";
    case CorpusKind::kFluctuating:
      return "fluctuating";
  }
  return "structured";
}

CorpusKind ParseCorpusKind(std::string_view name) {
  if (name == "structured") return CorpusKind::kStructured;
  if (name == "noise") return CorpusKind::kNoise;
  if (name == "fluctuating") return CorpusKind::kFluctuating;
  throw ValidationError("unknown corpus kind '" + std::string(name) + "'");
}

std::vector<ImageTensor> SynthCorpus(CorpusKind kind, int n, ImageShape shape,
                                     uint64_t seed) {
  Require(n >= 1, "corpus size must be at least 1");
  Require(shape.channels == 1 || shape.channels == 3, "1 or 3 channels expected");
  Require(shape.height > 0 && shape.width > 0, "corpus image shape must be positive");

  std::vector<ImageTensor> corpus;
  corpus.reserve(n);
  const std::size_t plane_size = shape.pixels();
  for (int i = 0; i < n; ++i) {
    Rng rng(SplitSeed(seed, static_cast<uint64_t>(i)));
    std::vector<double> data(shape.size());
    if (kind == CorpusKind::kNoise) {
      for (double& v : data) v = UniformDouble(rng);
    } else {
      const std::vector<double> plane =
          kind == CorpusKind::kStructured
              ? StructuredPlane(rng, shape.height, shape.width)
              : FluctuatingPlane(rng, shape.height, shape.width);
      for (int c = 0; c < shape.channels; ++c) {
        const double tint = shape.channels == 1 ? 1.0 : Uniform(rng, 0.85, 1.0);
        for (std::size_t p = 0; p < plane_size; ++p) {
          data[c * plane_size + p] = std::clamp(plane[p] * tint, 0.0, 1.0);
        }
      }
    }
    corpus.emplace_back(shape, std::move(data));
  }
  return corpus;
}

}  // namespace repeat
