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

#include "repeat/encoder.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "repeat/common.h"

namespace repeat {

namespace {

using Kernel3 = std::array<double, 9>;

// Layer-1 filter bank of the designed encoder and its biases. Channel 6 fires
// below intensity 0.25, channel 7 above 0.5.
constexpr std::array<Kernel3, kConv1Channels> kDesignedConv1 = {{
    {1 / 16., 2 / 16., 1 / 16., 2 / 16., 4 / 16., 2 / 16., 1 / 16., 2 / 16., 1 / 16.},
    {-1 / 8., -1 / 8., -1 / 8., -1 / 8., 1., -1 / 8., -1 / 8., -1 / 8., -1 / 8.},
    {1 / 8., 1 / 8., 1 / 8., 1 / 8., -1., 1 / 8., 1 / 8., 1 / 8., 1 / 8.},
    {-1 / 4., 0., 1 / 4., -2 / 4., 0., 2 / 4., -1 / 4., 0., 1 / 4.},
    {1 / 4., 0., -1 / 4., 2 / 4., 0., -2 / 4., 1 / 4., 0., -1 / 4.},
    {-1 / 4., -2 / 4., -1 / 4., 0., 0., 0., 1 / 4., 2 / 4., 1 / 4.},
    {0., 0., 0., 0., -1., 0., 0., 0., 0.},
    {0., 0., 0., 0., 32., 0., 0., 0., 0.},
}};
constexpr std::array<double, kConv1Channels> kDesignedBias1 = {
    0., -0.02, -0.02, -0.05, -0.05, -0.05, 0.25, -16.};

constexpr Kernel3 kBlur = {1 / 16., 2 / 16., 1 / 16., 2 / 16., 4 / 16.,
                           2 / 16., 1 / 16., 2 / 16., 1 / 16.};
constexpr Kernel3 kCenterSurround = {-1 / 8., -1 / 8., -1 / 8., -1 / 8., 1.,
                                     -1 / 8., -1 / 8., -1 / 8., -1 / 8.};

// Kernel weights followed by one bias per output channel.
std::size_t Conv1Size(int channels) {
  return static_cast<std::size_t>(kConv1Channels) * channels * 9 + kConv1Channels;
}
constexpr std::size_t kConv2Size =
    std::size_t{kConv2Channels} * kConv1Channels * 9 + kConv2Channels;

void FillGaussian(Rng& rng, double scale, std::span<double> out) {
  for (double& w : out) w = StandardNormal(rng) * scale;
}

std::vector<double> GaussianToyConv(uint64_t seed, int channels, int dim) {
  std::vector<double> w(Conv1Size(channels) + kConv2Size +
                        static_cast<std::size_t>(dim) * kConv2Channels);
  std::span<double> all(w);
  Rng rng(seed);
  // Biases share their layer's 1/sqrt(fan_in) scale.
  FillGaussian(rng, 1.0 / std::sqrt(9.0 * channels),
               all.subspan(0, Conv1Size(channels)));
  FillGaussian(rng, 1.0 / std::sqrt(9.0 * kConv1Channels),
               all.subspan(Conv1Size(channels), kConv2Size));
  FillGaussian(rng, 1.0 / std::sqrt(double{kConv2Channels}),
               all.subspan(Conv1Size(channels) + kConv2Size));
  return w;
}

std::vector<double> DesignedToyConv(uint64_t seed, int channels, int dim) {
  std::vector<double> w(Conv1Size(channels) + kConv2Size +
                        static_cast<std::size_t>(dim) * kConv2Channels, 0.0);
  // Layer 1 sees the channel mean.
  const std::size_t bias1 = static_cast<std::size_t>(kConv1Channels) * channels * 9;
  for (int oc = 0; oc < kConv1Channels; ++oc) {
    w[bias1 + oc] = kDesignedBias1[oc];
    for (int ic = 0; ic < channels; ++ic) {
      for (int k = 0; k < 9; ++k) {
        w[(static_cast<std::size_t>(oc) * channels + ic) * 9 + k] =
            kDesignedConv1[oc][k] / channels;
      }
    }
  }
  // Layer 2: outputs 0..7 blur their own input channel, 8..15 apply a
  // center-surround to it.
  const std::size_t base = Conv1Size(channels);
  for (int oc = 0; oc < kConv2Channels; ++oc) {
    const int ic = oc % kConv1Channels;
    const Kernel3& kernel = oc < kConv1Channels ? kBlur : kCenterSurround;
    for (int k = 0; k < 9; ++k) {
      w[base + (static_cast<std::size_t>(oc) * kConv1Channels + ic) * 9 + k] =
          kernel[k];
    }
  }
  Rng rng(seed);
  FillGaussian(rng, 1.0 / std::sqrt(double{kConv2Channels}),
               std::span<double>(w).subspan(base + kConv2Size));
  return w;
}

std::vector<double> GaussianLinear(uint64_t seed, std::size_t inputs, int dim) {
  std::vector<double> w(inputs * dim);
  Rng rng(seed);
  for (int r = 0; r < dim; ++r) {
    std::span<double> row(w.data() + r * inputs, inputs);
    FillGaussian(rng, 1.0 / std::sqrt(static_cast<double>(inputs)), row);
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& v : row) v /= norm;
    }
  }
  return w;
}

// 3x3, stride 2, padding 1 convolution with bias followed by ReLU. `weights`
// holds the kernels followed by the biases.
std::vector<double> ConvReluStride2(std::span<const double> input, int in_channels,
                                    int height, int width,
                                    std::span<const double> weights,
                                    int out_channels) {
  const double* bias =
      weights.data() + static_cast<std::size_t>(out_channels) * in_channels * 9;
  const int out_h = ConvOutputSide(height);
  const int out_w = ConvOutputSide(width);
  std::vector<double> out(static_cast<std::size_t>(out_channels) * out_h * out_w, 0.0);
  for (int oc = 0; oc < out_channels; ++oc) {
    double* dst = out.data() + static_cast<std::size_t>(oc) * out_h * out_w;
    for (int ic = 0; ic < in_channels; ++ic) {
      const double* k =
          weights.data() + (static_cast<std::size_t>(oc) * in_channels + ic) * 9;
      const double* src = input.data() + static_cast<std::size_t>(ic) * height * width;
      for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
          double acc = 0.0;
          for (int ky = 0; ky < 3; ++ky) {
            const int y = 2 * oy + ky - 1;
            if (y < 0 || y >= height) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int x = 2 * ox + kx - 1;
              if (x < 0 || x >= width) continue;
              acc += k[ky * 3 + kx] * src[y * width + x];
            }
          }
          dst[oy * out_w + ox] += acc;
        }
      }
    }
    for (int p = 0; p < out_h * out_w; ++p) dst[p] = std::max(0.0, dst[p] + bias[oc]);
  }
  return out;
}

}  // namespace

std::string_view EncoderKindName(EncoderKind kind) {
  return kind == EncoderKind::kLinearProjection ? "linear" : "conv";
}

EncoderKind ParseEncoderKind(std::string_view name) {
  if (name == "linear" || name == "linear-projection") {
    return EncoderKind::kLinearProjection;
  }
  if (name == "conv" || name == "toy-conv") return EncoderKind::kToyConv;
  throw ValidationError("unknown encoder kind '" + std::string(name) + "'");
}

std::string_view EncoderInitName(EncoderInit init) {
  return init == EncoderInit::kGaussian ? "gaussian" : "designed";
}

EncoderInit ParseEncoderInit(std::string_view name) {
  if (name == "gaussian" || name == "random") return EncoderInit::kGaussian;
  if (name == "designed") return EncoderInit::kDesigned;
  throw ValidationError("unknown encoder init '" + std::string(name) + "'");
}

Encoder::Encoder(EncoderKind kind, EncoderInit init, uint64_t seed,
                 ImageShape shape, int dim, std::vector<double> weights)
    : kind_(kind),
      init_(init),
      seed_(seed),
      shape_(shape),
      dim_(dim),
      weights_(std::move(weights)) {}

Encoder Encoder::Build(EncoderKind kind, uint64_t seed, ImageShape input_shape,
                       int dim, EncoderInit init) {
  Require(input_shape.channels == 1 || input_shape.channels == 3,
          "encoder input must have 1 or 3 channels");
  Require(input_shape.height > 0 && input_shape.width > 0,
          "encoder input shape must be non-empty");
  Require(dim >= kMinEmbeddingDim,
          "embedding dim must be at least " + std::to_string(kMinEmbeddingDim));
  if (kind == EncoderKind::kLinearProjection) {
    Require(init == EncoderInit::kGaussian,
            "designed init is only available for the toy-conv encoder");
    return Encoder(kind, init, seed, input_shape, dim,
                   GaussianLinear(seed, input_shape.size(), dim));
  }
  Require(input_shape.height >= kToyConvMinSide &&
              input_shape.width >= kToyConvMinSide,
          "toy-conv input must be at least 8x8");
  std::vector<double> weights =
      init == EncoderInit::kGaussian
          ? GaussianToyConv(seed, input_shape.channels, dim)
          : DesignedToyConv(seed, input_shape.channels, dim);
  return Encoder(kind, init, seed, input_shape, dim, std::move(weights));
}

Encoder Encoder::LinearFromWeights(ImageShape input_shape, int dim,
                                   std::vector<double> weights) {
  Require(input_shape.channels == 1 || input_shape.channels == 3,
          "encoder input must have 1 or 3 channels");
  Require(input_shape.height > 0 && input_shape.width > 0,
          "encoder input shape must be non-empty");
  Require(dim >= kMinEmbeddingDim,
          "embedding dim must be at least " + std::to_string(kMinEmbeddingDim));
  Require(weights.size() == input_shape.size() * dim,
          "linear weights must have dim * pixels entries");
  for (double w : weights) Require(std::isfinite(w), "encoder weights must be finite");
  return Encoder(EncoderKind::kLinearProjection, EncoderInit::kGaussian, 0,
                 input_shape, dim, std::move(weights));
}

Encoder Encoder::ToyConvFromWeights(ImageShape input_shape, int dim,
                                    std::vector<double> weights) {
  Require(input_shape.channels == 1 || input_shape.channels == 3,
          "encoder input must have 1 or 3 channels");
  Require(input_shape.height >= kToyConvMinSide &&
              input_shape.width >= kToyConvMinSide,
          "toy-conv input must be at least 8x8");
  Require(dim >= kMinEmbeddingDim,
          "embedding dim must be at least " + std::to_string(kMinEmbeddingDim));
  Require(weights.size() == ToyConvWeightCount(input_shape.channels, dim),
          "toy-conv weight count does not match the layout");
  for (double w : weights) Require(std::isfinite(w), "encoder weights must be finite");
  return Encoder(EncoderKind::kToyConv, EncoderInit::kGaussian, 0, input_shape,
                 dim, std::move(weights));
}

std::size_t ToyConvWeightCount(int channels, int dim) {
  return Conv1Size(channels) + kConv2Size +
         static_cast<std::size_t>(dim) * kConv2Channels;
}

Encoder Encoder::Randomize(uint64_t new_seed) const {
  return Build(kind_, new_seed, shape_, dim_, EncoderInit::kGaussian);
}

std::size_t Encoder::conv2_offset() const { return Conv1Size(shape_.channels); }

std::size_t Encoder::head_offset() const {
  return Conv1Size(shape_.channels) + kConv2Size;
}

Embedding Encoder::Encode(const ImageTensor& image) const {
  Require(image.shape() == shape_, "image shape does not match encoder input");
  return Encode(image.data());
}

Embedding Encoder::Encode(std::span<const double> pixels) const {
  Require(pixels.size() == shape_.size(), "pixel count does not match encoder input");
  return kind_ == EncoderKind::kLinearProjection ? EncodeLinear(pixels)
                                                 : EncodeToyConv(pixels);
}

Embedding Encoder::EncodeLinear(std::span<const double> pixels) const {
  const std::size_t n = pixels.size();
  Embedding out;
  out.values.assign(dim_, 0.0);
  for (int r = 0; r < dim_; ++r) {
    const double* row = weights_.data() + r * n;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += row[i] * pixels[i];
    out.values[r] = acc;
  }
  return out;
}

Embedding Encoder::EncodeToyConv(std::span<const double> pixels) const {
  const std::span<const double> w(weights_);
  const int h1 = ConvOutputSide(shape_.height);
  const int w1 = ConvOutputSide(shape_.width);
  const std::vector<double> a1 =
      ConvReluStride2(pixels, shape_.channels, shape_.height, shape_.width,
                      w.subspan(0, conv2_offset()), kConv1Channels);
  const std::vector<double> a2 =
      ConvReluStride2(a1, kConv1Channels, h1, w1,
                      w.subspan(conv2_offset(), kConv2Size), kConv2Channels);

  const int h2 = ConvOutputSide(h1);
  const int w2 = ConvOutputSide(w1);
  const std::size_t plane = static_cast<std::size_t>(h2) * w2;
  std::array<double, kConv2Channels> pooled{};
  for (int c = 0; c < kConv2Channels; ++c) {
    double acc = 0.0;
    for (std::size_t p = 0; p < plane; ++p) acc += a2[c * plane + p];
    pooled[c] = acc / static_cast<double>(plane);
  }

  Embedding out;
  out.values.assign(dim_, 0.0);
  const double* head = weights_.data() + head_offset();
  for (int r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < kConv2Channels; ++c) acc += head[r * kConv2Channels + c] * pooled[c];
    out.values[r] = acc;
  }
  return out;
}

double Dot(const Embedding& a, const Embedding& b) {
  Require(a.dim() == b.dim(), "embedding dimensions differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a.values[i] * b.values[i];
  return acc;
}

double CosineSimilarity(const Embedding& a, const Embedding& b) {
  Require(a.dim() == b.dim(), "embedding dimensions differ");
  const double na = a.Norm();
  const double nb = b.Norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

}  // namespace repeat
