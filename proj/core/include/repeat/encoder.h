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

#ifndef REPEAT_ENCODER_H_
#define REPEAT_ENCODER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repeat/tensor.h"

namespace repeat {

enum class EncoderKind {
  // Unit-norm Gaussian rows over the flattened pixels; no bias.
  kLinearProjection,
  // conv3x3/s2+bias -> ReLU -> conv3x3/s2+bias -> ReLU -> global average pool
  // -> linear head (no bias).
  kToyConv,
};

enum class EncoderInit {
  // N(0, 1/fan_in) weights derived from the seed.
  kGaussian,
  // Toy-conv only: fixed blur, center-surround and edge filters in both conv
  // layers (seeded Gaussian head). Stands in for a trained feature extractor.
  kDesigned,
};

std::string_view EncoderKindName(EncoderKind kind);
EncoderKind ParseEncoderKind(std::string_view name);
std::string_view EncoderInitName(EncoderInit init);
EncoderInit ParseEncoderInit(std::string_view name);

inline constexpr int kMinEmbeddingDim = 8;
inline constexpr int kToyConvMinSide = 8;
inline constexpr int kConv1Channels = 8;
inline constexpr int kConv2Channels = 16;

// Deterministic image -> embedding function. Immutable after construction and
// safe to share between threads.
class Encoder {
 public:
  // Same (kind, init, seed, shape, dim) always yields bit-identical weights.
  static Encoder Build(EncoderKind kind, uint64_t seed, ImageShape input_shape,
                       int dim, EncoderInit init = EncoderInit::kGaussian);

  // Linear projection with caller-supplied weights, row-major dim x
  // input_shape.size(). Rows are used as given (no normalization).
  static Encoder LinearFromWeights(ImageShape input_shape, int dim,
                                   std::vector<double> weights);

  // Toy-conv with caller-supplied weights in the layout described at
  // conv2_offset(). Reports kGaussian as its init.
  static Encoder ToyConvFromWeights(ImageShape input_shape, int dim,
                                    std::vector<double> weights);

  // Same architecture, fresh Gaussian weights from `new_seed`. The receiver
  // is not modified.
  Encoder Randomize(uint64_t new_seed) const;

  Embedding Encode(const ImageTensor& image) const;
  // Channel-major pixels of length input_shape().size(). Values are not
  // range-checked.
  Embedding Encode(std::span<const double> pixels) const;

  EncoderKind kind() const { return kind_; }
  EncoderInit init() const { return init_; }
  uint64_t seed() const { return seed_; }
  const ImageShape& input_shape() const { return shape_; }
  int dim() const { return dim_; }
  std::span<const double> weights() const { return weights_; }

  // Offsets into weights() for the toy-conv layout:
  //   conv1 [kConv1Channels][channels][3][3], then [kConv1Channels] biases
  //   conv2 [kConv2Channels][kConv1Channels][3][3], then [kConv2Channels] biases
  //   head  [dim][kConv2Channels]
  std::size_t conv2_offset() const;
  std::size_t head_offset() const;

 private:
  Encoder(EncoderKind kind, EncoderInit init, uint64_t seed, ImageShape shape,
          int dim, std::vector<double> weights);

  Embedding EncodeLinear(std::span<const double> pixels) const;
  Embedding EncodeToyConv(std::span<const double> pixels) const;

  EncoderKind kind_;
  EncoderInit init_;
  uint64_t seed_;
  ImageShape shape_;
  int dim_;
  std::vector<double> weights_;
};

// Number of toy-conv parameters for the given input channels and dim.
std::size_t ToyConvWeightCount(int channels, int dim);

// <a, b> / (|a| |b|). Returns 0 when either vector is zero.
double CosineSimilarity(const Embedding& a, const Embedding& b);

// Plain inner product.
double Dot(const Embedding& a, const Embedding& b);

// Output side of a 3x3, stride 2, padding 1 convolution.
inline int ConvOutputSide(int side) { return (side - 1) / 2 + 1; }

}  // namespace repeat

#endif  // REPEAT_ENCODER_H_
