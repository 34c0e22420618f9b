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

#ifndef REPEAT_TENSOR_H_
#define REPEAT_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace repeat {

// Bin count used by every histogram-based threshold and by the discrete
// complexity functional.
inline constexpr int kDefaultHistogramBins = 256;

// Shape of a channel-major image.
struct ImageShape {
  int channels = 1;
  int height = 0;
  int width = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(channels) * height * width;
  }
  std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }
  friend bool operator==(const ImageShape&, const ImageShape&) = default;
};

// Image with 1 or 3 channels and values in [0, 1], channel-major row-major.
class ImageTensor {
 public:
  ImageTensor() = default;
  // Validates the shape and that every value is finite and in [0, 1].
  ImageTensor(ImageShape shape, std::vector<double> data);
  // Constant image.
  ImageTensor(ImageShape shape, double fill);

  const ImageShape& shape() const { return shape_; }
  int channels() const { return shape_.channels; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  std::span<const double> data() const { return data_; }

  double at(int c, int i, int j) const {
    return data_[(static_cast<std::size_t>(c) * shape_.height + i) *
                     shape_.width + j];
  }

 private:
  ImageShape shape_;
  std::vector<double> data_;
};

// H x W grid of finite reals: base importance, final importance, uncertainty
// or weights.
class ScalarMap {
 public:
  ScalarMap() = default;
  ScalarMap(int height, int width, double fill = 0.0);
  // Validates size and finiteness.
  ScalarMap(int height, int width, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  std::span<const double> data() const { return data_; }
  std::span<double> mutable_data() { return data_; }

  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * width_ + j];
  }
  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * width_ + j];
  }
  double operator[](std::size_t k) const { return data_[k]; }
  double& operator[](std::size_t k) { return data_[k]; }

  double Min() const;
  double Max() const;
  double Mean() const;

  friend bool operator==(const ScalarMap&, const ScalarMap&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

// H x W grid of {0, 1}.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width, uint8_t fill = 0);
  // Validates that every element is exactly 0 or 1.
  BinaryMask(int height, int width, std::vector<uint8_t> data);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  std::span<const uint8_t> data() const { return data_; }

  uint8_t operator[](std::size_t k) const { return data_[k]; }
  void Set(std::size_t k, bool on) { data_[k] = on ? 1 : 0; }

  std::size_t CountOnes() const;
  double ForegroundFraction() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<uint8_t> data_;
};

// Representation vector produced by an encoder.
struct Embedding {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  double Norm() const;
};

// Equal-width histogram over [min, max] of the source values.
struct Histogram {
  std::vector<double> edges;    // B + 1 strictly increasing values
  std::vector<int64_t> counts;  // B bins
  int64_t total = 0;
  // All source values were identical. Everything sits in bin 0 and
  // `min_value` is that value.
  bool degenerate = false;
  double min_value = 0.0;
  double max_value = 0.0;

  int bins() const { return static_cast<int>(counts.size()); }
  double bin_width() const { return edges[1] - edges[0]; }
  double BinCenter(int b) const { return 0.5 * (edges[b] + edges[b + 1]); }
  int OccupiedBins() const;
};

// Builds a histogram with `bins` equal-width bins over [min, max]. The
// maximum value goes to the last bin. Identical inputs produce a degenerate
// histogram (no error).
Histogram ComputeHistogram(std::span<const double> values,
                           int bins = kDefaultHistogramBins);

// Shannon entropy in nats of non-negative weights, normalized to sum to one.
// 0 * ln 0 is taken as 0.
double ShannonEntropy(std::span<const double> weights);
double ShannonEntropy(std::span<const int64_t> counts);

// Bilinear resampling of a single plane with half-pixel centers and edge
// clamping.
std::vector<double> ResizePlane(std::span<const double> src, int src_height,
                                int src_width, int dst_height, int dst_width);

// Per-channel bilinear resize.
ImageTensor ResizeBilinear(const ImageTensor& image, int height, int width);

}  // namespace repeat

#endif  // REPEAT_TENSOR_H_
