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

#include "repeat/tensor.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "repeat/common.h"

namespace repeat {

namespace {

void ValidateShape(const ImageShape& shape) {
  Require(shape.channels == 1 || shape.channels == 3,
          "image must have 1 or 3 channels, got " +
              std::to_string(shape.channels));
  Require(shape.height > 0 && shape.width > 0,
          "image dimensions must be positive");
}

void ValidateGrid(int height, int width) {
  Require(height > 0 && width > 0, "map dimensions must be positive");
}

}  // namespace

ImageTensor::ImageTensor(ImageShape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  ValidateShape(shape_);
  Require(data_.size() == shape_.size(),
          "image data length does not match its shape");
  for (double v : data_) {
    Require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
            "image values must be finite and in [0, 1]");
  }
}

ImageTensor::ImageTensor(ImageShape shape, double fill) : shape_(shape) {
  ValidateShape(shape_);
  Require(fill >= 0.0 && fill <= 1.0, "image fill must be in [0, 1]");
  data_.assign(shape_.size(), fill);
}

ScalarMap::ScalarMap(int height, int width, double fill)
    : height_(height), width_(width) {
  ValidateGrid(height, width);
  Require(std::isfinite(fill), "map values must be finite");
  data_.assign(static_cast<std::size_t>(height) * width, fill);
}

ScalarMap::ScalarMap(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  ValidateGrid(height, width);
  Require(data_.size() == static_cast<std::size_t>(height) * width,
          "map data length does not match its shape");
  for (double v : data_) Require(std::isfinite(v), "map values must be finite");
}

double ScalarMap::Min() const {
  return *std::min_element(data_.begin(), data_.end());
}

double ScalarMap::Max() const {
  return *std::max_element(data_.begin(), data_.end());
}

double ScalarMap::Mean() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0) /
         static_cast<double>(data_.size());
}

BinaryMask::BinaryMask(int height, int width, uint8_t fill)
    : height_(height), width_(width) {
  ValidateGrid(height, width);
  Require(fill <= 1, "mask values must be 0 or 1");
  data_.assign(static_cast<std::size_t>(height) * width, fill);
}

BinaryMask::BinaryMask(int height, int width, std::vector<uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  ValidateGrid(height, width);
  Require(data_.size() == static_cast<std::size_t>(height) * width,
          "mask data length does not match its shape");
  for (uint8_t v : data_) Require(v <= 1, "mask values must be 0 or 1");
}

std::size_t BinaryMask::CountOnes() const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1));
}

double BinaryMask::ForegroundFraction() const {
  return static_cast<double>(CountOnes()) / static_cast<double>(data_.size());
}

double Embedding::Norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

int Histogram::OccupiedBins() const {
  return static_cast<int>(
      std::count_if(counts.begin(), counts.end(), [](int64_t c) { return c > 0; }));
}

Histogram ComputeHistogram(std::span<const double> values, int bins) {
  Require(!values.empty(), "histogram of an empty sequence");
  Require(bins >= 2, "histogram needs at least 2 bins");
  for (double v : values) Require(std::isfinite(v), "histogram values must be finite");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  Histogram h;
  h.min_value = *lo_it;
  h.max_value = *hi_it;
  h.total = static_cast<int64_t>(values.size());
  h.counts.assign(bins, 0);
  h.edges.resize(bins + 1);

  if (h.min_value == h.max_value) {
    // Zero range: unit-width bins starting at the value keep the edges
    // strictly increasing; all mass sits in bin 0.
    h.degenerate = true;
    const double step = std::max(std::abs(h.min_value), 1.0) / bins;
    for (int b = 0; b <= bins; ++b) h.edges[b] = h.min_value + b * step;
    h.counts[0] = h.total;
    return h;
  }

  const double lo = h.min_value;
  const double range = h.max_value - h.min_value;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + range * b / bins;
  h.edges[bins] = h.max_value;
  for (double v : values) {
    const int b = static_cast<int>((v - lo) / range * bins);
    ++h.counts[std::clamp(b, 0, bins - 1)];
  }
  return h;
}

double ShannonEntropy(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    Require(std::isfinite(w) && w >= 0.0, "entropy weights must be non-negative");
    sum += w;
  }
  Require(sum > 0.0, "entropy of an all-zero weight vector");
  double entropy = 0.0;
  for (double w : weights) {
    if (w > 0.0) {
      const double p = w / sum;
      entropy -= p * std::log(p);
    }
  }
  return std::max(0.0, entropy);
}

double ShannonEntropy(std::span<const int64_t> counts) {
  std::vector<double> weights(counts.begin(), counts.end());
  return ShannonEntropy(weights);
}

std::vector<double> ResizePlane(std::span<const double> src, int src_height,
                                int src_width, int dst_height, int dst_width) {
  Require(src_height > 0 && src_width > 0 && dst_height > 0 && dst_width > 0,
          "resize dimensions must be positive");
  Require(src.size() == static_cast<std::size_t>(src_height) * src_width,
          "resize source size mismatch");

  struct Tap {
    int lo, hi;
    double frac;
  };
  auto taps = [](int src_n, int dst_n) {
    std::vector<Tap> out(dst_n);
    const double scale = static_cast<double>(src_n) / dst_n;
    for (int d = 0; d < dst_n; ++d) {
      double pos = (d + 0.5) * scale - 0.5;
      pos = std::clamp(pos, 0.0, static_cast<double>(src_n - 1));
      const int lo = static_cast<int>(std::floor(pos));
      const int hi = std::min(lo + 1, src_n - 1);
      out[d] = {lo, hi, pos - lo};
    }
    return out;
  };
  const std::vector<Tap> rows = taps(src_height, dst_height);
  const std::vector<Tap> cols = taps(src_width, dst_width);

  std::vector<double> dst(static_cast<std::size_t>(dst_height) * dst_width);
  for (int i = 0; i < dst_height; ++i) {
    const Tap& r = rows[i];
    const double* top = src.data() + static_cast<std::size_t>(r.lo) * src_width;
    const double* bottom = src.data() + static_cast<std::size_t>(r.hi) * src_width;
    for (int j = 0; j < dst_width; ++j) {
      const Tap& c = cols[j];
      const double upper = top[c.lo] + (top[c.hi] - top[c.lo]) * c.frac;
      const double lower = bottom[c.lo] + (bottom[c.hi] - bottom[c.lo]) * c.frac;
      dst[static_cast<std::size_t>(i) * dst_width + j] =
          upper + (lower - upper) * r.frac;
    }
  }
  return dst;
}

ImageTensor ResizeBilinear(const ImageTensor& image, int height, int width) {
  Require(height > 0 && width > 0, "target size must be positive");
  if (image.height() == height && image.width() == width) return image;
  const std::size_t plane = image.shape().pixels();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(image.channels()) * height * width);
  for (int c = 0; c < image.channels(); ++c) {
    auto resized = ResizePlane(image.data().subspan(c * plane, plane),
                               image.height(), image.width(), height, width);
    for (double v : resized) out.push_back(std::clamp(v, 0.0, 1.0));
  }
  return ImageTensor({image.channels(), height, width}, std::move(out));
}

}  // namespace repeat
