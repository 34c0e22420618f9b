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

#include "repeat/thresholding.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "repeat/common.h"

namespace repeat {

namespace {

Threshold Fallback(const Histogram& h) {
  return {h.min_value, /*degenerate=*/true, /*not_converged=*/false};
}

// Offset added to values so that every bin center is positive.
double LiShift(const Histogram& h) {
  return h.min_value < 0.0 ? -h.min_value + h.bin_width() : 0.0;
}

double LiUpdateShifted(const Histogram& h, double shift, double t) {
  double n0 = 0.0, s0 = 0.0, n1 = 0.0, s1 = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    const double c = h.BinCenter(b) + shift;
    const double n = static_cast<double>(h.counts[b]);
    if (c < t) {
      n0 += n;
      s0 += n * c;
    } else {
      n1 += n;
      s1 += n * c;
    }
  }
  if (n0 == 0.0 || n1 == 0.0) return t;
  const double mu0 = s0 / n0;
  const double mu1 = s1 / n1;
  if (mu0 == mu1) return t;
  return (mu0 - mu1) / (std::log(mu0) - std::log(mu1));
}

}  // namespace

std::string_view ThresholdMethodName(ThresholdMethod method) {
  switch (method) {
    case ThresholdMethod::kMean:
      return "mean";
    case ThresholdMethod::kOtsu:
      return "otsu";
    case ThresholdMethod::kTriangle:
      return "triangle";
    case ThresholdMethod::kLi:
      return "li";
  }
  return "mean";
}

ThresholdMethod ParseThresholdMethod(std::string_view name) {
  if (name == "mean") return ThresholdMethod::kMean;
  if (name == "otsu") return ThresholdMethod::kOtsu;
  if (name == "triangle") return ThresholdMethod::kTriangle;
  if (name == "li") return ThresholdMethod::kLi;
  throw ValidationError("unknown threshold method '" + std::string(name) + "'");
}

double ThresholdMean(const ScalarMap& values) {
  // Clamping keeps a constant map's threshold exactly at its value.
  return std::clamp(values.Mean(), values.Min(), values.Max());
}

Threshold ThresholdOtsu(const Histogram& h) {
  if (h.degenerate) return Fallback(h);
  // Bin indices stand in for bin centers: the criterion is shift invariant
  // and scales by bin_width^2, so the argmax is unchanged and the class sums
  // stay exact integers.
  int64_t n_total = 0, s_total = 0;
  for (int b = 0; b < h.bins(); ++b) {
    n_total += h.counts[b];
    s_total += h.counts[b] * b;
  }
  int best_edge = 1;
  double best = -1.0;
  int64_t n0 = 0, s0 = 0;
  for (int t = 1; t < h.bins(); ++t) {
    n0 += h.counts[t - 1];
    s0 += h.counts[t - 1] * (t - 1);
    const int64_t n1 = n_total - n0;
    const int64_t s1 = s_total - s0;
    double criterion = 0.0;
    if (n0 > 0 && n1 > 0) {
      const double d = static_cast<double>(n1) * static_cast<double>(s0) -
                       static_cast<double>(n0) * static_cast<double>(s1);
      criterion = d * d / (static_cast<double>(n0) * static_cast<double>(n1));
    }
    if (criterion > best) {
      best = criterion;
      best_edge = t;
    }
  }
  return {h.edges[best_edge], false, false};
}

Threshold ThresholdTriangle(const Histogram& h) {
  if (h.degenerate) return Fallback(h);
  const int bins = h.bins();
  int peak = 0;
  for (int b = 1; b < bins; ++b) {
    if (h.counts[b] > h.counts[peak]) peak = b;
  }
  int first = 0;
  while (h.counts[first] == 0) ++first;
  int last = bins - 1;
  while (h.counts[last] == 0) --last;

  const int tail = (last - peak > peak - first) ? last : first;
  const int lo = std::min(peak, tail);
  const int hi = std::max(peak, tail);
  const int64_t dx = tail - peak;
  const int64_t dy = h.counts[tail] - h.counts[peak];

  int best_bin = lo;
  int64_t best = -1;
  for (int b = lo; b <= hi; ++b) {
    // |cross product| is the distance to the line up to a common factor.
    const int64_t cross =
        dx * (h.counts[b] - h.counts[peak]) - dy * static_cast<int64_t>(b - peak);
    const int64_t distance = std::llabs(cross);
    if (distance > best) {
      best = distance;
      best_bin = b;
    }
  }
  return {h.BinCenter(best_bin), false, false};
}

double LiUpdate(const Histogram& h, double t) {
  const double shift = LiShift(h);
  return LiUpdateShifted(h, shift, t + shift) - shift;
}

Threshold ThresholdLi(const Histogram& h) {
  if (h.degenerate) return Fallback(h);
  const double shift = LiShift(h);
  const double tolerance = 0.5 * h.bin_width();

  double weighted = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    weighted += static_cast<double>(h.counts[b]) * (h.BinCenter(b) + shift);
  }
  double t = weighted / static_cast<double>(h.total);
  for (int iter = 0; iter < kLiMaxIterations; ++iter) {
    const double next = LiUpdateShifted(h, shift, t);
    if (std::abs(next - t) < tolerance) return {t - shift, false, false};
    t = next;
  }
  return {t - shift, false, true};
}

Threshold ComputeThreshold(const ScalarMap& map, ThresholdMethod method) {
  if (method == ThresholdMethod::kMean) {
    return {ThresholdMean(map), map.Min() == map.Max(), false};
  }
  const Histogram h = ComputeHistogram(map.data(), kDefaultHistogramBins);
  switch (method) {
    case ThresholdMethod::kOtsu:
      return ThresholdOtsu(h);
    case ThresholdMethod::kTriangle:
      return ThresholdTriangle(h);
    case ThresholdMethod::kLi:
      return ThresholdLi(h);
    case ThresholdMethod::kMean:
      break;
  }
  return {ThresholdMean(map), false, false};
}

BinaryMask Binarize(const ScalarMap& map, double tau) {
  BinaryMask mask(map.height(), map.width());
  for (std::size_t k = 0; k < map.size(); ++k) mask.Set(k, map[k] >= tau);
  return mask;
}

}  // namespace repeat
