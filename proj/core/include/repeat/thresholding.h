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

#ifndef REPEAT_THRESHOLDING_H_
#define REPEAT_THRESHOLDING_H_

#include <string_view>

#include "repeat/tensor.h"

namespace repeat {

// Histogram-based foreground/background threshold selection. Foreground is
// every value >= the threshold.
enum class ThresholdMethod { kMean, kOtsu, kTriangle, kLi };

std::string_view ThresholdMethodName(ThresholdMethod method);
ThresholdMethod ParseThresholdMethod(std::string_view name);

struct Threshold {
  double value = 0.0;
  // The histogram had a single value; `value` is that value.
  bool degenerate = false;
  // Li only: the fixed-point iteration hit its iteration cap.
  bool not_converged = false;
};

// Arithmetic mean of the raw values.
double ThresholdMean(const ScalarMap& values);

// Otsu: the interior bin edge maximizing the between-class variance
// w0 w1 (mu0 - mu1)^2, with bins below the edge in class 0. Ties go to the
// lowest edge.
Threshold ThresholdOtsu(const Histogram& h);

// Triangle (Zack): a line from the peak bin to the farthest nonzero bin on
// the longer side (the lower side on a tie); returns the center of the bin
// between them with the largest perpendicular distance to that line, lowest
// such bin on ties.
Threshold ThresholdTriangle(const Histogram& h);

// Li minimum cross entropy by the Li-Tam iteration
//   t' = (mu0(t) - mu1(t)) / (ln mu0(t) - ln mu1(t))
// on bin centers (class 0: centers < t), started from the histogram mean.
// Stops at the first iterate whose update moves it by less than half a bin
// width and returns that iterate, or gives up after kLiMaxIterations with
// `not_converged` set. Histograms reaching zero or below are shifted to a
// positive support and the result is shifted back.
Threshold ThresholdLi(const Histogram& h);

inline constexpr int kLiMaxIterations = 100;

// One Li update t -> t' on the (possibly shifted) support. Exposed so callers
// can check the fixed-point residual of a returned threshold. Returns t when
// either class is empty.
double LiUpdate(const Histogram& h, double t);

// Histograms `map` with kDefaultHistogramBins bins where needed and applies
// `method`.
Threshold ComputeThreshold(const ScalarMap& map, ThresholdMethod method);

// 1 where value >= tau, else 0.
BinaryMask Binarize(const ScalarMap& map, double tau);

}  // namespace repeat

#endif  // REPEAT_THRESHOLDING_H_
