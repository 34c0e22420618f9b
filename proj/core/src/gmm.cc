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
#include <numbers>
#include <vector>

#include "repeat/common.h"
#include "repeat/eval.h"

namespace repeat {

namespace {

double LogNormalPdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

// log(w_c N(x | c)) for both components.
std::array<double, 2> LogJoint(const GmmModel& m, double x) {
  return {std::log(m.weights[0]) + LogNormalPdf(x, m.means[0], m.variances[0]),
          std::log(m.weights[1]) + LogNormalPdf(x, m.means[1], m.variances[1])};
}

double LogSumExp(const std::array<double, 2>& v) {
  const double hi = std::max(v[0], v[1]);
  return hi + std::log(std::exp(v[0] - hi) + std::exp(v[1] - hi));
}

double LogLikelihood(const GmmModel& m, std::span<const double> xs) {
  double ll = 0.0;
  for (double x : xs) ll += LogSumExp(LogJoint(m, x));
  return ll;
}

// Linear-interpolated percentile of sorted data, q in [0, 1].
double Percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

int GmmModel::HigherMeanComponent() const { return means[1] > means[0] ? 1 : 0; }

GmmModel FitGmm(std::span<const double> scores) {
  Require(scores.size() >= 4, "GMM fit needs at least 4 scores");
  for (double x : scores) Require(std::isfinite(x), "GMM scores must be finite");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  Require(sorted.front() < sorted.back(), "GMM scores have zero spread");

  const double n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (double x : scores) mean += x;
  mean /= n;
  double pooled = 0.0;
  for (double x : scores) pooled += (x - mean) * (x - mean);
  pooled = std::max(pooled / n, kGmmVarianceFloor);

  GmmModel m;
  m.means = {Percentile(sorted, 0.25), Percentile(sorted, 0.75)};
  m.variances = {pooled, pooled};
  m.weights = {0.5, 0.5};
  m.log_likelihood = LogLikelihood(m, scores);
  m.log_likelihood_history.push_back(m.log_likelihood);

  std::vector<std::array<double, 2>> resp(scores.size());
  for (int iter = 0; iter < kGmmMaxIterations; ++iter) {
    resp = Responsibilities(m, scores);
    GmmModel next = m;
    for (int c = 0; c < 2; ++c) {
      double nk = 0.0, sum = 0.0;
      for (std::size_t i = 0; i < scores.size(); ++i) {
        nk += resp[i][c];
        sum += resp[i][c] * scores[i];
      }
      // A component that lost all mass keeps its previous parameters.
      if (nk <= 0.0) continue;
      const double mu = sum / nk;
      double var = 0.0;
      for (std::size_t i = 0; i < scores.size(); ++i) {
        const double d = scores[i] - mu;
        var += resp[i][c] * d * d;
      }
      next.means[c] = mu;
      next.variances[c] = std::max(var / nk, kGmmVarianceFloor);
      next.weights[c] = nk / n;
    }
    const double total = next.weights[0] + next.weights[1];
    next.weights[0] /= total;
    next.weights[1] = 1.0 - next.weights[0];

    next.log_likelihood = LogLikelihood(next, scores);
    const double gain = next.log_likelihood - m.log_likelihood;
    m.means = next.means;
    m.variances = next.variances;
    m.weights = next.weights;
    m.log_likelihood = next.log_likelihood;
    m.log_likelihood_history.push_back(m.log_likelihood);
    m.iterations = iter + 1;
    if (gain < kGmmTolerance) {
      m.converged = true;
      break;
    }
  }
  return m;
}

std::vector<std::array<double, 2>> Responsibilities(const GmmModel& model,
                                                    std::span<const double> scores) {
  std::vector<std::array<double, 2>> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto joint = LogJoint(model, scores[i]);
    const double norm = LogSumExp(joint);
    out[i][0] = std::exp(joint[0] - norm);
    out[i][1] = 1.0 - out[i][0];
  }
  return out;
}

std::vector<double> OodPosterior(const GmmModel& model,
                                 std::span<const double> scores) {
  const int high = model.HigherMeanComponent();
  const auto resp = Responsibilities(model, scores);
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = resp[i][high];
  return out;
}

}  // namespace repeat
