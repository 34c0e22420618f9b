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
#include <string>
#include <vector>

#include "repeat/base_xai.h"
#include "repeat/common.h"
#include "repeat/eval.h"

namespace repeat {

std::string_view UncertaintyMethodName(UncertaintyMethod method) {
  switch (method) {
    case UncertaintyMethod::kRepeat:
      return "repeat";
    case UncertaintyMethod::kRelax:
      return "relax";
    case UncertaintyMethod::kTtaBase:
      return "tta-base";
  }
  return "repeat";
}

UncertaintyMethod ParseUncertaintyMethod(std::string_view name) {
  if (name == "repeat") return UncertaintyMethod::kRepeat;
  if (name == "relax") return UncertaintyMethod::kRelax;
  if (name == "tta-base" || name == "tta") return UncertaintyMethod::kTtaBase;
  throw ValidationError("unknown uncertainty method '" + std::string(name) + "'");
}

ScalarMap UncertaintyMap(const ImageTensor& image, const Encoder& encoder,
                         const ExperimentConfig& cfg, uint64_t seed) {
  switch (cfg.method) {
    case UncertaintyMethod::kRepeat: {
      RepeatConfig rc = cfg.repeat;
      rc.seed = seed;
      return RepeatExplain(image, encoder, rc).uncertainty;
    }
    case UncertaintyMethod::kRelax:
      return RelaxUncertainty(image, encoder, cfg.repeat.base.masks, seed,
                              cfg.repeat.threads);
    case UncertaintyMethod::kTtaBase:
      return TtaUncertainty(image, encoder, cfg.repeat.base, cfg.tta.n, cfg.tta.p,
                            seed, cfg.repeat.threads);
  }
  throw ValidationError("unknown uncertainty method");
}

OodReport RunOodExperiment(std::span<const LabeledImage> in_corpus,
                           std::span<const LabeledImage> ood_corpus,
                           const Encoder& encoder, const ExperimentConfig& cfg) {
  Require(!in_corpus.empty() && !ood_corpus.empty(),
          "both corpora must be non-empty");
  std::vector<const LabeledImage*> all;
  std::vector<int> labels;
  for (const LabeledImage& im : in_corpus) {
    all.push_back(&im);
    labels.push_back(0);
  }
  for (const LabeledImage& im : ood_corpus) {
    all.push_back(&im);
    labels.push_back(1);
  }

  OodReport report;
  report.records.resize(all.size());
  ParallelFor(all.size(), cfg.threads, [&](std::size_t i) {
    const ScalarMap u = UncertaintyMap(all[i]->image, encoder, cfg,
                                       SplitSeed(cfg.repeat.seed, i));
    const Complexity c = ComputeComplexity(u);
    ImageRecord& r = report.records[i];
    r.id = all[i]->id;
    r.label = labels[i];
    r.aggregated_uncertainty = AggregateUncertainty(u);
    r.complexity = c.value;
    r.complexity_all_zero = c.all_zero;
  });

  std::vector<double> scores;
  scores.reserve(all.size());
  for (const ImageRecord& r : report.records) scores.push_back(r.aggregated_uncertainty);
  report.gmm = FitGmm(scores);
  const std::vector<double> posterior = OodPosterior(report.gmm, scores);
  for (std::size_t i = 0; i < posterior.size(); ++i) {
    report.records[i].ood_posterior = posterior[i];
  }
  report.auroc = Auroc(posterior, labels);

  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  ScoreHistogram& hist = report.histogram;
  hist.edges.resize(kOodHistogramBins + 1);
  hist.in_counts.assign(kOodHistogramBins, 0);
  hist.ood_counts.assign(kOodHistogramBins, 0);
  const double range = *hi - *lo;
  for (int b = 0; b <= kOodHistogramBins; ++b) {
    hist.edges[b] = *lo + range * b / kOodHistogramBins;
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    int b = range > 0.0
                ? static_cast<int>((scores[i] - *lo) / range * kOodHistogramBins)
                : 0;
    b = std::clamp(b, 0, kOodHistogramBins - 1);
    ++(labels[i] ? hist.ood_counts : hist.in_counts)[b];
  }
  return report;
}

SanityReport RunSanityExperiment(std::span<const LabeledImage> corpus,
                                 const Encoder& encoder, const RepeatConfig& cfg,
                                 uint64_t rand_seed, int threads) {
  Require(!corpus.empty(), "corpus must be non-empty");
  const Encoder randomized = encoder.Randomize(rand_seed);
  SanityReport report;
  report.records.resize(corpus.size());
  ParallelFor(corpus.size(), threads, [&](std::size_t i) {
    RepeatConfig rc = cfg;
    rc.seed = SplitSeed(cfg.seed, i);
    const RepeatResult trained = RepeatExplain(corpus[i].image, encoder, rc);
    const RepeatResult random = RepeatExplain(corpus[i].image, randomized, rc);
    report.records[i] = {corpus[i].id,
                         EmprtFromMaps(trained.uncertainty, random.uncertainty)};
  });
  std::vector<double> scores;
  for (const SanityRecord& r : report.records) scores.push_back(r.emprt.score);
  report.median = Median(std::move(scores));
  return report;
}

ComplexityReport RunComplexityExperiment(std::span<const LabeledImage> corpus,
                                         const Encoder& encoder,
                                         const ExperimentConfig& cfg) {
  Require(!corpus.empty(), "corpus must be non-empty");
  ComplexityReport report;
  report.records.resize(corpus.size());
  ParallelFor(corpus.size(), cfg.threads, [&](std::size_t i) {
    const ScalarMap u = UncertaintyMap(corpus[i].image, encoder, cfg,
                                       SplitSeed(cfg.repeat.seed, i));
    const Complexity c = ComputeComplexity(u);
    ImageRecord& r = report.records[i];
    r.id = corpus[i].id;
    r.aggregated_uncertainty = AggregateUncertainty(u);
    r.complexity = c.value;
    r.complexity_all_zero = c.all_zero;
  });
  double sum = 0.0;
  for (const ImageRecord& r : report.records) sum += r.complexity;
  report.mean = sum / static_cast<double>(report.records.size());
  return report;
}

}  // namespace repeat
