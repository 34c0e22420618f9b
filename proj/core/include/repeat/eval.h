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

#ifndef REPEAT_EVAL_H_
#define REPEAT_EVAL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repeat/encoder.h"
#include "repeat/estimator.h"
#include "repeat/tensor.h"

namespace repeat {

// ---------------------------------------------------------------------------
// Complexity and the parameter-randomization sanity check.

struct Complexity {
  double value = 0.0;  // nats
  // The map was all zeros; value is 0 by definition.
  bool all_zero = false;
};

// Shannon entropy of the per-pixel uncertainties used as unnormalized
// weights. Lies in [0, ln(H*W)].
Complexity ComputeComplexity(const ScalarMap& uncertainty);

// Entropy of the 256-bin value histogram of a map; 0 for a constant map.
double DiscreteComplexity(const ScalarMap& map);

struct EmprtScore {
  double score = 0.0;
  double trained_complexity = 0.0;
  double randomized_complexity = 0.0;
};

// Relative rise (C_rand - C_trained) / C_trained of the discrete complexity.
// Throws when C_trained is zero.
EmprtScore EmprtFromMaps(const ScalarMap& trained_uncertainty,
                         const ScalarMap& randomized_uncertainty);

// Explains `image` with `encoder` and with encoder.Randomize(rand_seed) using
// the same configuration and compares the two uncertainty maps.
EmprtScore ComputeEmprt(const ImageTensor& image, const Encoder& encoder,
                        const RepeatConfig& cfg, uint64_t rand_seed);

// Mean pixel uncertainty.
double AggregateUncertainty(const ScalarMap& uncertainty);

// ---------------------------------------------------------------------------
// Two-component 1-D Gaussian mixture and OOD scoring.

inline constexpr double kGmmVarianceFloor = 1e-9;
inline constexpr double kGmmTolerance = 1e-6;
inline constexpr int kGmmMaxIterations = 200;

struct GmmModel {
  std::array<double, 2> weights{0.5, 0.5};
  std::array<double, 2> means{0.0, 0.0};
  std::array<double, 2> variances{1.0, 1.0};
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  // Log-likelihood of the initial parameters followed by one entry per EM
  // step.
  std::vector<double> log_likelihood_history;

  // Index of the component with the larger mean (0 on a tie).
  int HigherMeanComponent() const;
};

// EM from means at the 25th/75th percentiles, pooled variance and equal
// weights; stops when the log-likelihood gain drops below kGmmTolerance or
// after kGmmMaxIterations steps. Needs at least 4 finite scores with nonzero
// spread. Deterministic: there is no random initialization.
GmmModel FitGmm(std::span<const double> scores);

// Posterior component probabilities; each row sums to one.
std::vector<std::array<double, 2>> Responsibilities(const GmmModel& model,
                                                    std::span<const double> scores);

// Posterior probability of the higher-mean component for every score.
std::vector<double> OodPosterior(const GmmModel& model,
                                 std::span<const double> scores);

// Mann-Whitney AUROC with ties counted as one half. `labels` are 0/1 with 1
// the positive class; both classes must be present.
double Auroc(std::span<const double> scores, std::span<const int> labels);

// ---------------------------------------------------------------------------
// Synthetic corpora.

enum class CorpusKind {
  // One bright smooth blob on a dark, nearly flat background.
  kStructured,
  // i.i.d. uniform pixels.
  kNoise,
  // Several faint blobs with per-image contrast jitter over a textured
  // mid-gray background; no single dominant object.
  kFluctuating,
};

std::string_view CorpusKindName(CorpusKind kind);
CorpusKind ParseCorpusKind(std::string_view name);

// Image i depends only on (kind, shape, seed, i).
std::vector<ImageTensor> SynthCorpus(CorpusKind kind, int n, ImageShape shape,
                                     uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments.

enum class UncertaintyMethod {
  kRepeat,
  // RELAX mask-weighted variance of similarities.
  kRelax,
  // Standard deviation across input-dropout copies of the base importance.
  kTtaBase,
};

std::string_view UncertaintyMethodName(UncertaintyMethod method);
UncertaintyMethod ParseUncertaintyMethod(std::string_view name);

struct TtaConfig {
  int n = 10;
  double p = 0.5;
};

struct ExperimentConfig {
  RepeatConfig repeat;
  TtaConfig tta;
  UncertaintyMethod method = UncertaintyMethod::kRepeat;
  // Workers across images; each image runs single-threaded.
  int threads = 1;
};

// Uncertainty map of one image under the configured method and seed.
ScalarMap UncertaintyMap(const ImageTensor& image, const Encoder& encoder,
                         const ExperimentConfig& cfg, uint64_t seed);

struct ImageRecord {
  std::string id;
  int label = 0;  // 1 = out of distribution
  double aggregated_uncertainty = 0.0;
  double complexity = 0.0;
  bool complexity_all_zero = false;
  double ood_posterior = 0.0;
};

struct ScoreHistogram {
  std::vector<double> edges;
  std::vector<int64_t> in_counts;
  std::vector<int64_t> ood_counts;
};

struct OodReport {
  std::vector<ImageRecord> records;
  GmmModel gmm;
  double auroc = 0.0;
  ScoreHistogram histogram;
};

inline constexpr int kOodHistogramBins = 20;

struct LabeledImage {
  std::string id;
  ImageTensor image;
};

// Uncertainty per image (seed SplitSeed(repeat.seed, index) over the
// concatenated corpora), mean aggregation, a GMM fitted on the pooled
// scores, OOD posteriors and the AUROC against the corpus labels.
OodReport RunOodExperiment(std::span<const LabeledImage> in_corpus,
                           std::span<const LabeledImage> ood_corpus,
                           const Encoder& encoder, const ExperimentConfig& cfg);

struct SanityRecord {
  std::string id;
  EmprtScore emprt;
};

struct SanityReport {
  std::vector<SanityRecord> records;
  double median = 0.0;
};

// eMPRT per image against a single randomized encoder.
SanityReport RunSanityExperiment(std::span<const LabeledImage> corpus,
                                 const Encoder& encoder,
                                 const RepeatConfig& cfg, uint64_t rand_seed,
                                 int threads = 1);

struct ComplexityReport {
  std::vector<ImageRecord> records;
  double mean = 0.0;
};

ComplexityReport RunComplexityExperiment(std::span<const LabeledImage> corpus,
                                         const Encoder& encoder,
                                         const ExperimentConfig& cfg);

double Median(std::vector<double> values);

}  // namespace repeat

#endif  // REPEAT_EVAL_H_
