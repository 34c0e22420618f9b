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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "repeat/base_xai.h"
#include "repeat/common.h"
#include "repeat/encoder.h"
#include "repeat/estimator.h"
#include "repeat/eval.h"
#include "repeat/thresholding.h"
#include "repeat_cli/cli.h"
#include "test_util.h"

namespace repeat {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

// Random base maps on a coarse value lattice so that ties, all-above and
// all-below pixels occur.
ScalarMap LatticeMap(std::mt19937_64& rng, int h, int w) {
  std::uniform_int_distribution<int> level(-2, 6);
  std::vector<double> v(static_cast<std::size_t>(h) * w);
  for (double& x : v) x = level(rng) * 0.25;
  return ScalarMap(h, w, std::move(v));
}

Outcome BernoulliAlgebra() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> k_d(2, 12), side_d(2, 8);
  int checked = 0, boundary = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = k_d(rng), h = side_d(rng), w = side_d(rng);
    std::vector<ScalarMap> maps;
    for (int r = 0; r < k; ++r) {
      ScalarMap m = trial % 2 ? LatticeMap(rng, h, w) : testing::RandomMap(rng, h, w, -0.2, 1.0);
      if (m.Max() <= 0.0) m.mutable_data()[0] = 1.0;
      maps.push_back(std::move(m));
    }
    std::vector<BinaryMask> ind;
    std::vector<ScalarMap> weights;
    for (const ScalarMap& m : maps) {
      ind.push_back(SampleBernoulli(m, ThresholdMethod::kMean).indicator);
      weights.push_back(ComputeWeightMap(m).weights);
    }
    const ScalarMap p = AggregateImportance(ind, weights);
    const ScalarMap u = BernoulliUncertainty(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      ++checked;
      if (!(p[i] >= 0.0 && p[i] <= 1.0)) return {false, "p_bar outside [0,1]"};
      if (u[i] != p[i] * (1.0 - p[i])) return {false, "U != p(1-p)"};
      if (u[i] > 0.25) return {false, "U > 0.25"};
      const bool edge = p[i] == 0.0 || p[i] == 1.0;
      boundary += edge;
      if ((u[i] == 0.0) != edge) return {false, "U = 0 without p in {0,1}"};
    }
  }
  const double t = Seconds(start);
  return {t < 10.0 && boundary > 0,
          Format("%.0f pixels, %.0f at p in {0,1}, %.2f s", checked, boundary, t)};
}

Outcome AlternatingPixel() {
  const ScalarMap even(1, 4, {1.0, 0.5, 0.5, 0.5});
  const ScalarMap odd(1, 4, {0.1, 1.0, 1.0, 1.0});
  for (int k : {2, 4, 10, 100}) {
    int r = 0;
    const BaseSampler s = [&](uint64_t) { return r++ % 2 ? odd : even; };
    const RepeatResult res = RepeatFromBase(s, k, ThresholdMethod::kMean, 0);
    if (res.importance[0] != 0.5 || res.uncertainty[0] != 0.25) {
      return {false, Format("K=%.0f: p=%.17g U=%.17g", k, res.importance[0],
                            res.uncertainty[0])};
    }
  }
  return {true, "p_bar = 0.5, U = 0.25 for K in {2,4,10,100}"};
}

Outcome ScaleInvariance() {
  std::mt19937_64 rng(3);
  const double scales[] = {0.1, 3.0, 42.0};
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScalarMap> maps;
    for (int r = 0; r < 10; ++r) maps.push_back(testing::RandomMap(rng, 16, 16, -0.3, 1.0));
    int r1 = 0, r2 = 0;
    const RepeatResult plain = RepeatFromBase(
        [&](uint64_t) { return maps[r1++]; }, 10, ThresholdMethod::kMean, 0);
    const RepeatResult scaled = RepeatFromBase(
        [&](uint64_t) {
          ScalarMap m = maps[r2];
          for (double& v : m.mutable_data()) v *= scales[r2 % 3];
          ++r2;
          return m;
        },
        10, ThresholdMethod::kMean, 0);
    for (std::size_t i = 0; i < plain.importance.size(); ++i) {
      worst = std::max({worst, std::abs(plain.importance[i] - scaled.importance[i]),
                        std::abs(plain.uncertainty[i] - scaled.uncertainty[i])});
    }
  }
  return {worst <= 1e-9, Format("max deviation %.3g over 200 runs", worst)};
}

Outcome ThresholdOracles() {
  std::mt19937_64 rng(4);
  int otsu_bad = 0, tri_bad = 0, li_bad = 0;
  double mean_err = 0.0, li_worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Histogram h = testing::RandomHistogram(rng);
    otsu_bad += ThresholdOtsu(h).value != testing::OtsuOracle(h);
    tri_bad += ThresholdTriangle(h).value != testing::TriangleOracle(h);
    const Threshold li = ThresholdLi(h);
    const double residual = std::abs(LiUpdate(h, li.value) - li.value) / h.bin_width();
    li_worst = std::max(li_worst, residual);
    li_bad += li.not_converged || residual >= 0.5;
    const ScalarMap m = testing::RandomMap(rng, 13, 11, -1.0, 2.0);
    long double sum = 0.0L;
    for (double v : m.data()) sum += v;
    mean_err = std::max(mean_err, std::abs(ThresholdMean(m) -
                                           static_cast<double>(sum / m.size())));
  }
  std::ostringstream d;
  d << "otsu mismatches " << otsu_bad << ", triangle mismatches " << tri_bad
    << ", li residual max " << li_worst << " bins (" << li_bad
    << " over 0.5), mean err " << mean_err;
  return {otsu_bad == 0 && tri_bad == 0 && li_bad == 0 && mean_err <= 1e-12, d.str()};
}

Outcome ShapExactness() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0, eff = 0.0, null_worst = 0.0;
  for (int m = 2; m <= 4; ++m) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> v(1 << m);
      const int null_player = trial % m;
      for (int s = 0; s < (1 << m); ++s) {
        v[s] = (s & (1 << null_player)) ? v[s & ~(1 << null_player)] : n(rng);
      }
      const ShapResult r = KernelShapGame(
          m, [&](std::span<const uint8_t> mem) { return v[testing::Mask(mem)]; },
          1 << m, trial);
      if (!r.exact) return {false, "full enumeration not used"};
      const std::vector<double> phi = testing::ExactShapley(m, v);
      double sum = 0.0;
      for (int i = 0; i < m; ++i) {
        worst = std::max(worst, std::abs(r.attributions[i] - phi[i]));
        sum += r.attributions[i];
      }
      eff = std::max(eff, std::abs(sum - (v.back() - v.front())));
      null_worst = std::max(null_worst, std::abs(r.attributions[null_player]));
    }
  }
  // Image game on a 2x2 patch grid.
  const ImageShape shape{1, 8, 8};
  const Encoder enc = Encoder::Build(EncoderKind::kToyConv, 3, shape, 16);
  const ImageTensor x = testing::RandomImage(rng, shape);
  const std::vector<int> patch = PatchAssignment(8, 8, 2);
  const Embedding h = enc.Encode(x);
  std::vector<double> v(16);
  for (int s = 0; s < 16; ++s) {
    std::vector<double> px(x.data().begin(), x.data().end());
    for (int p = 0; p < 64; ++p) {
      if (!(s & (1 << patch[p]))) px[p] = 0.0;
    }
    v[s] = Dot(enc.Encode(px), h);
  }
  const ShapResult r = KernelShap(x, enc, {2, 16, ShapBaseline::kZero}, 0);
  const std::vector<double> phi = testing::ExactShapley(4, v);
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(r.attributions[i] - phi[i]));
  return {r.exact && worst <= 1e-6 && eff <= 1e-6 && null_worst <= 1e-6,
          Format("max |phi - exact| %.3g, efficiency gap %.3g, null player %.3g",
                 worst, eff, null_worst)};
}

Outcome EstimatorConsistency() {
  constexpr int kK = 10000;
  const double ps[] = {0.1, 0.5, 0.9};
  int passes = 0, runs = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    for (int j = 0; j < 3; ++j) {
      Rng rng(SplitSeed(seed, j));
      std::vector<BinaryMask> ind;
      std::vector<ScalarMap> w(kK, ScalarMap(1, 1, 1.0));
      for (int k = 0; k < kK; ++k) {
        BinaryMask m(1, 1);
        m.Set(0, Bernoulli(rng, ps[j]));
        ind.push_back(std::move(m));
      }
      const double p_bar = AggregateImportance(ind, w)[0];
      ++runs;
      passes += std::abs(p_bar - ps[j]) <= 3.0 * std::sqrt(ps[j] * (1 - ps[j]) / kK);
    }
  }
  const double rate = static_cast<double>(passes) / runs;
  return {rate >= 0.99, Format("pass rate %.4f over %.0f runs", rate, runs)};
}

std::vector<LabeledImage> Labeled(CorpusKind kind, int n, ImageShape shape, uint64_t seed) {
  std::vector<LabeledImage> out;
  const auto images = SynthCorpus(kind, n, shape, seed);
  for (int i = 0; i < n; ++i) out.push_back({std::to_string(i), images[i]});
  return out;
}

const ImageShape kShape{1, 32, 32};

Encoder DesignedEncoder() {
  return Encoder::Build(EncoderKind::kToyConv, 7, kShape, 32, EncoderInit::kDesigned);
}

Outcome OodAnalogue() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.threads = DefaultThreadCount();
  const Encoder enc = DesignedEncoder();
  const auto in = Labeled(CorpusKind::kStructured, 100, kShape, 1);
  const double auroc =
      RunOodExperiment(in, Labeled(CorpusKind::kFluctuating, 100, kShape, 2), enc, cfg).auroc;
  const double null_auroc =
      RunOodExperiment(in, Labeled(CorpusKind::kStructured, 100, kShape, 11), enc, cfg).auroc;
  const double t = Seconds(start);
  return {auroc >= 0.95 && null_auroc >= 0.4 && null_auroc <= 0.6 && t < 300.0,
          Format("AUROC %.3f, null AUROC %.3f, %.1f s", auroc, null_auroc, t)};
}

Outcome SanityAnalogue() {
  const Encoder enc = DesignedEncoder();
  const auto corpus = Labeled(CorpusKind::kStructured, 50, kShape, 1);
  RepeatConfig rc;
  const double designed = RunSanityExperiment(corpus, enc, rc, 999, DefaultThreadCount()).median;
  std::vector<double> self(corpus.size());
  ParallelFor(corpus.size(), DefaultThreadCount(), [&](std::size_t i) {
    const Encoder a = Encoder::Build(EncoderKind::kToyConv, SplitSeed(100, i), kShape, 32);
    RepeatConfig c;
    c.seed = SplitSeed(5, i);
    self[i] = ComputeEmprt(corpus[i].image, a, c, SplitSeed(200, i)).score;
  });
  const double self_median = Median(self);
  std::mt19937_64 rng(8);
  const ScalarMap m = testing::RandomMap(rng, 16, 16, 0.0, 0.25);
  const double identical = EmprtFromMaps(m, m).score;
  return {designed > self_median && std::abs(self_median) < 0.05 && identical == 0.0,
          Format("designed-vs-randomized median %.4f, self-vs-self median %.4f, "
                 "identical %.1f", designed, self_median, identical)};
}

Outcome GmmAuroc() {
  Rng rng(9);
  std::vector<double> x;
  for (int i = 0; i < 200; ++i) x.push_back(0.1 * StandardNormal(rng));
  for (int i = 0; i < 200; ++i) x.push_back(10.0 + 0.1 * StandardNormal(rng));
  const GmmModel g = FitGmm(x);
  const double lo = std::min(g.means[0], g.means[1]);
  const double hi = std::max(g.means[0], g.means[1]);
  bool monotone = true;
  for (std::size_t i = 1; i < g.log_likelihood_history.size(); ++i) {
    const double prev = g.log_likelihood_history[i - 1];
    monotone &= g.log_likelihood_history[i] >= prev - 1e-9 * std::abs(prev);
  }
  const std::vector<double> s = {1, 2, 2, 3};
  const std::vector<int> l = {0, 1, 0, 1};
  double pairs = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (l[i] == 1 && l[j] == 0) pairs += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  const double auroc = Auroc(s, l);
  return {std::abs(lo) <= 0.1 && std::abs(hi - 10.0) <= 0.1 && monotone &&
              auroc == 0.875 && pairs / 4 == 0.875,
          Format("means %.4f / %.4f, AUROC %.4f", lo, hi, auroc)};
}

Outcome ComplexityBounds() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> side(2, 32);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int h = side(rng), w = side(rng);
    const double bound = std::log(static_cast<double>(h) * w);
    const ScalarMap u = testing::RandomMap(rng, h, w, 0.0, 0.25);
    const double c = ComputeComplexity(u).value;
    violations += !(c < bound - 1e-9);
    const double cu = ComputeComplexity(ScalarMap(h, w, 0.01 + 0.24 * (trial % 7) / 6.0)).value;
    violations += std::abs(cu - bound) > 1e-9;
  }
  return {violations == 0, Format("%.0f violations over 1000 random and 1000 uniform maps",
                                  violations)};
}

Outcome EndToEndDeterminism() {
  testing::TempDir dir;
  const std::string image = testing::SourcePath("data/sample_64.png");
  double slowest = 0.0;
  auto run = [&](const std::string& sub, const std::string& threads) {
    std::ostringstream out, err;
    const auto start = std::chrono::steady_clock::now();
    const int code = cli::RunCli({"repeat", "explain", "--image", image, "--out",
                                  (dir / sub).string(), "--threads", threads},
                                 out, err);
    slowest = std::max(slowest, Seconds(start));
    return code;
  };
  if (run("a", "1") != 0 || run("b", "1") != 0 || run("c", "8") != 0) {
    return {false, "explain failed"};
  }
  for (const char* name : {"importance.rpt", "importance.png", "uncertainty.rpt",
                           "uncertainty.png", "explain.json"}) {
    const std::string a = testing::ReadBytes(dir / "a" / name);
    if (a.empty() || a != testing::ReadBytes(dir / "b" / name) ||
        a != testing::ReadBytes(dir / "c" / name)) {
      return {false, std::string("outputs differ: ") + name};
    }
  }
  return {slowest < 10.0, Format("5 outputs byte-identical, slowest run %.2f s", slowest)};
}

}  // namespace
}  // namespace repeat

int main() {
  using repeat::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"bernoulli algebra", repeat::BernoulliAlgebra},
      {"alternating pixel", repeat::AlternatingPixel},
      {"positive-scale invariance", repeat::ScaleInvariance},
      {"thresholding oracles", repeat::ThresholdOracles},
      {"kernel shap exactness", repeat::ShapExactness},
      {"estimator consistency", repeat::EstimatorConsistency},
      {"ood analogue", repeat::OodAnalogue},
      {"sanity analogue", repeat::SanityAnalogue},
      {"gmm and auroc units", repeat::GmmAuroc},
      {"complexity bounds", repeat::ComplexityBounds},
      {"end-to-end determinism", repeat::EndToEndDeterminism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu %-26s %s  %s\n", i + 1, criteria[i].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
