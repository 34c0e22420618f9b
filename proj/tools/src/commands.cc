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

#include "repeat_cli/commands.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <system_error>
#include <utility>

#include "repeat/common.h"
#include "repeat/estimator.h"
#include "repeat/image_io.h"
#include "repeat/thresholding.h"

namespace repeat::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void MakeDirs(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string() + ": " +
                  ec.message());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  MakeDirs(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

void WriteJson(const fs::path& path, const json& j) {
  WriteText(path, j.dump(2) + "\n");
}

json Envelope(const std::string& command, const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = ConfigToJson(cfg);
  return j;
}

json ShapeJson(const ImageShape& s) {
  return {{"channels", s.channels}, {"height", s.height}, {"width", s.width}};
}

bool IsImageFile(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".rpt" || ext == ".png";
}

Encoder CorpusEncoder(const RunConfig& cfg,
                      const std::vector<LabeledImage>& corpus) {
  return BuildEncoder(cfg, corpus.front().image.shape());
}

json RecordJson(const ImageRecord& r, bool with_posterior) {
  json j = {{"id", r.id},
            {"label", r.label},
            {"aggregated_uncertainty", r.aggregated_uncertainty},
            {"complexity", r.complexity},
            {"complexity_all_zero", r.complexity_all_zero}};
  if (with_posterior) j["ood_posterior"] = r.ood_posterior;
  return j;
}

}  // namespace

std::vector<LabeledImage> LoadCorpus(const fs::path& dir, int height,
                                     int width) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError("corpus directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && IsImageFile(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  if (files.empty()) {
    throw IoError("corpus directory has no .rpt or .png images: " +
                  dir.string());
  }
  std::vector<LabeledImage> out;
  out.reserve(files.size());
  for (const fs::path& f : files) {
    ImageTensor img = height > 0 ? LoadImage(f, height, width) : LoadImage(f);
    if (!out.empty() && !(img.shape() == out.front().image.shape())) {
      throw ValidationError("image " + f.string() +
                            " does not match the corpus shape; set "
                            "eval.height and eval.width to resize");
    }
    out.push_back({f.stem().string(), std::move(img)});
  }
  return out;
}

void Explain(const RunConfig& cfg, const fs::path& image,
             const fs::path& out_dir, int threads) {
  ValidateConfig(cfg);
  const ImageTensor img = LoadImage(image);
  const Encoder encoder = BuildEncoder(cfg, img.shape());
  const RepeatResult r =
      RepeatExplain(img, encoder, ToRepeatConfig(cfg, threads));

  MakeDirs(out_dir);
  SaveMap(r.importance, out_dir / "importance.rpt", MapFormat::kRaw);
  SaveMap(r.importance, out_dir / "importance.png", MapFormat::kHeatmap);
  SaveMap(r.uncertainty, out_dir / "uncertainty.rpt", MapFormat::kRaw);
  SaveMap(r.uncertainty, out_dir / "uncertainty.png", MapFormat::kHeatmap);

  json j = Envelope("explain", cfg);
  j["image"] = {{"path", image.string()}, {"shape", ShapeJson(img.shape())}};
  json realizations = json::array();
  for (std::size_t k = 0; k < r.thresholds.size(); ++k) {
    const RealizationFlags& f = r.flags[k];
    realizations.push_back(
        {{"k", k},
         {"tau", r.thresholds[k]},
         {"foreground_fraction", r.realizations[k].ForegroundFraction()},
         {"threshold_degenerate", f.threshold_degenerate},
         {"threshold_not_converged", f.threshold_not_converged},
         {"weights_degenerate", f.weights_degenerate}});
  }
  j["realizations"] = std::move(realizations);
  j["summary"] = {{"degenerate_realizations", r.DegenerateRealizations()},
                  {"importance_mean", r.importance.Mean()},
                  {"importance_max", r.importance.Max()},
                  {"uncertainty_mean", r.uncertainty.Mean()},
                  {"uncertainty_max", r.uncertainty.Max()}};
  j["outputs"] = {"importance.rpt", "importance.png", "uncertainty.rpt",
                  "uncertainty.png"};
  WriteJson(out_dir / "explain.json", j);
}

json EvalOod(const RunConfig& cfg, int threads) {
  ValidateConfig(cfg);
  Require(!cfg.eval.in_dir.empty(), "eval ood needs an in-distribution "
                                    "corpus (--in or eval.in)");
  Require(!cfg.eval.ood_dir.empty(),
          "eval ood needs an OOD corpus (--ood or eval.ood)");
  Require(!cfg.eval.report.empty(), "eval.report must not be empty");
  const auto in = LoadCorpus(cfg.eval.in_dir, cfg.eval.height, cfg.eval.width);
  const auto ood =
      LoadCorpus(cfg.eval.ood_dir, cfg.eval.height, cfg.eval.width);
  Require(in.front().image.shape() == ood.front().image.shape(),
          "in-distribution and OOD images differ in shape; set eval.height "
          "and eval.width to resize");
  const Encoder encoder = CorpusEncoder(cfg, in);
  const OodReport rep =
      RunOodExperiment(in, ood, encoder, ToExperimentConfig(cfg, threads));

  json j = Envelope("eval ood", cfg);
  json records = json::array();
  for (const ImageRecord& r : rep.records) records.push_back(RecordJson(r, true));
  j["records"] = std::move(records);
  const GmmModel& g = rep.gmm;
  j["summary"] = {
      {"auroc", rep.auroc},
      {"n_in", in.size()},
      {"n_ood", ood.size()},
      {"gmm",
       {{"weights", g.weights},
        {"means", g.means},
        {"variances", g.variances},
        {"log_likelihood", g.log_likelihood},
        {"iterations", g.iterations},
        {"converged", g.converged},
        {"ood_component", g.HigherMeanComponent()}}}};
  WriteJson(cfg.eval.report, j);

  if (!cfg.eval.histogram.empty()) {
    const ScoreHistogram& h = rep.histogram;
    std::string csv = "bin_lower,bin_upper,in_count,ood_count\n";
    char line[160];
    for (std::size_t b = 0; b < h.in_counts.size(); ++b) {
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%lld,%lld\n", h.edges[b],
                    h.edges[b + 1], static_cast<long long>(h.in_counts[b]),
                    static_cast<long long>(h.ood_counts[b]));
      csv += line;
    }
    WriteText(cfg.eval.histogram, csv);
  }
  return j;
}

json EvalSanity(const RunConfig& cfg, int threads) {
  ValidateConfig(cfg);
  Require(!cfg.eval.corpus_dir.empty(),
          "eval sanity needs a corpus (--corpus or eval.corpus)");
  Require(!cfg.eval.report.empty(), "eval.report must not be empty");
  const auto corpus =
      LoadCorpus(cfg.eval.corpus_dir, cfg.eval.height, cfg.eval.width);
  const Encoder encoder = CorpusEncoder(cfg, corpus);
  const SanityReport rep = RunSanityExperiment(
      corpus, encoder, ToRepeatConfig(cfg, 1), cfg.eval.rand_seed, threads);

  json j = Envelope("eval sanity", cfg);
  json records = json::array();
  for (const SanityRecord& r : rep.records) {
    records.push_back({{"id", r.id},
                       {"emprt_score", r.emprt.score},
                       {"trained_complexity", r.emprt.trained_complexity},
                       {"randomized_complexity", r.emprt.randomized_complexity}});
  }
  j["records"] = std::move(records);
  j["summary"] = {{"n", corpus.size()}, {"median_emprt_score", rep.median}};
  WriteJson(cfg.eval.report, j);
  return j;
}

json EvalComplexity(const RunConfig& cfg, int threads) {
  ValidateConfig(cfg);
  Require(!cfg.eval.corpus_dir.empty(),
          "eval complexity needs a corpus (--corpus or eval.corpus)");
  Require(!cfg.eval.report.empty(), "eval.report must not be empty");
  const auto corpus =
      LoadCorpus(cfg.eval.corpus_dir, cfg.eval.height, cfg.eval.width);
  const Encoder encoder = CorpusEncoder(cfg, corpus);
  const ComplexityReport rep = RunComplexityExperiment(
      corpus, encoder, ToExperimentConfig(cfg, threads));

  json j = Envelope("eval complexity", cfg);
  json records = json::array();
  for (const ImageRecord& r : rep.records) records.push_back(RecordJson(r, false));
  j["records"] = std::move(records);
  j["summary"] = {{"n", corpus.size()}, {"mean_complexity", rep.mean}};
  WriteJson(cfg.eval.report, j);
  return j;
}

void Synth(CorpusKind kind, int n, ImageShape shape, uint64_t seed,
           const fs::path& out_dir) {
  Require(n >= 1, "synth needs n >= 1");
  const std::vector<ImageTensor> images = SynthCorpus(kind, n, shape, seed);
  MakeDirs(out_dir);
  json files = json::array();
  char name[64];
  for (int i = 0; i < n; ++i) {
    std::snprintf(name, sizeof(name), "%s_%04d.rpt",
                  std::string(CorpusKindName(kind)).c_str(), i);
    SaveImageRaw(images[i], out_dir / name);
    files.push_back(name);
  }
  json manifest = {{"schema_version", kSchemaVersion},
                   {"kind", CorpusKindName(kind)},
                   {"n", n},
                   {"seed", seed},
                   {"shape", ShapeJson(shape)},
                   {"files", std::move(files)}};
  WriteJson(out_dir / "manifest.json", manifest);
}

std::vector<ThresholdRow> ThresholdTable(const ScalarMap& map) {
  std::vector<ThresholdRow> rows;
  for (ThresholdMethod m : {ThresholdMethod::kMean, ThresholdMethod::kOtsu,
                            ThresholdMethod::kTriangle, ThresholdMethod::kLi}) {
    const Threshold t = ComputeThreshold(map, m);
    rows.push_back({m, t, Binarize(map, t.value).ForegroundFraction()});
  }
  return rows;
}

void PrintThresholdTable(const std::vector<ThresholdRow>& rows,
                         std::ostream& out) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-9s %14s %12s  %s\n", "method", "tau",
                "foreground", "flags");
  out << line;
  for (const ThresholdRow& r : rows) {
    std::string flags;
    if (r.threshold.degenerate) flags += "degenerate ";
    if (r.threshold.not_converged) flags += "not-converged ";
    if (flags.empty()) flags = "-";
    std::snprintf(line, sizeof(line), "%-9s %14.6g %12.4f  %s\n",
                  std::string(ThresholdMethodName(r.method)).c_str(),
                  r.threshold.value, r.foreground_fraction, flags.c_str());
    out << line;
  }
}

}  // namespace repeat::cli
