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

#include "repeat_cli/config.h"

#include <fstream>
#include <set>
#include <string>
#include <utility>

#include "repeat/common.h"

namespace repeat::cli {
namespace {

using nlohmann::json;

class BlockReader {
 public:
  BlockReader(const json& j, std::string prefix)
      : j_(j), prefix_(std::move(prefix)) {
    Require(j_.is_object(), Where("") + " must be an object");
  }

  bool Has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  void Int(const std::string& key, int& out) {
    if (!Has(key)) return;
    const json& v = j_.at(key);
    Require(v.is_number_integer(), Where(key) + " must be an integer");
    out = v.get<int>();
  }

  void Seed(const std::string& key, uint64_t& out) {
    if (!Has(key)) return;
    const json& v = j_.at(key);
    Require(v.is_number_unsigned() ||
                (v.is_number_integer() && v.get<int64_t>() >= 0),
            Where(key) + " must be a non-negative integer");
    out = v.get<uint64_t>();
  }

  void Double(const std::string& key, double& out) {
    if (!Has(key)) return;
    const json& v = j_.at(key);
    Require(v.is_number(), Where(key) + " must be a number");
    out = v.get<double>();
  }

  void String(const std::string& key, std::string& out) {
    if (!Has(key)) return;
    const json& v = j_.at(key);
    Require(v.is_string(), Where(key) + " must be a string");
    out = v.get<std::string>();
  }

  template <typename Parse, typename T>
  void Enum(const std::string& key, T& out, Parse parse) {
    std::string name;
    if (!Has(key)) return;
    String(key, name);
    out = parse(name);
  }

  const json* Child(const std::string& key) {
    return Has(key) ? &j_.at(key) : nullptr;
  }

  std::string Where(const std::string& key) const {
    if (key.empty()) return prefix_.empty() ? "config" : prefix_;
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ValidationError("unknown config key '" + Where(it.key()) + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

}  // namespace

std::string_view ShapBaselineName(ShapBaseline baseline) {
  return baseline == ShapBaseline::kZero ? "zero" : "mean-pixel";
}

ShapBaseline ParseShapBaseline(std::string_view name) {
  if (name == "zero") return ShapBaseline::kZero;
  if (name == "mean-pixel" || name == "mean") return ShapBaseline::kMeanPixel;
  throw ValidationError("unknown shap baseline '" + std::string(name) + "'");
}

RunConfig ConfigFromJson(const json& j) {
  RunConfig cfg;
  BlockReader root(j, "");

  if (const json* e = root.Child("encoder")) {
    BlockReader r(*e, "encoder");
    r.Enum("kind", cfg.encoder.kind, ParseEncoderKind);
    r.Enum("init", cfg.encoder.init, ParseEncoderInit);
    r.Seed("seed", cfg.encoder.seed);
    r.Int("dim", cfg.encoder.dim);
    r.Finish();
  }
  if (const json* b = root.Child("base")) {
    BlockReader r(*b, "base");
    r.Enum("method", cfg.base.method, ParseBaseMethod);
    r.Finish();
  }
  if (const json* m = root.Child("masks")) {
    BlockReader r(*m, "masks");
    r.Int("grid", cfg.base.masks.grid);
    r.Double("cell_prob", cfg.base.masks.cell_prob);
    r.Int("n", cfg.base.masks.num_masks);
    r.Finish();
  }
  if (const json* s = root.Child("shap")) {
    BlockReader r(*s, "shap");
    r.Int("patch_grid", cfg.base.shap.patch_grid);
    r.Int("coalitions", cfg.base.shap.num_coalitions);
    r.Enum("baseline", cfg.base.shap.baseline, ParseShapBaseline);
    r.Finish();
  }
  if (const json* rp = root.Child("repeat")) {
    BlockReader r(*rp, "repeat");
    r.Int("k", cfg.repeat.k);
    r.Enum("threshold", cfg.repeat.threshold, ParseThresholdMethod);
    r.Seed("seed", cfg.repeat.seed);
    r.Finish();
  }
  if (const json* t = root.Child("tta")) {
    BlockReader r(*t, "tta");
    r.Int("n", cfg.tta.n);
    r.Double("p", cfg.tta.p);
    r.Finish();
  }
  if (const json* ev = root.Child("eval")) {
    BlockReader r(*ev, "eval");
    r.Enum("method", cfg.eval.method, ParseUncertaintyMethod);
    r.String("aggregation", cfg.eval.aggregation);
    r.String("in", cfg.eval.in_dir);
    r.String("ood", cfg.eval.ood_dir);
    r.String("corpus", cfg.eval.corpus_dir);
    r.Seed("rand_seed", cfg.eval.rand_seed);
    r.Int("height", cfg.eval.height);
    r.Int("width", cfg.eval.width);
    r.String("report", cfg.eval.report);
    r.String("histogram", cfg.eval.histogram);
    r.Finish();
  }
  root.Finish();
  return cfg;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("config file " + path.string() + ": " + e.what());
  }
  return ConfigFromJson(j);
}

json ConfigToJson(const RunConfig& cfg) {
  json j;
  j["encoder"] = {{"kind", EncoderKindName(cfg.encoder.kind)},
                  {"init", EncoderInitName(cfg.encoder.init)},
                  {"seed", cfg.encoder.seed},
                  {"dim", cfg.encoder.dim}};
  j["base"] = {{"method", BaseMethodName(cfg.base.method)}};
  j["masks"] = {{"grid", cfg.base.masks.grid},
                {"cell_prob", cfg.base.masks.cell_prob},
                {"n", cfg.base.masks.num_masks}};
  j["shap"] = {{"patch_grid", cfg.base.shap.patch_grid},
               {"coalitions", cfg.base.shap.num_coalitions},
               {"baseline", ShapBaselineName(cfg.base.shap.baseline)}};
  j["repeat"] = {{"k", cfg.repeat.k},
                 {"threshold", ThresholdMethodName(cfg.repeat.threshold)},
                 {"seed", cfg.repeat.seed}};
  j["tta"] = {{"n", cfg.tta.n}, {"p", cfg.tta.p}};
  j["eval"] = {{"method", UncertaintyMethodName(cfg.eval.method)},
               {"aggregation", cfg.eval.aggregation},
               {"in", cfg.eval.in_dir},
               {"ood", cfg.eval.ood_dir},
               {"corpus", cfg.eval.corpus_dir},
               {"rand_seed", cfg.eval.rand_seed},
               {"height", cfg.eval.height},
               {"width", cfg.eval.width},
               {"report", cfg.eval.report},
               {"histogram", cfg.eval.histogram}};
  return j;
}

void ValidateConfig(const RunConfig& cfg) {
  Require(cfg.encoder.dim >= kMinEmbeddingDim,
          "encoder.dim must be at least " + std::to_string(kMinEmbeddingDim));
  Require(cfg.encoder.kind == EncoderKind::kToyConv ||
              cfg.encoder.init == EncoderInit::kGaussian,
          "encoder.init 'designed' needs encoder.kind 'conv'");
  ToRepeatConfig(cfg, 1).Validate();
  Require(cfg.tta.n >= 2, "tta.n must be at least 2");
  Require(cfg.tta.p >= 0.0 && cfg.tta.p < 1.0, "tta.p must lie in [0, 1)");
  Require(cfg.eval.aggregation == "mean",
          "eval.aggregation must be 'mean', got '" + cfg.eval.aggregation + "'");
  Require(cfg.eval.height >= 0 && cfg.eval.width >= 0,
          "eval.height and eval.width must be non-negative");
  Require((cfg.eval.height == 0) == (cfg.eval.width == 0),
          "eval.height and eval.width must be set together");
}

RepeatConfig ToRepeatConfig(const RunConfig& cfg, int threads) {
  RepeatConfig rc;
  rc.k = cfg.repeat.k;
  rc.base = cfg.base;
  rc.threshold = cfg.repeat.threshold;
  rc.seed = cfg.repeat.seed;
  rc.threads = threads;
  return rc;
}

ExperimentConfig ToExperimentConfig(const RunConfig& cfg, int threads) {
  ExperimentConfig ec;
  ec.repeat = ToRepeatConfig(cfg, 1);
  ec.tta = cfg.tta;
  ec.method = cfg.eval.method;
  ec.threads = threads;
  return ec;
}

Encoder BuildEncoder(const RunConfig& cfg, ImageShape shape) {
  return Encoder::Build(cfg.encoder.kind, cfg.encoder.seed, shape,
                        cfg.encoder.dim, cfg.encoder.init);
}

}  // namespace repeat::cli
