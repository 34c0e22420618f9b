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

#ifndef REPEAT_CLI_CONFIG_H_
#define REPEAT_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "repeat/base_xai.h"
#include "repeat/encoder.h"
#include "repeat/eval.h"
#include "repeat/thresholding.h"

namespace repeat::cli {

inline constexpr int kSchemaVersion = 1;

struct EncoderBlock {
  EncoderKind kind = EncoderKind::kToyConv;
  EncoderInit init = EncoderInit::kDesigned;
  uint64_t seed = 0;
  int dim = 32;
};

struct RepeatBlock {
  int k = 10;
  ThresholdMethod threshold = ThresholdMethod::kMean;
  uint64_t seed = 0;
};

struct EvalBlock {
  UncertaintyMethod method = UncertaintyMethod::kRepeat;
  std::string aggregation = "mean";
  std::string in_dir;
  std::string ood_dir;
  std::string corpus_dir;
  uint64_t rand_seed = 1;
  // 0 keeps the native image size.
  int height = 0;
  int width = 0;
  std::string report = "report.json";
  std::string histogram;
};

// Every field of a run. Threads are not part of the config: they never change
// a result.
struct RunConfig {
  EncoderBlock encoder;
  BaseConfig base;
  RepeatBlock repeat;
  TtaConfig tta;
  EvalBlock eval;
};

// Fields absent from `j` keep their defaults; unknown keys and wrong types
// throw ValidationError naming the key.
RunConfig ConfigFromJson(const nlohmann::json& j);
RunConfig LoadConfig(const std::filesystem::path& path);

// Full config with every field, in the same layout ConfigFromJson accepts.
nlohmann::json ConfigToJson(const RunConfig& cfg);

void ValidateConfig(const RunConfig& cfg);

RepeatConfig ToRepeatConfig(const RunConfig& cfg, int threads);
ExperimentConfig ToExperimentConfig(const RunConfig& cfg, int threads);
Encoder BuildEncoder(const RunConfig& cfg, ImageShape shape);

std::string_view ShapBaselineName(ShapBaseline baseline);
ShapBaseline ParseShapBaseline(std::string_view name);

}  // namespace repeat::cli

#endif  // REPEAT_CLI_CONFIG_H_
