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

#ifndef REPEAT_CLI_COMMANDS_H_
#define REPEAT_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "repeat/eval.h"
#include "repeat/tensor.h"
#include "repeat_cli/config.h"

namespace repeat::cli {

// Raw (.rpt) and PNG images of `dir` in file-name order. Throws IoError naming
// the directory when it is missing or holds no images.
std::vector<LabeledImage> LoadCorpus(const std::filesystem::path& dir,
                                     int height, int width);

// Writes importance.{rpt,png}, uncertainty.{rpt,png} and explain.json.
void Explain(const RunConfig& cfg, const std::filesystem::path& image,
             const std::filesystem::path& out_dir, int threads);

// Each writes cfg.eval.report; ood also writes cfg.eval.histogram when set.
nlohmann::json EvalOod(const RunConfig& cfg, int threads);
nlohmann::json EvalSanity(const RunConfig& cfg, int threads);
nlohmann::json EvalComplexity(const RunConfig& cfg, int threads);

// n images <kind>_NNNN.rpt plus manifest.json.
void Synth(CorpusKind kind, int n, ImageShape shape, uint64_t seed,
           const std::filesystem::path& out_dir);

struct ThresholdRow {
  ThresholdMethod method;
  Threshold threshold;
  double foreground_fraction = 0.0;
};

std::vector<ThresholdRow> ThresholdTable(const ScalarMap& map);
void PrintThresholdTable(const std::vector<ThresholdRow>& rows,
                         std::ostream& out);

}  // namespace repeat::cli

#endif  // REPEAT_CLI_COMMANDS_H_
