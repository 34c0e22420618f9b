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

#include "repeat_cli/cli.h"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "repeat/common.h"
#include "repeat/image_io.h"
#include "repeat_cli/commands.h"
#include "repeat_cli/config.h"

namespace repeat::cli {
namespace {

struct Overrides {
  std::string config_path;
  std::optional<int> threads;

  std::optional<std::string> encoder;
  std::optional<std::string> init;
  std::optional<uint64_t> encoder_seed;
  std::optional<int> dim;

  std::optional<std::string> base;
  std::optional<int> masks;
  std::optional<int> grid;
  std::optional<double> cell_prob;
  std::optional<int> patch_grid;
  std::optional<int> coalitions;

  std::optional<int> k;
  std::optional<std::string> threshold;
  std::optional<uint64_t> seed;

  std::optional<int> tta_n;
  std::optional<double> tta_p;

  std::optional<std::string> method;
  std::optional<std::string> in_dir;
  std::optional<std::string> ood_dir;
  std::optional<std::string> corpus_dir;
  std::optional<uint64_t> rand_seed;
  std::optional<int> height;
  std::optional<int> width;
  std::optional<std::string> report;
  std::optional<std::string> histogram;
};

void AddCommon(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON run configuration");
  app->add_option("--threads", o.threads,
                  "Worker threads (default: REPEAT_THREADS or all cores)");
}

void AddPipeline(CLI::App* app, Overrides& o) {
  app->add_option("--encoder", o.encoder, "Encoder kind: linear or conv");
  app->add_option("--init", o.init, "Encoder init: gaussian or designed");
  app->add_option("--encoder-seed", o.encoder_seed, "Encoder weight seed");
  app->add_option("--dim", o.dim, "Embedding dimension");
  app->add_option("--base", o.base, "Base method: relax or shap");
  app->add_option("--masks", o.masks, "RELAX masks per map");
  app->add_option("--grid", o.grid, "RELAX mask grid");
  app->add_option("--cell-prob", o.cell_prob, "RELAX mask cell probability");
  app->add_option("--patch-grid", o.patch_grid, "Kernel SHAP patch grid");
  app->add_option("--coalitions", o.coalitions, "Kernel SHAP coalitions");
  app->add_option("--k", o.k, "Base map realizations");
  app->add_option("--threshold", o.threshold,
                  "Threshold: mean, otsu, triangle or li");
  app->add_option("--seed", o.seed, "REPEAT seed");
}

void AddEval(CLI::App* app, Overrides& o) {
  AddPipeline(app, o);
  app->add_option("--method", o.method,
                  "Uncertainty method: repeat, relax or tta-base");
  app->add_option("--tta-n", o.tta_n, "TTA augmented copies");
  app->add_option("--tta-p", o.tta_p, "TTA pixel drop probability");
  app->add_option("--height", o.height, "Resize images to this height");
  app->add_option("--width", o.width, "Resize images to this width");
  app->add_option("--report", o.report, "JSON report path");
}

template <typename T, typename U>
void Set(const std::optional<T>& v, U& out) {
  if (v) out = *v;
}

template <typename T, typename Parse>
void SetEnum(const std::optional<std::string>& v, T& out, Parse parse) {
  if (v) out = parse(*v);
}

RunConfig Resolve(const Overrides& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : LoadConfig(o.config_path);
  SetEnum(o.encoder, cfg.encoder.kind, ParseEncoderKind);
  SetEnum(o.init, cfg.encoder.init, ParseEncoderInit);
  Set(o.encoder_seed, cfg.encoder.seed);
  Set(o.dim, cfg.encoder.dim);
  SetEnum(o.base, cfg.base.method, ParseBaseMethod);
  Set(o.masks, cfg.base.masks.num_masks);
  Set(o.grid, cfg.base.masks.grid);
  Set(o.cell_prob, cfg.base.masks.cell_prob);
  Set(o.patch_grid, cfg.base.shap.patch_grid);
  Set(o.coalitions, cfg.base.shap.num_coalitions);
  Set(o.k, cfg.repeat.k);
  SetEnum(o.threshold, cfg.repeat.threshold, ParseThresholdMethod);
  Set(o.seed, cfg.repeat.seed);
  Set(o.tta_n, cfg.tta.n);
  Set(o.tta_p, cfg.tta.p);
  SetEnum(o.method, cfg.eval.method, ParseUncertaintyMethod);
  Set(o.in_dir, cfg.eval.in_dir);
  Set(o.ood_dir, cfg.eval.ood_dir);
  Set(o.corpus_dir, cfg.eval.corpus_dir);
  Set(o.rand_seed, cfg.eval.rand_seed);
  Set(o.height, cfg.eval.height);
  Set(o.width, cfg.eval.width);
  Set(o.report, cfg.eval.report);
  Set(o.histogram, cfg.eval.histogram);
  return cfg;
}

int ResolveThreads(const Overrides& o) {
  if (o.threads) {
    Require(*o.threads >= 1, "--threads must be at least 1");
    return *o.threads;
  }
  return DefaultThreadCount();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Bernoulli importance and uncertainty for embedding explanations",
               "repeat"};
  app.require_subcommand(1);
  Overrides o;

  std::string image, out_dir;
  CLI::App* explain = app.add_subcommand("explain", "Explain one image");
  AddCommon(explain, o);
  AddPipeline(explain, o);
  explain->add_option("--image", image, "Image (.png or .rpt)")->required();
  explain->add_option("--out", out_dir, "Output directory")->required();

  CLI::App* eval = app.add_subcommand("eval", "Run an evaluation experiment");
  eval->require_subcommand(1);
  CLI::App* ood = eval->add_subcommand("ood", "OOD detection from uncertainty");
  AddCommon(ood, o);
  AddEval(ood, o);
  ood->add_option("--in", o.in_dir, "In-distribution corpus directory");
  ood->add_option("--ood", o.ood_dir, "OOD corpus directory");
  ood->add_option("--histogram", o.histogram, "CSV score histogram path");
  CLI::App* sanity = eval->add_subcommand("sanity", "Randomization check");
  AddCommon(sanity, o);
  AddEval(sanity, o);
  sanity->add_option("--corpus", o.corpus_dir, "Corpus directory");
  sanity->add_option("--rand-seed", o.rand_seed, "Randomized encoder seed");
  CLI::App* complexity =
      eval->add_subcommand("complexity", "Uncertainty map complexity");
  AddCommon(complexity, o);
  AddEval(complexity, o);
  complexity->add_option("--corpus", o.corpus_dir, "Corpus directory");

  std::string kind = "structured";
  int n = 10, size = 32, channels = 1;
  uint64_t synth_seed = 0;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->add_option("--kind", kind, "structured, fluctuating or noise");
  synth->add_option("--n", n, "Number of images");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Corpus seed");
  synth->add_option("--size", size, "Image side length");
  synth->add_option("--channels", channels, "1 or 3");

  std::string map_path, demo_image;
  CLI::App* demo = app.add_subcommand(
      "threshold-demo", "Print every threshold for one map");
  AddCommon(demo, o);
  AddPipeline(demo, o);
  auto* map_opt = demo->add_option("--map", map_path, "Raw map (.rpt)");
  auto* image_opt = demo->add_option(
      "--image", demo_image, "Image whose base importance map is thresholded");
  map_opt->excludes(image_opt);

  std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1),
                                args.end());
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*explain) {
      Explain(Resolve(o), image, out_dir, ResolveThreads(o));
      out << "wrote " << out_dir << "\n";
    } else if (*ood) {
      const RunConfig cfg = Resolve(o);
      const auto j = EvalOod(cfg, ResolveThreads(o));
      out << "auroc " << j["summary"]["auroc"].get<double>() << "\n";
    } else if (*sanity) {
      const RunConfig cfg = Resolve(o);
      const auto j = EvalSanity(cfg, ResolveThreads(o));
      out << "median_emprt_score "
          << j["summary"]["median_emprt_score"].get<double>() << "\n";
    } else if (*complexity) {
      const RunConfig cfg = Resolve(o);
      const auto j = EvalComplexity(cfg, ResolveThreads(o));
      out << "mean_complexity " << j["summary"]["mean_complexity"].get<double>()
          << "\n";
    } else if (*synth) {
      Synth(ParseCorpusKind(kind), n, ImageShape{channels, size, size},
            synth_seed, synth_out);
      out << "wrote " << n << " images to " << synth_out << "\n";
    } else if (*demo) {
      Require(!map_path.empty() || !demo_image.empty(),
              "threshold-demo needs --map or --image");
      ScalarMap map;
      if (!map_path.empty()) {
        map = LoadRawMap(map_path);
      } else {
        const RunConfig cfg = Resolve(o);
        ValidateConfig(cfg);
        const ImageTensor img = LoadImage(demo_image);
        map = BaseImportance(img, BuildEncoder(cfg, img.shape()), cfg.base,
                             cfg.repeat.seed, ResolveThreads(o));
      }
      PrintThresholdTable(ThresholdTable(map), out);
    }
  } catch (const std::exception& e) {
    err << "repeat: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace repeat::cli
