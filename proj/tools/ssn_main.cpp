// Copyright 2026 The SSN-CPU Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ssn: segment images, train the linear feature model, evaluate corpora and
// generate synthetic datasets.

#include <iostream>

#include <CLI11.hpp>

#include "ssn/app.hpp"

namespace {

void add_clustering_flags(CLI::App* sub, ssn::RunConfig& cfg) {
  sub->add_option("--m-target,-m", cfg.m_target, "Requested number of superpixels")->check(CLI::PositiveNumber);
  sub->add_option("--v", cfg.v, "Differentiable SLIC iterations at test time")->check(CLI::PositiveNumber);
  sub->add_option("--eta", cfg.eta, "Positional scale factor")->check(CLI::PositiveNumber);
  sub->add_option("--gamma-color", cfg.gamma_color, "Color scale")->check(CLI::PositiveNumber);
  sub->add_option("--k", cfg.k, "Feature dimension (must match the checkpoint if given)")->check(CLI::Range(5, 4096));
  sub->add_option("--model-path", cfg.model_path, "SSNL checkpoint of a trained linear model");
}

}  // namespace

int main(int argc, char** argv) {
  ssn::RunConfig cfg;
  CLI::App app{"Superpixel sampling with differentiable SLIC"};
  app.require_subcommand(1);

  auto* seg = app.add_subcommand("segment", "Segment one image");
  seg->add_option("--input,-i", cfg.input, "PNG or PPM image")->required();
  seg->add_option("--output,-o", cfg.output, "Output directory")->required();
  add_clustering_flags(seg, cfg);
  seg->add_flag("!--no-connectivity", cfg.connectivity, "Skip connectivity enforcement");

  auto* train = app.add_subcommand("train", "Train the linear feature model");
  train->add_option("--input,-i", cfg.input, "Corpus directory (images/, gt/)")->required();
  train->add_option("--output,-o", cfg.output, "Output directory")->required();
  train->add_option("--val-dir", cfg.val_dir, "Validation corpus (default: hold out --val-fraction)");
  add_clustering_flags(train, cfg);
  train->add_option("--v-train", cfg.v_train, "Iterations while training")->check(CLI::PositiveNumber);
  train->add_option("--lambda", cfg.lambda, "Compactness weight")->check(CLI::NonNegativeNumber);
  train->add_option("--lr", cfg.lr, "Adam learning rate")->check(CLI::NonNegativeNumber);
  train->add_option("--batch", cfg.batch, "Patches per step")->check(CLI::PositiveNumber);
  train->add_option("--iterations", cfg.iterations, "Adam steps")->check(CLI::NonNegativeNumber);
  train->add_option("--patch", cfg.patch, "Patch side length in pixels")->check(CLI::PositiveNumber);
  train->add_option("--seed", cfg.seed, "Random seed");
  train->add_option("--val-fraction", cfg.val_fraction, "Held-out fraction")->check(CLI::Range(0.0, 0.9));
  train->add_option("--val-every", cfg.val_every, "Validation period in steps")->check(CLI::PositiveNumber);
  train->add_option("--init-std", cfg.init_std, "Std-dev of initial weights")->check(CLI::NonNegativeNumber);
  train->add_flag("--scale-augment", cfg.scale_augment, "Random patch rescaling in {0.75, 1, 1.25}");
  train->add_flag("!--no-connectivity", cfg.connectivity, "Skip connectivity enforcement during validation");

  auto* eval = app.add_subcommand("eval", "Evaluate a corpus over several superpixel counts");
  eval->add_option("--input,-i", cfg.input, "Corpus directory (images/, gt/, optional flow/)")->required();
  eval->add_option("--output,-o", cfg.output, "Output directory for report.csv")->required();
  add_clustering_flags(eval, cfg);
  eval->add_option("--m-list", cfg.m_list, "Superpixel counts, comma separated")->delimiter(',');
  eval->add_option("--method", cfg.method, "ssn or slic")->check(CLI::IsMember({"ssn", "slic"}));
  eval->add_option("--boundary-r", cfg.boundary_r, "Boundary tolerance in pixels (0: 0.25% of diagonal)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic Voronoi corpus");
  synth->add_option("--output,-o", cfg.output, "Output directory")->required();
  synth->add_option("--count", cfg.synth_count, "Number of images")->check(CLI::PositiveNumber);
  synth->add_option("--width", cfg.synth.width, "Image width")->check(CLI::PositiveNumber);
  synth->add_option("--height", cfg.synth.height, "Image height")->check(CLI::PositiveNumber);
  synth->add_option("--min-regions", cfg.synth.min_regions, "Fewest regions per image")->check(CLI::PositiveNumber);
  synth->add_option("--max-regions", cfg.synth.max_regions, "Most regions per image")->check(CLI::PositiveNumber);
  synth->add_option("--noise", cfg.synth.noise_sigma, "Gaussian pixel noise sigma")->check(CLI::NonNegativeNumber);
  synth->add_option("--contrast", cfg.synth.contrast, "Color spread around mid-gray")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", cfg.synth.seed, "Random seed");
  synth->add_flag("--flow", cfg.synth.with_flow, "Also write a piecewise-constant flow field per image");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ssn::kExitOk : ssn::kExitBadArgs;
  }

  try {
    if (*seg) {
      cfg.command = "segment";
      ssn::cmd_segment(cfg);
    } else if (*train) {
      cfg.command = "train";
      const auto r = ssn::cmd_train(cfg);
      std::cout << "best validation ASA " << r.best_val_asa << " at step " << r.best_iteration << " (initial "
                << r.initial_val_asa << ")\n";
    } else if (*eval) {
      cfg.command = "eval";
      const auto rows = ssn::cmd_eval(cfg);
      for (const auto& r : rows)
        if (r.failed) std::cerr << "error: " << r.image << " m=" << r.m_requested << ": " << r.error << "\n";
    } else if (*synth) {
      cfg.command = "synth";
      ssn::cmd_synth(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "ssn: " << e.what() << "\n";
    return ssn::exit_code_for(e);
  }
  return ssn::kExitOk;
}
