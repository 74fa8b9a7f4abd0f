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

#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "ssn/linear_model.hpp"
#include "ssn/pipeline.hpp"
#include "ssn/sweep.hpp"
#include "ssn/synth.hpp"

namespace ssn {

/// Resolved settings of one CLI invocation. Defaults follow the training and
/// test protocol: v = 5 while training and 10 at test time, k = 20.
struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string model_path;
  std::string val_dir;

  int m_target = 100;
  int v = 10;
  int v_train = 5;
  std::optional<int> k;  // defaults to 20 for training; taken from the checkpoint otherwise
  double eta = kDefaultEta;
  double gamma_color = kDefaultGammaColor;
  double lambda = kDefaultLambda;
  double lr = 1e-4;
  int batch = 8;
  int iterations = 2000;
  int patch = 201;
  std::uint64_t seed = 0;
  bool connectivity = true;

  std::vector<int> m_list{100};
  std::string method = "ssn";  // ssn | slic
  int boundary_r = 0;

  double val_fraction = 0.2;
  int val_every = 100;
  double init_std = 0.01;
  bool scale_augment = false;

  SyntheticSpec synth;
  int synth_count = 10;

  int resolved_k() const { return k.value_or(20); }
  /// JSON echo written next to every command's outputs.
  std::string to_json() const;
};

/// Distinct process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitBadArgs = 2,
  kExitIo = 3,
  kExitNumeric = 4,
  kExitCorruptCheckpoint = 5,
  kExitModelMismatch = 6,
};

int exit_code_for(const std::exception& e);

/// Loads <dir>/images/*.{png,ppm} with matching <dir>/gt/<stem>.{pgm,csv}
/// and optional <dir>/flow/<stem>.csv, sorted by name.
std::vector<EvalSample> load_corpus(const std::string& dir, bool require_gt = true);

/// Writes a corpus in the layout load_corpus reads.
void write_corpus(const std::string& dir, const std::vector<SyntheticSample>& samples);

struct TrainOptions {
  std::size_t k = 20;
  PipelineConfig train_cfg;  // v = 5, m_target = 100
  PipelineConfig val_cfg;    // v = 10
  double lambda = kDefaultLambda;
  double lr = 1e-4;
  int batch = 8;
  int iterations = 2000;
  int patch = 201;
  std::uint64_t seed = 0;
  int val_every = 100;
  double init_std = 0.01;
  bool scale_augment = false;
};

struct LossLogRow {
  int iter = 0;
  double recon = 0.0;
  double compact = 0.0;
  double total = 0.0;
};

struct TrainResult {
  LinearModel initial_model;
  LinearModel final_model;
  LinearModel best_model;
  int best_iteration = 0;
  double best_val_asa = 0.0;
  double initial_val_asa = 0.0;
  std::vector<LossLogRow> log;
  std::vector<std::pair<int, double>> val_log;
};

TrainOptions train_options(const RunConfig& cfg);

/// Adam on random patches (left-right flips, optional rescaling), keeping
/// the parameters with the best mean validation ASA. Validation falls back
/// to the training set when `val` is empty.
TrainResult train_linear(const std::vector<EvalSample>& train, const std::vector<EvalSample>& val,
                         const TrainOptions& opts);

/// Subcommands. Each writes config.json into its output directory.
void cmd_segment(const RunConfig& cfg);
TrainResult cmd_train(const RunConfig& cfg);
std::vector<EvalReport> cmd_eval(const RunConfig& cfg);
void cmd_synth(const RunConfig& cfg);

/// Loads a checkpoint and checks it against an explicitly requested k.
LinearModel load_model_for(const RunConfig& cfg);

}  // namespace ssn
