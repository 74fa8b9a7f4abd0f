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

#include "ssn/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "ssn/adam.hpp"
#include "ssn/io.hpp"

namespace ssn {

namespace fs = std::filesystem;

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["input"] = input;
  j["output"] = output;
  j["model"] = model_path;
  j["val_dir"] = val_dir;
  j["m_target"] = m_target;
  j["v"] = v;
  j["v_train"] = v_train;
  j["k"] = resolved_k();
  j["eta"] = eta;
  j["gamma_color"] = gamma_color;
  j["lambda"] = lambda;
  j["lr"] = lr;
  j["batch"] = batch;
  j["iterations"] = iterations;
  j["patch"] = patch;
  j["seed"] = seed;
  j["connectivity"] = connectivity;
  j["m_list"] = m_list;
  j["method"] = method;
  j["boundary_r"] = boundary_r;
  j["val_fraction"] = val_fraction;
  j["val_every"] = val_every;
  j["init_std"] = init_std;
  j["scale_augment"] = scale_augment;
  j["synth"] = {{"count", synth_count},
                {"width", synth.width},
                {"height", synth.height},
                {"min_regions", synth.min_regions},
                {"max_regions", synth.max_regions},
                {"noise_sigma", synth.noise_sigma},
                {"contrast", synth.contrast},
                {"seed", synth.seed},
                {"with_flow", synth.with_flow}};
  return j.dump(2) + "\n";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ModelMismatch*>(&e)) return kExitModelMismatch;
  if (dynamic_cast<const CheckpointError*>(&e)) return kExitCorruptCheckpoint;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  if (dynamic_cast<const InvalidArgument*>(&e)) return kExitBadArgs;
  return kExitIo;
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void echo_config(const RunConfig& cfg, const std::string& dir) {
  io::write_file((fs::path(dir) / "config.json").string(), cfg.to_json());
}

std::string find_with_stem(const fs::path& dir, const std::string& stem, std::initializer_list<const char*> exts) {
  for (const char* ext : exts) {
    const fs::path p = dir / (stem + ext);
    if (fs::exists(p)) return p.string();
  }
  return {};
}

struct Patch {
  int width = 0;
  int height = 0;
  Matrix lab;
  std::vector<SuperpixelId> gt;
};

// Crop of size (cw, ch) at (x0, y0), resampled to (pw, ph) by nearest
// neighbour, optionally mirrored left-right.
Patch extract_patch(const EvalSample& s, int x0, int y0, int cw, int ch, int pw, int ph, bool flip) {
  Patch out;
  out.width = pw;
  out.height = ph;
  out.lab = Matrix(static_cast<std::size_t>(pw) * ph, 3);
  out.gt.resize(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    const int sy = y0 + std::min(ch - 1, static_cast<int>(static_cast<long long>(y) * ch / ph));
    for (int x = 0; x < pw; ++x) {
      const int xx = flip ? pw - 1 - x : x;
      const int sx = x0 + std::min(cw - 1, static_cast<int>(static_cast<long long>(xx) * cw / pw));
      const std::size_t src = static_cast<std::size_t>(sy) * s.width + sx;
      const std::size_t dst = static_cast<std::size_t>(y) * pw + x;
      for (int c = 0; c < 3; ++c) out.lab(dst, c) = s.lab(src, c);
      out.gt[dst] = s.gt.labels[src];
    }
  }
  return out;
}

double validation_asa(const std::vector<EvalSample>& val, const LinearModel& model, const PipelineConfig& cfg) {
  SweepOptions so;
  so.cfg = cfg;
  so.model = model.k == kBaseFeatures ? nullptr : &model;
  return mean_asa(val, cfg.m_target, so);
}

nlohmann::ordered_json model_sidecar(const TrainOptions& o, const TrainResult& r) {
  nlohmann::ordered_json j;
  j["format"] = "SSNL";
  j["version"] = kCheckpointVersion;
  j["k"] = o.k;
  j["eta"] = o.train_cfg.eta;
  j["gamma_color"] = o.train_cfg.gamma_color;
  j["lambda"] = o.lambda;
  j["lr"] = o.lr;
  j["batch"] = o.batch;
  j["iterations"] = o.iterations;
  j["patch"] = o.patch;
  j["m_target"] = o.train_cfg.m_target;
  j["v_train"] = o.train_cfg.v;
  j["v_test"] = o.val_cfg.v;
  j["seed"] = o.seed;
  j["init_std"] = o.init_std;
  j["scale_augment"] = o.scale_augment;
  j["best_iteration"] = r.best_iteration;
  j["best_val_asa"] = r.best_val_asa;
  j["initial_val_asa"] = r.initial_val_asa;
  return j;
}

}  // namespace

std::vector<EvalSample> load_corpus(const std::string& dir, bool require_gt) {
  const fs::path root(dir);
  const fs::path images = root / "images";
  if (!fs::is_directory(images)) throw IoError("corpus has no images/ directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(images)) {
    const std::string p = e.path().string();
    if (e.is_regular_file() && (io::has_extension(p, ".png") || io::has_extension(p, ".ppm"))) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<EvalSample> out;
  for (const auto& f : files) {
    EvalSample s;
    s.name = f.stem().string();
    s.image = io::read_image(f.string());
    s.width = s.image.width;
    s.height = s.image.height;
    s.lab = rgb_to_lab(s.image);
    s.gt.width = s.width;
    s.gt.height = s.height;
    const std::string gt = find_with_stem(root / "gt", s.name, {".pgm", ".csv"});
    if (!gt.empty()) {
      const LabelMap lm = io::read_label_map(gt);
      if (lm.width != s.width || lm.height != s.height) throw FormatError("GT size does not match image: " + gt);
      s.gt.labels = densify(lm.labels);
    } else if (require_gt) {
      throw IoError("missing ground truth for " + s.name);
    }
    const std::string flow = find_with_stem(root / "flow", s.name, {".csv"});
    if (!flow.empty()) {
      int w = 0, h = 0;
      s.gt.flow = io::read_flow_csv(flow, &w, &h);
      if (w != s.width || h != s.height) throw FormatError("flow size does not match image: " + flow);
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) throw IoError("empty corpus: " + dir);
  return out;
}

void write_corpus(const std::string& dir, const std::vector<SyntheticSample>& samples) {
  const fs::path root(dir);
  ensure_dir((root / "images").string());
  ensure_dir((root / "gt").string());
  bool any_flow = false;
  for (const auto& s : samples) any_flow = any_flow || !s.flow.empty();
  if (any_flow) ensure_dir((root / "flow").string());
  char name[32];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::snprintf(name, sizeof name, "img_%04zu", i);
    const auto& s = samples[i];
    io::write_png((root / "images" / (std::string(name) + ".png")).string(), s.image);
    LabelMap lm;
    lm.width = s.image.width;
    lm.height = s.image.height;
    lm.labels = s.gt;
    io::write_label_pgm((root / "gt" / (std::string(name) + ".pgm")).string(), lm);
    if (!s.flow.empty())
      io::write_flow_csv((root / "flow" / (std::string(name) + ".csv")).string(), s.flow, s.image.width,
                         s.image.height);
  }
}

TrainOptions train_options(const RunConfig& cfg) {
  TrainOptions o;
  o.k = static_cast<std::size_t>(cfg.resolved_k());
  o.train_cfg.m_target = cfg.m_target;
  o.train_cfg.v = cfg.v_train;
  o.train_cfg.eta = cfg.eta;
  o.train_cfg.gamma_color = cfg.gamma_color;
  o.train_cfg.connectivity = cfg.connectivity;
  o.val_cfg = o.train_cfg;
  o.val_cfg.v = cfg.v;
  o.lambda = cfg.lambda;
  o.lr = cfg.lr;
  o.batch = cfg.batch;
  o.iterations = cfg.iterations;
  o.patch = cfg.patch;
  o.seed = cfg.seed;
  o.val_every = cfg.val_every;
  o.init_std = cfg.init_std;
  o.scale_augment = cfg.scale_augment;
  return o;
}

TrainResult train_linear(const std::vector<EvalSample>& train, const std::vector<EvalSample>& val,
                         const TrainOptions& o) {
  if (train.empty()) throw InvalidArgument("train: empty training corpus");
  if (o.k <= kBaseFeatures) throw InvalidArgument("train: k must be > 5 to have trainable parameters");
  if (o.batch < 1 || o.iterations < 0 || o.patch < 1 || o.val_every < 1) throw InvalidArgument("train: bad schedule");
  for (const auto& s : train)
    if (!s.gt.has_labels()) throw InvalidArgument("train: sample without ground truth: " + s.name);
  const std::vector<EvalSample>& val_set = val.empty() ? train : val;

  std::mt19937_64 rng(o.seed);
  TrainResult r;
  r.final_model = LinearModel::random(o.k, o.init_std, o.seed ^ 0x5eedULL);
  r.initial_model = r.final_model;
  std::vector<double> params = r.final_model.parameters();
  AdamState adam;
  adam.lr = o.lr;

  r.initial_val_asa = validation_asa(val_set, r.final_model, o.val_cfg);
  r.best_val_asa = r.initial_val_asa;
  r.best_model = r.final_model;
  r.val_log.emplace_back(0, r.initial_val_asa);

  static constexpr double kScales[3] = {0.75, 1.0, 1.25};
  std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
  std::vector<double> grad(params.size());
  for (int it = 0; it < o.iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    LossLogRow row;
    row.iter = it;
    for (int b = 0; b < o.batch; ++b) {
      const EvalSample& s = train[pick(rng)];
      const double scale = o.scale_augment ? kScales[std::uniform_int_distribution<int>(0, 2)(rng)] : 1.0;
      const int pw = std::min(o.patch, s.width), ph = std::min(o.patch, s.height);
      const int cw = std::clamp(static_cast<int>(std::lround(pw / scale)), 1, s.width);
      const int ch = std::clamp(static_cast<int>(std::lround(ph / scale)), 1, s.height);
      const int x0 = std::uniform_int_distribution<int>(0, s.width - cw)(rng);
      const int y0 = std::uniform_int_distribution<int>(0, s.height - ch)(rng);
      const bool flip = std::bernoulli_distribution(0.5)(rng);
      const Patch patch = extract_patch(s, x0, y0, cw, ch, pw, ph, flip);
      const SampleGradient sg =
          sample_gradient(patch.lab, patch.width, patch.height, patch.gt, r.final_model, o.train_cfg, o.lambda);
      row.recon += sg.loss.recon / o.batch;
      row.compact += sg.loss.compact / o.batch;
      row.total += sg.loss.total / o.batch;
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += sg.grad[i] / o.batch;
    }
    r.log.push_back(row);
    adam_step(adam, params, grad);
    r.final_model.set_parameters(params);

    const int done = it + 1;
    if (done % o.val_every == 0 || done == o.iterations) {
      const double a = validation_asa(val_set, r.final_model, o.val_cfg);
      r.val_log.emplace_back(done, a);
      if (a > r.best_val_asa) {
        r.best_val_asa = a;
        r.best_iteration = done;
        r.best_model = r.final_model;
      }
    }
  }
  return r;
}

LinearModel load_model_for(const RunConfig& cfg) {
  LinearModel model = load_checkpoint(cfg.model_path);
  if (cfg.k && static_cast<std::size_t>(*cfg.k) != model.k)
    throw ModelMismatch("checkpoint has k=" + std::to_string(model.k) + " but k=" + std::to_string(*cfg.k) +
                        " was requested");
  return model;
}

void cmd_segment(const RunConfig& cfg) {
  if (cfg.input.empty() || cfg.output.empty()) throw InvalidArgument("segment: input and output are required");
  if (cfg.v < 1 || cfg.m_target < 1) throw InvalidArgument("segment: v and m must be positive");
  const RawImage img = io::read_image(cfg.input);
  std::optional<LinearModel> model;
  if (!cfg.model_path.empty()) model = load_model_for(cfg);

  PipelineConfig pc;
  pc.m_target = cfg.m_target;
  pc.v = cfg.v;
  pc.eta = cfg.eta;
  pc.gamma_color = cfg.gamma_color;
  pc.connectivity = cfg.connectivity;
  const Segmentation seg = segment(img, pc, model ? &*model : nullptr);

  ensure_dir(cfg.output);
  const fs::path out(cfg.output);
  io::write_label_pgm((out / "labels.pgm").string(), seg.labels);
  io::write_label_csv((out / "labels.csv").string(), seg.labels);
  static constexpr unsigned char kRed[3] = {255, 0, 0};
  io::write_png((out / "overlay.png").string(), io::boundary_overlay(img, seg.labels, kRed));
  echo_config(cfg, cfg.output);
}

TrainResult cmd_train(const RunConfig& cfg) {
  if (cfg.input.empty() || cfg.output.empty()) throw InvalidArgument("train: input and output are required");
  std::vector<EvalSample> corpus = load_corpus(cfg.input);
  std::vector<EvalSample> val;
  if (!cfg.val_dir.empty()) {
    val = load_corpus(cfg.val_dir);
  } else if (cfg.val_fraction > 0.0 && corpus.size() > 1) {
    std::size_t nval = static_cast<std::size_t>(std::ceil(cfg.val_fraction * static_cast<double>(corpus.size())));
    nval = std::min(nval, corpus.size() - 1);
    val.assign(std::make_move_iterator(corpus.end() - static_cast<std::ptrdiff_t>(nval)),
               std::make_move_iterator(corpus.end()));
    corpus.resize(corpus.size() - nval);
  }

  const TrainOptions opts = train_options(cfg);
  TrainResult r = train_linear(corpus, val, opts);

  ensure_dir(cfg.output);
  const fs::path out(cfg.output);
  save_checkpoint((out / "model.ssnl").string(), r.best_model);
  io::write_file((out / "model.json").string(), model_sidecar(opts, r).dump(2) + "\n");

  std::string log = "iter,recon,compact,total\n";
  char buf[160];
  for (const auto& row : r.log) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", row.iter, row.recon, row.compact, row.total);
    log += buf;
  }
  io::write_file((out / "loss_log.csv").string(), log);
  std::string vlog = "iter,val_asa\n";
  for (const auto& [it, a] : r.val_log) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", it, a);
    vlog += buf;
  }
  io::write_file((out / "val_log.csv").string(), vlog);
  echo_config(cfg, cfg.output);
  return r;
}

std::vector<EvalReport> cmd_eval(const RunConfig& cfg) {
  if (cfg.input.empty() || cfg.output.empty()) throw InvalidArgument("eval: input and output are required");
  if (cfg.m_list.empty()) throw InvalidArgument("eval: empty superpixel count list");
  if (cfg.method != "ssn" && cfg.method != "slic") throw InvalidArgument("eval: method must be ssn or slic");
  const std::vector<EvalSample> corpus = load_corpus(cfg.input);
  std::optional<LinearModel> model;
  if (!cfg.model_path.empty()) model = load_model_for(cfg);

  SweepOptions so;
  so.m_values = cfg.m_list;
  so.cfg.v = cfg.v;
  so.cfg.eta = cfg.eta;
  so.cfg.gamma_color = cfg.gamma_color;
  // boundary metrics are always computed on connected hard clusters
  so.cfg.connectivity = true;
  so.model = model ? &*model : nullptr;
  so.method = cfg.method == "slic" ? Method::SlicHard : Method::Ssn;
  so.boundary_r = cfg.boundary_r;
  std::vector<EvalReport> rows = sweep(corpus, so);

  ensure_dir(cfg.output);
  io::write_file((fs::path(cfg.output) / "report.csv").string(), report_csv(rows));
  echo_config(cfg, cfg.output);
  return rows;
}

void cmd_synth(const RunConfig& cfg) {
  if (cfg.output.empty()) throw InvalidArgument("synth: output is required");
  if (cfg.synth_count < 1) throw InvalidArgument("synth: count must be positive");
  write_corpus(cfg.output, synthesize_corpus(cfg.synth, static_cast<std::size_t>(cfg.synth_count)));
  echo_config(cfg, cfg.output);
}

}  // namespace ssn
