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

#include "ssn/linear_model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace ssn {

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void put_f64(std::ofstream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

LinearModel::LinearModel(std::size_t k_out) : k(k_out) {
  if (k_out < kBaseFeatures) throw InvalidArgument("LinearModel: k must be >= 5");
  weights = Matrix(kBaseFeatures, extra());
  bias.assign(extra(), 0.0);
}

std::vector<double> LinearModel::parameters() const {
  std::vector<double> flat = weights.data();
  flat.insert(flat.end(), bias.begin(), bias.end());
  return flat;
}

void LinearModel::set_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw InvalidArgument("LinearModel: parameter count mismatch");
  std::copy(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(weights.size()), weights.data().begin());
  std::copy(flat.begin() + static_cast<std::ptrdiff_t>(weights.size()), flat.end(), bias.begin());
}

LinearModel LinearModel::random(std::size_t k_out, double stddev, std::uint64_t seed) {
  LinearModel m(k_out);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, stddev);
  for (auto& w : m.weights.data()) w = dist(rng);
  return m;
}

std::vector<double> ModelGradient::flat() const {
  std::vector<double> out = weights.data();
  out.insert(out.end(), bias.begin(), bias.end());
  return out;
}

PixelFeatures model_forward(const PixelFeatures& xylab, const LinearModel& model) {
  if (xylab.k() != kBaseFeatures) throw InvalidArgument("model_forward: input must have 5 columns");
  const std::size_t n = xylab.n(), e = model.extra();
  PixelFeatures out;
  out.width = xylab.width;
  out.height = xylab.height;
  out.data = Matrix(n, model.k);
  for (std::size_t p = 0; p < n; ++p) {
    const auto x = xylab.data.row(p);
    auto o = out.data.row(p);
    for (std::size_t c = 0; c < kBaseFeatures; ++c) o[c] = x[c];
    for (std::size_t c = 0; c < e; ++c) {
      double acc = model.bias[c];
      for (std::size_t r = 0; r < kBaseFeatures; ++r) acc += x[r] * model.weights(r, c);
      o[kBaseFeatures + c] = acc;
    }
  }
  return out;
}

ModelGradient model_backward(const PixelFeatures& xylab, const LinearModel& model, const Matrix& dl_df) {
  const std::size_t n = xylab.n(), e = model.extra();
  require_shape(dl_df, n, model.k, "model_backward");
  ModelGradient g;
  g.weights = Matrix(kBaseFeatures, e);
  g.bias.assign(e, 0.0);
  g.input = Matrix(n, kBaseFeatures);
  for (std::size_t p = 0; p < n; ++p) {
    const auto x = xylab.data.row(p);
    const auto gf = dl_df.row(p);
    auto gx = g.input.row(p);
    for (std::size_t r = 0; r < kBaseFeatures; ++r) gx[r] = gf[r];
    for (std::size_t c = 0; c < e; ++c) {
      const double gc = gf[kBaseFeatures + c];
      if (gc == 0.0) continue;
      g.bias[c] += gc;
      for (std::size_t r = 0; r < kBaseFeatures; ++r) {
        g.weights(r, c) += x[r] * gc;
        gx[r] += model.weights(r, c) * gc;
      }
    }
  }
  return g;
}

void save_checkpoint(const std::string& path, const LinearModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);
  out.write("SSNL", 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(model.k));
  put_u32(out, 0);
  for (double v : model.parameters()) put_f64(out, v);
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

LinearModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "SSNL", 4) != 0) throw CheckpointError("not an SSNL checkpoint: " + path);
  const std::uint32_t version = get_u32(bytes.data() + 4);
  const std::uint32_t k = get_u32(bytes.data() + 8);
  if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version in " + path);
  if (k < kBaseFeatures || k > 4096) throw CheckpointError("checkpoint has invalid k in " + path);
  LinearModel model(k);
  if (bytes.size() != 16 + 8 * model.parameter_count()) throw CheckpointError("checkpoint size does not match k in " + path);
  std::vector<double> flat(model.parameter_count());
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = get_f64(bytes.data() + 16 + 8 * i);
  for (double v : flat)
    if (!std::isfinite(v)) throw CheckpointError("checkpoint contains non-finite parameters: " + path);
  model.set_parameters(flat);
  return model;
}

}  // namespace ssn
