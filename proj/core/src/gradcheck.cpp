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

#include "ssn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ssn/diff.hpp"
#include "ssn/pipeline.hpp"

namespace ssn {

double loss_and_feature_grad(const PixelFeatures& f, const GridSpec& spec, int v, const LossSpec& loss,
                             const AssignOptions& assign, Matrix* dl_df) {
  RecordedRun run = forward_recorded(f, spec, v, assign);
  const Association& q = run.result.assoc;
  double value = 0.0;
  Matrix dq, ds;
  switch (loss.kind) {
    case LossSpec::Kind::LinearCenters: {
      require_shape(loss.weights, run.result.state.centers.rows(), f.k(), "LinearCenters weights");
      const auto& s = run.result.state.centers.data();
      for (std::size_t i = 0; i < s.size(); ++i) value += loss.weights.data()[i] * s[i];
      ds = loss.weights;
      break;
    }
    case LossSpec::Kind::LinearAssociation: {
      require_shape(loss.weights, f.n(), kCandidates, "LinearAssociation weights");
      for (std::size_t i = 0; i < q.q.size(); ++i) value += loss.weights.data()[i] * q.q[i];
      dq = loss.weights;
      break;
    }
    case LossSpec::Kind::Combined: {
      const LabelMap h = hard_labels(q, f.width, f.height);
      const Matrix ixy = loss.ixy.empty() ? positional_columns(f) : loss.ixy;
      LossValue lv = combined_loss(loss.property, ixy, q, h, loss.lambda);
      value = lv.total;
      dq = std::move(lv.dl_dq);
      break;
    }
  }
  if (dl_df) *dl_df = backward(run.tape, dq, ds);
  return value;
}

GradCheckReport check_gradient(const std::function<double(std::span<const double>)>& fn, std::span<const double> x0,
                               std::span<const double> analytic, const GradCheckOptions& opts) {
  if (x0.size() != analytic.size()) throw InvalidArgument("check_gradient: size mismatch");
  GradCheckReport report;
  std::mt19937_64 rng(opts.seed);
  std::vector<double> x(x0.begin(), x0.end());

  const auto probe = [&](std::span<const double> dir) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[i] + opts.h * dir[i];
    const double up = fn(x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[i] - opts.h * dir[i];
    const double down = fn(x);
    GradProbe g;
    g.numeric = (up - down) / (2.0 * opts.h);
    g.analytic = std::inner_product(dir.begin(), dir.end(), analytic.begin(), 0.0);
    const double scale = std::max({std::abs(g.numeric), std::abs(g.analytic), opts.abs_floor});
    g.rel_error = std::abs(g.numeric - g.analytic) / scale;
    report.max_rel_error = std::max(report.max_rel_error, g.rel_error);
    report.probes.push_back(g);
  };

  std::vector<std::size_t> coords(x0.size());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  if (coords.size() > opts.max_entries) {
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(opts.max_entries);
    std::sort(coords.begin(), coords.end());
  }
  std::vector<double> dir(x0.size(), 0.0);
  for (std::size_t c : coords) {
    dir[c] = 1.0;
    probe(dir);
    dir[c] = 0.0;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t d = 0; d < opts.directions; ++d) {
    double norm = 0.0;
    for (auto& v : dir) {
      v = normal(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : dir) v /= norm;
    probe(dir);
  }
  report.passed = opts.tol > 0.0 && report.max_rel_error <= opts.tol;
  return report;
}

GradCheckReport grad_check(const PixelFeatures& f, const GridSpec& spec, int v, const LossSpec& loss,
                           const GradCheckOptions& opts) {
  LossSpec fixed = loss;
  if (fixed.kind == LossSpec::Kind::Combined && fixed.ixy.empty()) fixed.ixy = positional_columns(f);
  Matrix grad;
  loss_and_feature_grad(f, spec, v, fixed, opts.assign, &grad);
  PixelFeatures work = f;
  const auto fn = [&](std::span<const double> x) {
    std::copy(x.begin(), x.end(), work.data.data().begin());
    return loss_and_feature_grad(work, spec, v, fixed, opts.assign, nullptr);
  };
  return check_gradient(fn, f.data.data(), grad.data(), opts);
}

GradCheckReport grad_check_model(const PixelFeatures& xylab, const LinearModel& model, const GridSpec& spec, int v,
                                 const LossSpec& loss, const GradCheckOptions& opts) {
  LossSpec fixed = loss;
  if (fixed.ixy.empty()) fixed.ixy = positional_columns(xylab);

  Matrix dl_df;
  loss_and_feature_grad(model_forward(xylab, model), spec, v, fixed, opts.assign, &dl_df);
  const std::vector<double> analytic = model_backward(xylab, model, dl_df).flat();

  LinearModel work = model;
  const auto fn = [&](std::span<const double> params) {
    work.set_parameters(params);
    return loss_and_feature_grad(model_forward(xylab, work), spec, v, fixed, opts.assign, nullptr);
  };
  const std::vector<double> p0 = model.parameters();
  return check_gradient(fn, p0, analytic, opts);
}

}  // namespace ssn
