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
#include <functional>
#include <span>
#include <vector>

#include "ssn/cluster.hpp"
#include "ssn/linear_model.hpp"
#include "ssn/loss.hpp"

namespace ssn {

/// Scalar objective used by the gradient checker.
struct LossSpec {
  enum class Kind {
    LinearCenters,      // sum(W .* S^v)
    LinearAssociation,  // sum(W .* Q^v); depends on the shift, so check it with the shift disabled
    Combined,           // combined_loss on Q^v with H = argmax Q^v
  };
  Kind kind = Kind::Combined;
  Matrix weights;         // m x k or n x 9 for the linear kinds
  PixelProperty property; // Combined
  Matrix ixy;             // Combined; if empty, columns 0-1 of the input features
  double lambda = kDefaultLambda;
};

struct GradCheckOptions {
  double h = 1e-5;
  double tol = 1e-4;
  /// Coordinates probed one by one; all of them when the input is smaller.
  std::size_t max_entries = 400;
  /// Additional random-direction probes.
  std::size_t directions = 4;
  std::uint64_t seed = 1;
  /// Denominator floor of the relative error.
  double abs_floor = 1e-6;
  AssignOptions assign;
};

struct GradProbe {
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradProbe> probes;
  double max_rel_error = 0.0;
  bool passed = false;
};

/// Value and gradient of the loss with respect to the clustering features.
double loss_and_feature_grad(const PixelFeatures& f, const GridSpec& spec, int v, const LossSpec& loss,
                             const AssignOptions& assign, Matrix* dl_df);

/// Central differences against an analytic gradient. The check passes iff
/// the largest relative error is <= tol; a zero tolerance always fails.
GradCheckReport check_gradient(const std::function<double(std::span<const double>)>& fn, std::span<const double> x0,
                               std::span<const double> analytic, const GradCheckOptions& opts);

/// Gradient check of backward() with respect to the features F.
GradCheckReport grad_check(const PixelFeatures& f, const GridSpec& spec, int v, const LossSpec& loss,
                           const GradCheckOptions& opts = {});

/// Gradient check with respect to the linear model parameters, through
/// model_forward, the clustering, and the loss.
GradCheckReport grad_check_model(const PixelFeatures& xylab, const LinearModel& model, const GridSpec& spec, int v,
                                 const LossSpec& loss, const GradCheckOptions& opts = {});

}  // namespace ssn
