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

#include <vector>

#include "ssn/cluster.hpp"

namespace ssn {

enum class PropertyKind { OneHotLabels, FlowVectors };

/// Per-pixel quantity the superpixels should be able to reproduce.
struct PixelProperty {
  Matrix r;  // n x l
  PropertyKind kind = PropertyKind::OneHotLabels;
};

/// One-hot encoding of dense segment ids (l = max id + 1).
PixelProperty one_hot(const std::vector<SuperpixelId>& labels);
PixelProperty flow_property(const Matrix& flow);

inline constexpr double kCrossEntropyFloor = 1e-12;
inline constexpr double kDefaultLambda = 1e-5;

/// A scalar loss and its gradient with respect to the association entries
/// (n x 9, zero on invalid slots).
struct LossWithGrad {
  double value = 0.0;
  Matrix dl_dq;
};

struct LossValue {
  double recon = 0.0;
  double compact = 0.0;
  double total = 0.0;
  double lambda = kDefaultLambda;
  Matrix dl_dq;
};

/// Loss between R and R* = Qrow (Qcol^T R). Cross-entropy for labels
/// (mean over pixels, R* clamped at 1e-12), mean per-pixel L1 for flow.
LossWithGrad recon_loss(const PixelProperty& r, const Association& q);

/// Mean over pixels of |I_p - S^xy_{H_p}|^2 with S^xy = Qcol^T I. Gradient
/// flows through the column-normalized mapping only; H is constant.
LossWithGrad compact_loss(const Matrix& ixy, const Association& q, const LabelMap& h);

/// recon + lambda * compact, with summed gradients.
LossValue combined_loss(const PixelProperty& r, const Matrix& ixy, const Association& q, const LabelMap& h,
                        double lambda = kDefaultLambda);

}  // namespace ssn
