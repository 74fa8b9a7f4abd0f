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
#include <span>
#include <string>
#include <vector>

#include "ssn/featspace.hpp"

namespace ssn {

/// Learned linear map from the 5 XYLab channels to k-5 extra channels that
/// are appended to XYLab. With k = 5 there is no model.
struct LinearModel {
  std::size_t k = kBaseFeatures;
  Matrix weights;             // 5 x (k-5)
  std::vector<double> bias;   // k-5

  LinearModel() = default;
  explicit LinearModel(std::size_t k_out);

  std::size_t extra() const { return k - kBaseFeatures; }
  std::size_t parameter_count() const { return weights.size() + bias.size(); }

  /// Flattened (weights row-major, then bias).
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);

  /// Gaussian initialization with the given std-dev; deterministic in seed.
  static LinearModel random(std::size_t k_out, double stddev, std::uint64_t seed);
};

struct ModelGradient {
  Matrix weights;            // 5 x (k-5)
  std::vector<double> bias;  // k-5
  Matrix input;              // n x 5

  std::vector<double> flat() const;
};

/// Columns 0-4 copy the input; columns 5..k-1 are xylab * W + b.
PixelFeatures model_forward(const PixelFeatures& xylab, const LinearModel& model);

/// Gradients of model_forward given dL/dF.
ModelGradient model_backward(const PixelFeatures& xylab, const LinearModel& model, const Matrix& dl_df);

/// Checkpoint: 16-byte header ("SSNL", u32 version, u32 k, u32 reserved)
/// followed by the flattened parameters as little-endian float64.
void save_checkpoint(const std::string& path, const LinearModel& model);
LinearModel load_checkpoint(const std::string& path);

inline constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace ssn
