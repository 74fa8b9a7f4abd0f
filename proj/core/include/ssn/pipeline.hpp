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
#include "ssn/diff.hpp"
#include "ssn/linear_model.hpp"
#include "ssn/loss.hpp"

namespace ssn {

/// Parameters shared by segmentation, training and evaluation.
struct PipelineConfig {
  int m_target = 100;
  int v = 10;
  double eta = kDefaultEta;
  double gamma_color = kDefaultGammaColor;
  bool connectivity = true;
};

struct Segmentation {
  GridSpec grid;
  FeatureScales scales;
  PixelFeatures features;
  DslicResult dslic;
  LabelMap raw;     // argmax of Q
  LabelMap labels;  // after connectivity enforcement, if enabled
};

/// Grid and feature scales for an image; gamma_pos follows the achieved grid.
GridSpec grid_for(int width, int height, const PipelineConfig& cfg, FeatureScales* scales = nullptr);

/// Scaled XYLab features, optionally extended by a learned model (k > 5).
PixelFeatures pixel_features(const Matrix& lab, int width, int height, const FeatureScales& scales,
                             const LinearModel* model);

/// Full inference: features -> differentiable SLIC -> argmax -> connectivity.
Segmentation segment(const Matrix& lab, int width, int height, const PipelineConfig& cfg,
                     const LinearModel* model = nullptr);
Segmentation segment(const RawImage& img, const PipelineConfig& cfg, const LinearModel* model = nullptr);

/// Same pre/post-processing around run_slic_hard instead of the soft iterations.
LabelMap segment_slic_hard(const Matrix& lab, int width, int height, const PipelineConfig& cfg);

struct SampleGradient {
  LossValue loss;
  std::vector<double> grad;  // flattened model gradient
};

/// Combined loss of one training sample and its gradient with respect to the
/// model parameters. gt holds any non-negative ids; they are densified first.
SampleGradient sample_gradient(const Matrix& lab, int width, int height, const std::vector<SuperpixelId>& gt,
                               const LinearModel& model, const PipelineConfig& cfg, double lambda = kDefaultLambda);

/// Maps arbitrary ids onto 0..w-1 in order of first appearance.
std::vector<SuperpixelId> densify(const std::vector<SuperpixelId>& ids);

/// Columns 0-1 of a feature matrix.
Matrix positional_columns(const PixelFeatures& f);

}  // namespace ssn
