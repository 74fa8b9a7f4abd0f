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

#include <string>
#include <vector>

#include "ssn/cluster.hpp"

namespace ssn {

/// Ground truth for one image: a dense segment map, a flow field, or both.
struct GroundTruth {
  int width = 0;
  int height = 0;
  std::vector<SuperpixelId> labels;  // empty if not available
  Matrix flow;                       // n x 2, empty if not available

  bool has_labels() const { return !labels.empty(); }
  bool has_flow() const { return !flow.empty(); }
};

struct BoundaryPR {
  double precision = 0.0;
  double recall = 0.0;
};

/// Fraction of pixels covered when each superpixel is assigned its
/// best-overlapping ground-truth segment.
double asa(const std::vector<SuperpixelId>& h, const std::vector<SuperpixelId>& g);

/// Benchmark default tolerance: round(0.0025 * diagonal), at least 1.
int default_boundary_tolerance(int width, int height);

/// Pixels whose 4-neighbourhood contains a different label.
std::vector<unsigned char> boundary_mask(const std::vector<SuperpixelId>& labels, int width, int height);

/// Boundary precision/recall with a Chebyshev tolerance of r pixels. An
/// empty boundary set gives 0 for the corresponding ratio.
BoundaryPR boundary_pr(const std::vector<SuperpixelId>& h, const std::vector<SuperpixelId>& g, int width, int height,
                       int r);

double f_measure(const BoundaryPR& pr);

/// Area-weighted isoperimetric quotient 4*pi*A/P^2 (clamped to 1), with P
/// counted in pixel edges including the image border.
double compactness_score(const LabelMap& h);

/// Mean end-point error after replacing the flow by its per-segment mean.
double segmented_flow_epe(const std::vector<SuperpixelId>& h, const Matrix& flow);

struct EvalReport {
  std::string image;
  int m_requested = 0;
  int m_achieved = 0;
  double asa = 0.0;
  double br = 0.0;
  double bp = 0.0;
  double f = 0.0;
  double co = 0.0;
  double epe = 0.0;
  bool has_epe = false;
  bool failed = false;
  std::string error;
};

/// All metrics of one segmentation. r <= 0 selects the default tolerance.
EvalReport evaluate(const LabelMap& h, const GroundTruth& gt, int r = 0);

}  // namespace ssn
