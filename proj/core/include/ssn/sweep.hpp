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

#include "ssn/metrics.hpp"
#include "ssn/pipeline.hpp"

namespace ssn {

/// One evaluation image with Lab already computed.
struct EvalSample {
  std::string name;
  int width = 0;
  int height = 0;
  Matrix lab;
  GroundTruth gt;
  RawImage image;  // optional, only used for overlays
};

enum class Method { Ssn, SlicHard };

struct SweepOptions {
  std::vector<int> m_values{100};
  PipelineConfig cfg;
  const LinearModel* model = nullptr;
  Method method = Method::Ssn;
  int boundary_r = 0;  // <= 0: benchmark default
};

/// Segments every sample at every requested superpixel count (gamma_pos is
/// recomputed per count) and evaluates it. Rows are ordered by m, then by
/// image name; each m ends with a summary row named "mean". A failing image
/// yields a row with failed = true and the sweep continues.
std::vector<EvalReport> sweep(const std::vector<EvalSample>& samples, const SweepOptions& opts);

/// Segments one sample with the options' method.
LabelMap segment_sample(const EvalSample& sample, int m_target, const SweepOptions& opts);

/// Mean ASA over the samples at a single superpixel count.
double mean_asa(const std::vector<EvalSample>& samples, int m_target, const SweepOptions& opts);

inline constexpr const char* kReportHeader = "image,m_requested,m_achieved,asa,br,bp,f,co,epe";

/// CSV with the fixed column order above; failed rows carry empty metrics.
std::string report_csv(const std::vector<EvalReport>& rows);

}  // namespace ssn
