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

#include <memory>
#include <vector>

#include "ssn/cluster.hpp"

namespace ssn {

/// One recorded round of differentiable SLIC.
struct TapeStep {
  Matrix centers_in;   // S^{t-1}
  Association assoc;   // Q^t, Z^t and the shift used
  Matrix centers_out;  // S^t
};

/// Everything backward() needs to differentiate run_dslic without
/// recomputation.
struct Tape {
  PixelFeatures features;
  std::vector<SuperpixelId> owner;
  std::vector<double> cell_count;
  std::shared_ptr<const NeighborTable> nbr;
  AssignOptions options;
  std::vector<TapeStep> steps;

  std::size_t length() const { return steps.size(); }
};

struct RecordedRun {
  DslicResult result;
  Tape tape;
};

/// run_dslic that also fills a Tape. Outputs are bit-identical to run_dslic.
RecordedRun forward_recorded(const PixelFeatures& f, const GridSpec& spec, int v, const AssignOptions& opts = {});

/// Recomputes the forward pass from the tape's inputs, reusing the recorded
/// shifts. Used to check that the tape is self-consistent.
DslicResult replay(const Tape& tape);

/// Reverse-mode gradient of F -> (Q^v, S^v). Either cotangent may be an
/// empty Matrix, meaning zero. The shift is treated as a constant; every
/// quantity normalized by Z is invariant to it.
Matrix backward(const Tape& tape, const Matrix& dl_dq, const Matrix& dl_ds);

}  // namespace ssn
