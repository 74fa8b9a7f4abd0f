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
#include <vector>

#include "ssn/featspace.hpp"
#include "ssn/grid.hpp"
#include "ssn/matrix.hpp"

namespace ssn {

/// Seeded Voronoi corpus used in place of a real segmentation dataset.
struct SyntheticSpec {
  int width = 128;
  int height = 128;
  int min_regions = 8;
  int max_regions = 16;
  double noise_sigma = 4.0;
  /// Region colors are mid-gray +/- contrast * 127.5 per channel.
  double contrast = 1.0;
  std::uint64_t seed = 0;
  /// Also draw a constant random flow vector per region.
  bool with_flow = false;
  double max_flow = 8.0;
};

struct SyntheticSample {
  RawImage image;
  std::vector<SuperpixelId> gt;  // region ids, dense in [0, regions)
  int regions = 0;
  Matrix flow;                   // n x 2 when with_flow
};

/// Sample `index` of the corpus; independent of how many others are drawn.
SyntheticSample synthesize(const SyntheticSpec& spec, std::size_t index);

std::vector<SyntheticSample> synthesize_corpus(const SyntheticSpec& spec, std::size_t count);

}  // namespace ssn
