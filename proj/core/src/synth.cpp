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

#include "ssn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <random>
#include <unordered_set>

namespace ssn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SyntheticSample synthesize(const SyntheticSpec& spec, std::size_t index) {
  if (spec.width < 1 || spec.height < 1) throw InvalidArgument("synthesize: image size must be positive");
  if (spec.min_regions < 1 || spec.max_regions < spec.min_regions) throw InvalidArgument("synthesize: bad region range");
  const std::size_t n = static_cast<std::size_t>(spec.width) * spec.height;
  if (static_cast<std::size_t>(spec.max_regions) > n) throw InvalidArgument("synthesize: more regions than pixels");
  if (spec.noise_sigma < 0 || spec.contrast < 0 || spec.contrast > 1) throw InvalidArgument("synthesize: bad noise/contrast");

  std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(index)));
  SyntheticSample s;
  s.regions = std::uniform_int_distribution<int>(spec.min_regions, spec.max_regions)(rng);

  // distinct integer sites, so each site's own pixel is in its cell
  std::vector<std::pair<int, int>> sites;
  std::unordered_set<std::size_t> used;
  std::uniform_int_distribution<int> ux(0, spec.width - 1), uy(0, spec.height - 1);
  while (static_cast<int>(sites.size()) < s.regions) {
    const int x = ux(rng), y = uy(rng);
    if (used.insert(static_cast<std::size_t>(y) * spec.width + x).second) sites.emplace_back(x, y);
  }

  std::uniform_real_distribution<double> ucolor(-1.0, 1.0);
  std::vector<std::array<double, 3>> colors(s.regions);
  for (auto& c : colors)
    for (auto& ch : c) ch = 127.5 + spec.contrast * 127.5 * ucolor(rng);

  std::vector<std::array<double, 2>> flows(s.regions);
  if (spec.with_flow) {
    std::uniform_real_distribution<double> uf(-spec.max_flow, spec.max_flow);
    for (auto& f : flows) f = {uf(rng), uf(rng)};
    s.flow = Matrix(n, 2);
  }

  s.image = RawImage(spec.width, spec.height);
  s.gt.resize(n);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0 ? spec.noise_sigma : 1.0);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      long long best = -1;
      int arg = 0;
      for (int r = 0; r < s.regions; ++r) {
        const long long dx = x - sites[r].first, dy = y - sites[r].second;
        const long long d = dx * dx + dy * dy;
        if (best < 0 || d < best) {
          best = d;
          arg = r;
        }
      }
      const std::size_t p = static_cast<std::size_t>(y) * spec.width + x;
      s.gt[p] = arg;
      std::uint8_t* px = s.image.at(x, y);
      for (int c = 0; c < 3; ++c) {
        const double v = colors[arg][c] + (spec.noise_sigma > 0 ? noise(rng) : 0.0);
        px[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
      if (spec.with_flow) {
        s.flow(p, 0) = flows[arg][0];
        s.flow(p, 1) = flows[arg][1];
      }
    }
  }
  return s;
}

std::vector<SyntheticSample> synthesize_corpus(const SyntheticSpec& spec, std::size_t count) {
  std::vector<SyntheticSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(synthesize(spec, i));
  return out;
}

}  // namespace ssn
