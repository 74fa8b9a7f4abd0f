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

#include "ssn/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ssn {

int NeighborTable::valid_count(std::size_t p) const {
  int c = 0;
  for (std::size_t s = 0; s < kCandidates; ++s) c += valid(p, s) ? 1 : 0;
  return c;
}

GridSpec make_grid(int n_w, int n_h, int m_w, int m_h) {
  if (n_w < 1 || n_h < 1) throw InvalidArgument("make_grid: image dimensions must be positive");
  if (m_w < 1 || m_w > n_w || m_h < 1 || m_h > n_h) throw InvalidArgument("make_grid: grid dimensions out of range");
  GridSpec g;
  g.n_w = n_w;
  g.n_h = n_h;
  g.m_w = m_w;
  g.m_h = m_h;
  g.owner.resize(g.n());
  // floor(x / (n_w / m_w)) computed exactly in integers
  std::vector<int> col_of(n_w);
  for (int x = 0; x < n_w; ++x)
    col_of[x] = std::min(static_cast<int>(static_cast<long long>(x) * m_w / n_w), m_w - 1);
  for (int y = 0; y < n_h; ++y) {
    const int r = std::min(static_cast<int>(static_cast<long long>(y) * m_h / n_h), m_h - 1);
    for (int x = 0; x < n_w; ++x) g.owner[static_cast<std::size_t>(y) * n_w + x] = r * m_w + col_of[x];
  }
  return g;
}

GridSpec plan_grid(int n_w, int n_h, int m_target) {
  if (n_w < 1 || n_h < 1) throw InvalidArgument("plan_grid: image dimensions must be positive");
  if (m_target < 1 || static_cast<long long>(m_target) > static_cast<long long>(n_w) * n_h)
    throw InvalidArgument("plan_grid: m_target must lie in [1, n_w*n_h]");
  const double aspect = static_cast<double>(n_w) / n_h;
  const int m_w = std::clamp(static_cast<int>(std::lround(std::sqrt(m_target * aspect))), 1, n_w);
  const int m_h = std::clamp(static_cast<int>(std::lround(static_cast<double>(m_target) / m_w)), 1, n_h);
  return make_grid(n_w, n_h, m_w, m_h);
}

NeighborTable neighbor_table(const GridSpec& spec) {
  NeighborTable t;
  t.n = spec.n();
  t.m = spec.m();
  t.idx.assign(t.n * kCandidates, kNoSuperpixel);
  for (std::size_t p = 0; p < t.n; ++p) {
    const int r = spec.owner[p] / spec.m_w;
    const int c = spec.owner[p] % spec.m_w;
    for (int s = 0; s < static_cast<int>(kCandidates); ++s) {
      const int rr = r + s / 3 - 1;
      const int cc = c + s % 3 - 1;
      if (rr >= 0 && rr < spec.m_h && cc >= 0 && cc < spec.m_w) t.idx[p * kCandidates + s] = rr * spec.m_w + cc;
    }
  }
  return t;
}

std::vector<std::size_t> cell_sizes(const GridSpec& spec) {
  std::vector<std::size_t> sizes(spec.m(), 0);
  for (auto o : spec.owner) ++sizes[o];
  return sizes;
}

SuperpixelState init_centers(const PixelFeatures& f, const GridSpec& spec) {
  if (f.n() != spec.n()) throw InvalidArgument("init_centers: feature rows do not match grid");
  const std::size_t k = f.k();
  SuperpixelState s;
  s.centers = Matrix(spec.m(), k);
  s.mass.assign(spec.m(), 0.0);
  for (std::size_t p = 0; p < f.n(); ++p) {
    const auto i = static_cast<std::size_t>(spec.owner[p]);
    auto c = s.centers.row(i);
    const auto fp = f.data.row(p);
    for (std::size_t d = 0; d < k; ++d) c[d] += fp[d];
    s.mass[i] += 1.0;
  }
  for (std::size_t i = 0; i < s.mass.size(); ++i) {
    auto c = s.centers.row(i);
    for (auto& v : c) v /= s.mass[i];
  }
  return s;
}

}  // namespace ssn
