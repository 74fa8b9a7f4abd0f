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

#include "ssn/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

namespace ssn {

namespace {

// exp(-x) stays a normal double for x <= 700; exp(600) leaves ~1e40 of
// headroom for mass sums before overflow.
constexpr double kUnderflowGuard = 700.0;
constexpr double kOverflowGuard = 600.0;

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double t = a[c] - b[c];
    d += t * t;
  }
  return d;
}

void check_inputs(const PixelFeatures& f, const Matrix& centers, const NeighborTable& nbr) {
  if (f.n() != nbr.n) throw InvalidArgument("soft_assign: feature rows do not match neighbour table");
  if (centers.rows() != static_cast<std::size_t>(nbr.m) || centers.cols() != f.k())
    throw InvalidArgument("soft_assign: center shape mismatch");
}

}  // namespace

double Association::row_sum(std::size_t p) const {
  double s = 0.0;
  for (std::size_t j = 0; j < kCandidates; ++j) s += q[p * kCandidates + j];
  return s;
}

int LabelMap::count() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

void require_finite(const Matrix& m, const char* what) {
  for (double v : m.data())
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite value");
}

double choose_shift(double d_min, double max_row_min) {
  return std::min(std::max(d_min, max_row_min - kUnderflowGuard), d_min + kOverflowGuard);
}

Association soft_assign(const PixelFeatures& f, const SuperpixelState& s, std::shared_ptr<const NeighborTable> nbr,
                        const AssignOptions& opts) {
  if (!nbr) throw InvalidArgument("soft_assign: missing neighbour table");
  check_inputs(f, s.centers, *nbr);
  require_finite(f.data, "soft_assign features");
  require_finite(s.centers, "soft_assign centers");

  const std::size_t n = f.n();
  Association a;
  a.q.assign(n * kCandidates, 0.0);
  a.nearest.assign(n, 0);

  double d_min = std::numeric_limits<double>::infinity();
  double max_row_min = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n; ++p) {
    const auto fp = f.data.row(p);
    double row_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId i = nbr->id(p, j);
      if (i == kNoSuperpixel) continue;
      const double d = squared_distance(fp, s.centers.row(static_cast<std::size_t>(i)));
      a.q[p * kCandidates + j] = d;
      if (d < row_min) {
        row_min = d;
        a.nearest[p] = static_cast<std::uint8_t>(j);
      }
    }
    d_min = std::min(d_min, row_min);
    max_row_min = std::max(max_row_min, row_min);
  }
  if (opts.fixed_shift)
    a.shift = *opts.fixed_shift;
  else
    a.shift = opts.global_shift ? choose_shift(d_min, max_row_min) : 0.0;

  a.col_mass.assign(static_cast<std::size_t>(nbr->m), 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId i = nbr->id(p, j);
      double& qv = a.q[p * kCandidates + j];
      if (i == kNoSuperpixel) continue;
      qv = std::exp(-(qv - a.shift));
      a.col_mass[static_cast<std::size_t>(i)] += qv;
    }
  }
  a.nbr = std::move(nbr);
  return a;
}

SuperpixelState update_centers(const PixelFeatures& f, const Association& q) {
  if (!q.nbr || f.n() != q.n()) throw InvalidArgument("update_centers: association does not match features");
  const std::size_t k = f.k();
  SuperpixelState s;
  s.centers = Matrix(static_cast<std::size_t>(q.m()), k);
  s.mass = q.col_mass;
  for (std::size_t p = 0; p < f.n(); ++p) {
    const auto fp = f.data.row(p);
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId i = q.nbr->id(p, j);
      if (i == kNoSuperpixel) continue;
      const double w = q.at(p, j);
      auto c = s.centers.row(static_cast<std::size_t>(i));
      for (std::size_t d = 0; d < k; ++d) c[d] += w * fp[d];
    }
  }
  for (std::size_t i = 0; i < s.mass.size(); ++i) {
    const double inv = 1.0 / mass_denominator(s.mass[i]);
    for (auto& v : s.centers.row(i)) v *= inv;
  }
  return s;
}

DslicResult run_dslic(const PixelFeatures& f, const GridSpec& spec, std::shared_ptr<const NeighborTable> nbr, int v,
                      const AssignOptions& opts) {
  if (v < 1) throw InvalidArgument("run_dslic: iteration count must be >= 1");
  DslicResult r;
  r.state = init_centers(f, spec);
  for (int t = 0; t < v; ++t) {
    r.assoc = soft_assign(f, r.state, nbr, opts);
    r.state = update_centers(f, r.assoc);
  }
  return r;
}

DslicResult run_dslic(const PixelFeatures& f, const GridSpec& spec, int v, const AssignOptions& opts) {
  return run_dslic(f, spec, std::make_shared<const NeighborTable>(neighbor_table(spec)), v, opts);
}

HardSlicResult run_slic_hard(const PixelFeatures& f, const GridSpec& spec, int v) {
  if (v < 1) throw InvalidArgument("run_slic_hard: iteration count must be >= 1");
  require_finite(f.data, "run_slic_hard features");
  const NeighborTable nbr = neighbor_table(spec);
  const std::size_t n = f.n(), k = f.k();
  HardSlicResult r;
  r.state = init_centers(f, spec);
  r.labels.width = spec.n_w;
  r.labels.height = spec.n_h;
  r.labels.labels.assign(n, 0);

  Matrix sums(static_cast<std::size_t>(spec.m()), k);
  std::vector<double> counts(static_cast<std::size_t>(spec.m()));
  for (int t = 0; t < v; ++t) {
    for (std::size_t p = 0; p < n; ++p) {
      const auto fp = f.data.row(p);
      double best = std::numeric_limits<double>::infinity();
      SuperpixelId arg = kNoSuperpixel;
      for (std::size_t j = 0; j < kCandidates; ++j) {
        const SuperpixelId i = nbr.id(p, j);
        if (i == kNoSuperpixel) continue;
        const double d = squared_distance(fp, r.state.centers.row(static_cast<std::size_t>(i)));
        if (d < best) {
          best = d;
          arg = i;
        }
      }
      r.labels.labels[p] = arg;
    }
    sums.fill(0.0);
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      const auto i = static_cast<std::size_t>(r.labels.labels[p]);
      auto srow = sums.row(i);
      const auto fp = f.data.row(p);
      for (std::size_t d = 0; d < k; ++d) srow[d] += fp[d];
      counts[i] += 1.0;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] == 0.0) continue;
      auto c = r.state.centers.row(i);
      const auto srow = sums.row(i);
      for (std::size_t d = 0; d < k; ++d) c[d] = srow[d] / counts[i];
    }
    r.state.mass = counts;
  }
  return r;
}

LabelMap hard_labels(const Association& q, int width, int height) {
  if (static_cast<std::size_t>(width) * height != q.n()) throw InvalidArgument("hard_labels: dimensions do not match");
  LabelMap out;
  out.width = width;
  out.height = height;
  out.labels.resize(q.n());
  for (std::size_t p = 0; p < q.n(); ++p) {
    double best = -1.0;
    SuperpixelId arg = kNoSuperpixel;
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId i = q.nbr->id(p, j);
      if (i == kNoSuperpixel) continue;
      if (q.at(p, j) > best) {
        best = q.at(p, j);
        arg = i;
      }
    }
    if (!q.nearest.empty() && row_is_dead(q.row_sum(p))) arg = q.nbr->id(p, q.nearest[p]);
    out.labels[p] = arg;
  }
  return out;
}

namespace {

struct Components {
  std::vector<int> comp;         // per pixel
  std::vector<std::size_t> size; // per component, in scan order of first pixel
};

Components label_components(const LabelMap& lm) {
  const int w = lm.width, h = lm.height;
  Components c;
  c.comp.assign(lm.n(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < lm.n(); ++start) {
    if (c.comp[start] >= 0) continue;
    const int id = static_cast<int>(c.size.size());
    const SuperpixelId lab = lm.labels[start];
    std::size_t count = 0;
    c.comp[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++count;
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const auto visit = [&](std::size_t nb) {
        if (c.comp[nb] < 0 && lm.labels[nb] == lab) {
          c.comp[nb] = id;
          stack.push_back(nb);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < w) visit(p + 1);
      if (y > 0) visit(p - w);
      if (y + 1 < h) visit(p + w);
    }
    c.size.push_back(count);
  }
  return c;
}

}  // namespace

LabelMap enforce_connectivity(const LabelMap& labels, const GridSpec& spec) {
  if (labels.n() != spec.n() || labels.width != spec.n_w || labels.height != spec.n_h)
    throw InvalidArgument("enforce_connectivity: label map does not match grid");
  const int w = labels.width, h = labels.height;
  Components comps = label_components(labels);
  const std::size_t nc = comps.size.size();

  std::vector<std::unordered_map<int, std::size_t>> contact(nc);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      const int a = comps.comp[p];
      if (x + 1 < w && comps.comp[p + 1] != a) {
        ++contact[a][comps.comp[p + 1]];
        ++contact[comps.comp[p + 1]][a];
      }
      if (y + 1 < h && comps.comp[p + w] != a) {
        ++contact[a][comps.comp[p + w]];
        ++contact[comps.comp[p + w]][a];
      }
    }
  }

  std::vector<int> parent(nc);
  for (std::size_t i = 0; i < nc; ++i) parent[i] = static_cast<int>(i);
  std::vector<std::size_t> size = comps.size;
  using Entry = std::pair<std::size_t, int>;  // (size, component), smallest first
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < nc; ++i) heap.emplace(size[i], static_cast<int>(i));

  const double n = static_cast<double>(labels.n());
  const std::size_t m = static_cast<std::size_t>(std::max(spec.m(), 1));
  std::size_t active = nc;
  while (active > 1 && !heap.empty()) {
    const auto [sz, a] = heap.top();
    if (parent[a] != a || sz != size[a]) {
      heap.pop();
      continue;
    }
    const double threshold = n / (4.0 * static_cast<double>(std::min(m, active)));
    if (static_cast<double>(sz) >= threshold) break;
    heap.pop();

    int target = -1;
    std::size_t best = 0;
    for (const auto& [b, cnt] : contact[a]) {
      if (cnt > best || (cnt == best && b < target)) {
        best = cnt;
        target = b;
      }
    }
    if (target < 0) break;  // isolated component; only possible when alone

    for (const auto& [c, cnt] : contact[a]) {
      if (c == target) continue;
      contact[target][c] += cnt;
      contact[c].erase(a);
      contact[c][target] += cnt;
    }
    contact[target].erase(a);
    contact[a].clear();
    parent[a] = target;
    size[target] += size[a];
    size[a] = 0;
    --active;
    heap.emplace(size[target], target);
  }

  const auto root = [&](int c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };

  LabelMap out;
  out.width = w;
  out.height = h;
  out.labels.resize(labels.n());
  out.connected = true;
  std::vector<SuperpixelId> new_id(nc, kNoSuperpixel);
  SuperpixelId next = 0;
  for (std::size_t p = 0; p < labels.n(); ++p) {
    const int r = root(comps.comp[p]);
    if (new_id[r] == kNoSuperpixel) new_id[r] = next++;
    out.labels[p] = new_id[r];
  }
  return out;
}

Matrix pixels_to_superpixels(const Matrix& r, const Association& q) {
  if (!q.nbr || r.rows() != q.n()) throw InvalidArgument("pixels_to_superpixels: shape mismatch");
  const std::size_t l = r.cols();
  Matrix out(static_cast<std::size_t>(q.m()), l);
  for (std::size_t p = 0; p < q.n(); ++p) {
    const auto rp = r.row(p);
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId i = q.nbr->id(p, j);
      if (i == kNoSuperpixel) continue;
      const double w = q.at(p, j);
      auto o = out.row(static_cast<std::size_t>(i));
      for (std::size_t c = 0; c < l; ++c) o[c] += w * rp[c];
    }
  }
  for (std::size_t i = 0; i < out.rows(); ++i) {
    const double inv = 1.0 / mass_denominator(q.col_mass[i]);
    for (auto& v : out.row(i)) v *= inv;
  }
  return out;
}

Matrix superpixels_to_pixels(const Matrix& rs, const Association& q) {
  if (!q.nbr || rs.rows() != static_cast<std::size_t>(q.m())) throw InvalidArgument("superpixels_to_pixels: shape mismatch");
  const std::size_t l = rs.cols();
  Matrix out(q.n(), l);
  for (std::size_t p = 0; p < q.n(); ++p) {
    auto o = out.row(p);
    const double total = q.row_sum(p);
    const bool dead = row_is_dead(total);
    const double inv = dead ? 1.0 / q.nbr->valid_count(p) : 1.0 / total;
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId i = q.nbr->id(p, j);
      if (i == kNoSuperpixel) continue;
      const double w = (dead ? 1.0 : q.at(p, j)) * inv;
      const auto ri = rs.row(static_cast<std::size_t>(i));
      for (std::size_t c = 0; c < l; ++c) o[c] += w * ri[c];
    }
  }
  return out;
}

}  // namespace ssn
