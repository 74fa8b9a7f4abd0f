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

#include "ssn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <numbers>
#include <unordered_map>

namespace ssn {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": size mismatch");
}

// Summed-area table of a 0/1 mask, (w+1) x (h+1).
std::vector<std::size_t> integral(const std::vector<unsigned char>& mask, int w, int h) {
  std::vector<std::size_t> s(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::size_t run = 0;
    for (int x = 0; x < w; ++x) {
      run += mask[static_cast<std::size_t>(y) * w + x];
      s[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] = s[static_cast<std::size_t>(y) * (w + 1) + x + 1] + run;
    }
  }
  return s;
}

// Fraction of set pixels in `from` that have a set pixel of `to` within r.
double matched_fraction(const std::vector<unsigned char>& from, const std::vector<unsigned char>& to, int w, int h,
                        int r) {
  const auto table = integral(to, w, h);
  const auto at = [&](int x, int y) { return table[static_cast<std::size_t>(y) * (w + 1) + x]; };
  std::size_t total = 0, hit = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!from[static_cast<std::size_t>(y) * w + x]) continue;
      ++total;
      const int x0 = std::max(x - r, 0), x1 = std::min(x + r, w - 1);
      const int y0 = std::max(y - r, 0), y1 = std::min(y + r, h - 1);
      const std::size_t count = at(x1 + 1, y1 + 1) + at(x0, y0) - at(x0, y1 + 1) - at(x1 + 1, y0);
      if (count > 0) ++hit;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace

double asa(const std::vector<SuperpixelId>& h, const std::vector<SuperpixelId>& g) {
  require_same(h.size(), g.size(), "asa");
  if (h.empty()) return 0.0;
  std::unordered_map<SuperpixelId, std::unordered_map<SuperpixelId, std::size_t>> overlap;
  for (std::size_t p = 0; p < h.size(); ++p) ++overlap[h[p]][g[p]];
  std::size_t covered = 0;
  for (const auto& [seg, counts] : overlap) {
    std::size_t best = 0;
    for (const auto& [gt, c] : counts) best = std::max(best, c);
    covered += best;
  }
  return static_cast<double>(covered) / static_cast<double>(h.size());
}

int default_boundary_tolerance(int width, int height) {
  const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
  return std::max(1, static_cast<int>(std::lround(0.0025 * diag)));
}

std::vector<unsigned char> boundary_mask(const std::vector<SuperpixelId>& labels, int w, int h) {
  require_same(labels.size(), static_cast<std::size_t>(w) * h, "boundary_mask");
  std::vector<unsigned char> mask(labels.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      const SuperpixelId l = labels[p];
      if ((x > 0 && labels[p - 1] != l) || (x + 1 < w && labels[p + 1] != l) || (y > 0 && labels[p - w] != l) ||
          (y + 1 < h && labels[p + w] != l))
        mask[p] = 1;
    }
  }
  return mask;
}

BoundaryPR boundary_pr(const std::vector<SuperpixelId>& h, const std::vector<SuperpixelId>& g, int width, int height,
                       int r) {
  require_same(h.size(), g.size(), "boundary_pr");
  const auto bh = boundary_mask(h, width, height);
  const auto bg = boundary_mask(g, width, height);
  BoundaryPR pr;
  pr.precision = matched_fraction(bh, bg, width, height, r);
  pr.recall = matched_fraction(bg, bh, width, height, r);
  return pr;
}

double f_measure(const BoundaryPR& pr) {
  const double s = pr.precision + pr.recall;
  return s > 0.0 ? 2.0 * pr.precision * pr.recall / s : 0.0;
}

double compactness_score(const LabelMap& lm) {
  const int w = lm.width, h = lm.height;
  require_same(lm.n(), static_cast<std::size_t>(w) * h, "compactness_score");
  if (lm.labels.empty()) return 0.0;
  std::unordered_map<SuperpixelId, std::pair<std::size_t, std::size_t>> stats;  // area, perimeter
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      const SuperpixelId l = lm.labels[p];
      auto& s = stats[l];
      ++s.first;
      s.second += (x == 0 || lm.labels[p - 1] != l) + (x + 1 == w || lm.labels[p + 1] != l) +
                  (y == 0 || lm.labels[p - w] != l) + (y + 1 == h || lm.labels[p + w] != l);
    }
  }
  const double n = static_cast<double>(lm.n());
  double co = 0.0;
  for (const auto& [l, s] : stats) {
    const double area = static_cast<double>(s.first), perim = static_cast<double>(s.second);
    const double q = std::min(1.0, 4.0 * std::numbers::pi * area / (perim * perim));
    co += area / n * q;
  }
  return co;
}

double segmented_flow_epe(const std::vector<SuperpixelId>& h, const Matrix& flow) {
  require_same(h.size(), flow.rows(), "segmented_flow_epe");
  if (flow.cols() != 2) throw InvalidArgument("segmented_flow_epe: flow must have 2 columns");
  if (h.empty()) return 0.0;
  std::unordered_map<SuperpixelId, std::array<double, 3>> mean;
  for (std::size_t p = 0; p < h.size(); ++p) {
    auto& m = mean[h[p]];
    m[0] += flow(p, 0);
    m[1] += flow(p, 1);
    m[2] += 1.0;
  }
  for (auto& [l, m] : mean) {
    m[0] /= m[2];
    m[1] /= m[2];
  }
  double total = 0.0;
  for (std::size_t p = 0; p < h.size(); ++p) {
    const auto& m = mean[h[p]];
    total += std::hypot(flow(p, 0) - m[0], flow(p, 1) - m[1]);
  }
  return total / static_cast<double>(h.size());
}

EvalReport evaluate(const LabelMap& h, const GroundTruth& gt, int r) {
  if (gt.width != h.width || gt.height != h.height) throw InvalidArgument("evaluate: dimensions differ");
  EvalReport rep;
  rep.m_achieved = h.count();
  rep.co = compactness_score(h);
  if (gt.has_labels()) {
    const int tol = r > 0 ? r : default_boundary_tolerance(h.width, h.height);
    rep.asa = asa(h.labels, gt.labels);
    const BoundaryPR pr = boundary_pr(h.labels, gt.labels, h.width, h.height, tol);
    rep.bp = pr.precision;
    rep.br = pr.recall;
    rep.f = f_measure(pr);
  }
  if (gt.has_flow()) {
    rep.epe = segmented_flow_epe(h.labels, gt.flow);
    rep.has_epe = true;
  }
  return rep;
}

}  // namespace ssn
