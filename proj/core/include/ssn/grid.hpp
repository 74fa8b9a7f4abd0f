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

#include <array>
#include <cstdint>
#include <vector>

#include "ssn/featspace.hpp"
#include "ssn/matrix.hpp"

namespace ssn {

using SuperpixelId = std::int32_t;
inline constexpr SuperpixelId kNoSuperpixel = -1;
inline constexpr std::size_t kCandidates = 9;

/// Regular superpixel grid over an n_w x n_h image. Cell ids are row-major:
/// id = row * m_w + col.
struct GridSpec {
  int n_w = 0, n_h = 0;
  int m_w = 0, m_h = 0;
  std::vector<SuperpixelId> owner;  // per pixel, row-major

  int m() const { return m_w * m_h; }
  std::size_t n() const { return static_cast<std::size_t>(n_w) * n_h; }
  double cell_w() const { return static_cast<double>(n_w) / m_w; }
  double cell_h() const { return static_cast<double>(n_h) / m_h; }
};

/// Fixed candidate set per pixel: the owner cell and its 8 grid neighbours.
/// Slot s corresponds to (dr, dc) = (s / 3 - 1, s % 3 - 1), so within a row
/// valid ids increase with the slot index.
struct NeighborTable {
  std::size_t n = 0;
  int m = 0;
  std::vector<SuperpixelId> idx;  // n x 9, kNoSuperpixel where invalid

  SuperpixelId id(std::size_t p, std::size_t s) const { return idx[p * kCandidates + s]; }
  bool valid(std::size_t p, std::size_t s) const { return idx[p * kCandidates + s] != kNoSuperpixel; }
  int valid_count(std::size_t p) const;
};

/// Cluster centers and the (soft or hard) mass attached to each.
struct SuperpixelState {
  Matrix centers;            // m x k
  std::vector<double> mass;  // m
};

/// Picks m_w, m_h for a requested superpixel count, keeping cells close to
/// square. The achieved count m() may differ from m_target.
GridSpec plan_grid(int n_w, int n_h, int m_target);

/// Grid with explicit dimensions.
GridSpec make_grid(int n_w, int n_h, int m_w, int m_h);

NeighborTable neighbor_table(const GridSpec& spec);

/// Mean feature of each grid cell; mass is the cell's pixel count.
SuperpixelState init_centers(const PixelFeatures& f, const GridSpec& spec);

/// Number of pixels owned by each cell.
std::vector<std::size_t> cell_sizes(const GridSpec& spec);

}  // namespace ssn
