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
#include <memory>
#include <optional>
#include <vector>

#include "ssn/featspace.hpp"
#include "ssn/grid.hpp"
#include "ssn/matrix.hpp"

namespace ssn {

/// Floor on column masses before dividing. Columns at or above it are
/// divided exactly, so every normalized quantity is scale-invariant in Q.
inline constexpr double kMassEpsilon = 1e-8;

inline double mass_denominator(double z) { return z < kMassEpsilon ? kMassEpsilon : z; }
/// Rows summing below this are treated as underflowed: their few remaining
/// bits carry no usable ratio, and 1/sum would overflow in the backward pass.
inline constexpr double kRowFloor = 1e-250;

inline bool row_is_dead(double row_sum) { return !(row_sum >= kRowFloor); }

/// d mass_denominator / dz
inline double mass_denominator_slope(double z) { return z < kMassEpsilon ? 0.0 : 1.0; }

/// Soft pixel-superpixel associations restricted to each pixel's nine
/// candidate cells. Entries are exp(-(D - shift)) for one scalar shift shared
/// by the whole image, so every normalized quantity derived from q is
/// identical to the unshifted exp(-D).
struct Association {
  std::shared_ptr<const NeighborTable> nbr;
  std::vector<double> q;         // n x 9, zero on invalid slots
  std::vector<double> col_mass;  // m, Z_i = sum_p q_pi
  double shift = 0.0;
  /// Slot of the smallest distance per row, kept so rows that underflowed
  /// still have a well-defined argmax. Empty when not recorded.
  std::vector<std::uint8_t> nearest;

  std::size_t n() const { return nbr ? nbr->n : 0; }
  int m() const { return nbr ? nbr->m : 0; }
  double at(std::size_t p, std::size_t s) const { return q[p * kCandidates + s]; }
  double row_sum(std::size_t p) const;
};

struct AssignOptions {
  /// Subtract a global constant from D before exponentiating. Disabling it
  /// is only meaningful for tests on fixtures that cannot underflow.
  bool global_shift = true;
  /// Use exactly this shift instead of choosing one (tape replay).
  std::optional<double> fixed_shift;
};

/// Hard superpixel ids per pixel.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<SuperpixelId> labels;
  bool connected = false;

  std::size_t n() const { return labels.size(); }
  /// max label + 1 (0 when empty)
  int count() const;
};

struct DslicResult {
  Association assoc;
  SuperpixelState state;
};

struct HardSlicResult {
  LabelMap labels;
  SuperpixelState state;
};

/// Q_pi = exp(-(|F_p - S_i|^2 - shift)) over valid candidates. The shift is
/// the global minimum distance; it is raised only when some pixel's best
/// candidate would otherwise underflow to zero (see choose_shift).
Association soft_assign(const PixelFeatures& f, const SuperpixelState& s, std::shared_ptr<const NeighborTable> nbr,
                        const AssignOptions& opts = {});

/// The scalar subtracted from all distances: the global minimum d_min,
/// lifted towards max_row_min - 700 so no row vanishes, but never more than
/// d_min + 600 so sums stay finite.
double choose_shift(double d_min, double max_row_min);

/// S_i = sum_p Q_pi F_p / max(Z_i, eps).
SuperpixelState update_centers(const PixelFeatures& f, const Association& q);

/// Differentiable SLIC: v rounds of (soft_assign, update_centers) from the grid means.
DslicResult run_dslic(const PixelFeatures& f, const GridSpec& spec, int v, const AssignOptions& opts = {});
DslicResult run_dslic(const PixelFeatures& f, const GridSpec& spec, std::shared_ptr<const NeighborTable> nbr, int v,
                      const AssignOptions& opts = {});

/// Classic SLIC on the same candidate sets: nearest center (ties to the
/// lower id), then cluster means. A cluster that loses all pixels keeps its
/// previous center.
HardSlicResult run_slic_hard(const PixelFeatures& f, const GridSpec& spec, int v);

/// Row-wise argmax of Q; ties go to the lowest superpixel id. An underflowed
/// row takes its recorded nearest slot when available.
LabelMap hard_labels(const Association& q, int width, int height);

/// Splits labels into 4-connected components and merges undersized ones
/// (below n / (4 * min(m, current count))) into the neighbour sharing the most
/// boundary, smallest first. Output ids are dense in scan order.
LabelMap enforce_connectivity(const LabelMap& labels, const GridSpec& spec);

/// Column-normalized mapping, m x l: R_i = sum_p Q_pi R_p / max(Z_i, eps).
Matrix pixels_to_superpixels(const Matrix& r, const Association& q);

/// Row-normalized mapping, n x l: R*_p = sum_i Q_pi R_i / sum_i Q_pi.
/// A row whose weights underflowed (see kRowFloor) falls back to the uniform
/// average of its valid candidates.
Matrix superpixels_to_pixels(const Matrix& rs, const Association& q);

/// Throws NumericError on NaN/inf.
void require_finite(const Matrix& m, const char* what);

}  // namespace ssn
