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

#include "ssn/matrix.hpp"

namespace ssn {

/// 8-bit sRGB image, row-major, three interleaved channels per pixel.
struct RawImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  RawImage() = default;
  RawImage(int w, int h, std::uint8_t fill = 0);

  std::size_t pixels() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  std::uint8_t* at(int x, int y) { return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
  const std::uint8_t* at(int x, int y) const { return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x); }

  /// Throws InvalidArgument if dimensions or buffer size are inconsistent.
  void validate() const;
};

struct FeatureScales {
  double gamma_pos = 1.0;
  double gamma_color = 0.26;
  double eta = 2.5;
};

inline constexpr double kDefaultEta = 2.5;
inline constexpr double kDefaultGammaColor = 0.26;
inline constexpr std::size_t kBaseFeatures = 5;

/// Per-pixel feature matrix. Columns 0-1 hold scaled x,y; columns 2-4 scaled
/// L,a,b; anything beyond is produced by a learned transform.
struct PixelFeatures {
  int width = 0;
  int height = 0;
  Matrix data;

  std::size_t n() const { return data.rows(); }
  std::size_t k() const { return data.cols(); }
};

/// CIE L*a*b* (D65) for every pixel, as an n x 3 matrix.
Matrix rgb_to_lab(const RawImage& img);

/// Single-pixel conversion used by rgb_to_lab.
void srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b, double lab[3]);

/// gamma_pos = eta * max(m_w/n_w, m_h/n_h).
FeatureScales compute_scales(int n_w, int n_h, int m_w, int m_h, double eta = kDefaultEta,
                             double gamma_color = kDefaultGammaColor);

/// Scaled XYLab features (k = 5). Lab is first mapped onto 0..255
/// (L*255/100, a+128, b+128) so gamma_color keeps its 0..255 meaning.
PixelFeatures build_features(const RawImage& img, const FeatureScales& scales);

/// Same as build_features but from a precomputed Lab matrix, so callers that
/// rescan for several superpixel counts only convert colors once.
PixelFeatures build_features(const Matrix& lab, int width, int height, const FeatureScales& scales);

}  // namespace ssn
