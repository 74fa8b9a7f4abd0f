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

#include "ssn/featspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ssn {

namespace {

// sRGB primaries to XYZ, D65. The white point is taken as the row sums so
// that (255,255,255) lands exactly on L=100, a=b=0.
constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kWhite[3] = {
    kM[0][0] + kM[0][1] + kM[0][2],
    kM[1][0] + kM[1][1] + kM[1][2],
    kM[2][0] + kM[2][1] + kM[2][2],
};

double decode_srgb(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

struct LinearTable {
  double v[256];
  LinearTable() {
    for (int i = 0; i < 256; ++i) v[i] = decode_srgb(i / 255.0);
  }
};

const LinearTable& linear_table() {
  static const LinearTable table;
  return table;
}

}  // namespace

RawImage::RawImage(int w, int h, std::uint8_t fill)
    : width(w), height(h), rgb(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0) * 3, fill) {}

void RawImage::validate() const {
  if (width < 1 || height < 1) throw InvalidArgument("RawImage: dimensions must be positive");
  if (rgb.size() != pixels() * 3) throw InvalidArgument("RawImage: buffer size does not match dimensions");
}

void srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b, double lab[3]) {
  const auto& lin = linear_table();
  const double rl = lin.v[r], gl = lin.v[g], bl = lin.v[b];
  double xyz[3];
  for (int i = 0; i < 3; ++i) xyz[i] = (kM[i][0] * rl + kM[i][1] * gl + kM[i][2] * bl) / kWhite[i];
  const double fx = lab_f(xyz[0]), fy = lab_f(xyz[1]), fz = lab_f(xyz[2]);
  lab[0] = 116.0 * fy - 16.0;
  lab[1] = 500.0 * (fx - fy);
  lab[2] = 200.0 * (fy - fz);
  // black lands on 116*(4/29) - 16 which is zero only up to rounding
  if (r == 0 && g == 0 && b == 0) lab[0] = lab[1] = lab[2] = 0.0;
}

Matrix rgb_to_lab(const RawImage& img) {
  img.validate();
  Matrix out(img.pixels(), 3);
  for (std::size_t p = 0; p < img.pixels(); ++p) {
    const std::uint8_t* c = img.rgb.data() + 3 * p;
    srgb_to_lab(c[0], c[1], c[2], out.row(p).data());
  }
  return out;
}

FeatureScales compute_scales(int n_w, int n_h, int m_w, int m_h, double eta, double gamma_color) {
  if (n_w <= 0 || n_h <= 0 || m_w <= 0 || m_h <= 0 || !(eta > 0) || !(gamma_color > 0))
    throw InvalidArgument("compute_scales: all arguments must be positive");
  FeatureScales s;
  s.eta = eta;
  s.gamma_color = gamma_color;
  s.gamma_pos = eta * std::max(static_cast<double>(m_w) / n_w, static_cast<double>(m_h) / n_h);
  return s;
}

PixelFeatures build_features(const Matrix& lab, int width, int height, const FeatureScales& scales) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  require_shape(lab, n, 3, "build_features");
  PixelFeatures f;
  f.width = width;
  f.height = height;
  f.data = Matrix(n, kBaseFeatures);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * width + x;
      auto row = f.data.row(p);
      const auto c = lab.row(p);
      row[0] = scales.gamma_pos * x;
      row[1] = scales.gamma_pos * y;
      row[2] = scales.gamma_color * (c[0] * 255.0 / 100.0);
      row[3] = scales.gamma_color * (c[1] + 128.0);
      row[4] = scales.gamma_color * (c[2] + 128.0);
    }
  }
  return f;
}

PixelFeatures build_features(const RawImage& img, const FeatureScales& scales) {
  return build_features(rgb_to_lab(img), img.width, img.height, scales);
}

}  // namespace ssn
