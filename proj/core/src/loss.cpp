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

#include "ssn/loss.hpp"

#include <algorithm>
#include <cmath>

namespace ssn {

namespace {

// Pulls a cotangent on Rs = pixels_to_superpixels(r, q) back onto q.
void backprop_column_mapping(const Matrix& r, const Matrix& rs, const Matrix& g_rs, const Association& q,
                              Matrix& dl_dq) {
  const std::size_t l = r.cols(), m = rs.rows();
  Matrix g_n(m, l);
  std::vector<double> g_z(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double inv = 1.0 / mass_denominator(q.col_mass[i]);
    double dot = 0.0;
    for (std::size_t c = 0; c < l; ++c) {
      g_n(i, c) = g_rs(i, c) * inv;
      dot += g_rs(i, c) * rs(i, c);
    }
    g_z[i] = -dot * inv * mass_denominator_slope(q.col_mass[i]);
  }
  for (std::size_t p = 0; p < q.n(); ++p) {
    const auto rp = r.row(p);
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId id = q.nbr->id(p, j);
      if (id == kNoSuperpixel) continue;
      const auto gn = g_n.row(static_cast<std::size_t>(id));
      double dot = 0.0;
      for (std::size_t c = 0; c < l; ++c) dot += gn[c] * rp[c];
      dl_dq(p, j) += dot + g_z[static_cast<std::size_t>(id)];
    }
  }
}

}  // namespace

PixelProperty one_hot(const std::vector<SuperpixelId>& labels) {
  PixelProperty prop;
  prop.kind = PropertyKind::OneHotLabels;
  SuperpixelId top = 0;
  for (auto v : labels) {
    if (v < 0) throw InvalidArgument("one_hot: negative label");
    top = std::max(top, v);
  }
  prop.r = Matrix(labels.size(), static_cast<std::size_t>(top) + 1);
  for (std::size_t p = 0; p < labels.size(); ++p) prop.r(p, static_cast<std::size_t>(labels[p])) = 1.0;
  return prop;
}

PixelProperty flow_property(const Matrix& flow) {
  if (flow.cols() != 2) throw InvalidArgument("flow_property: flow must have 2 columns");
  return PixelProperty{flow, PropertyKind::FlowVectors};
}

LossWithGrad recon_loss(const PixelProperty& prop, const Association& q) {
  const Matrix& r = prop.r;
  if (!q.nbr || r.rows() != q.n()) throw InvalidArgument("recon_loss: property rows do not match association");
  if (prop.kind == PropertyKind::FlowVectors && r.cols() != 2) throw InvalidArgument("recon_loss: flow must have l = 2");
  const std::size_t n = q.n(), l = r.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  const Matrix rs = pixels_to_superpixels(r, q);
  const Matrix rstar = superpixels_to_pixels(rs, q);

  LossWithGrad out;
  Matrix g_star(n, l);
  if (prop.kind == PropertyKind::OneHotLabels) {
    for (std::size_t p = 0; p < n; ++p) {
      const auto rp = r.row(p);
      const auto c = static_cast<std::size_t>(std::max_element(rp.begin(), rp.end()) - rp.begin());
      const double v = rstar(p, c);
      if (v > kCrossEntropyFloor) {
        out.value -= std::log(v) * inv_n;
        g_star(p, c) = -inv_n / v;
      } else {
        out.value -= std::log(kCrossEntropyFloor) * inv_n;
      }
    }
  } else {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t c = 0; c < l; ++c) {
        const double d = r(p, c) - rstar(p, c);
        out.value += std::abs(d) * inv_n;
        g_star(p, c) = d > 0 ? -inv_n : (d < 0 ? inv_n : 0.0);
      }
    }
  }

  // back through R* = Qrow Rs
  out.dl_dq = Matrix(n, kCandidates);
  Matrix g_rs(rs.rows(), l);
  for (std::size_t p = 0; p < n; ++p) {
    const double total = q.row_sum(p);
    const auto gp = g_star.row(p);
    if (row_is_dead(total)) {
      // uniform fallback row: constant weights, nothing flows into q
      const double w = 1.0 / q.nbr->valid_count(p);
      for (std::size_t j = 0; j < kCandidates; ++j) {
        const SuperpixelId id = q.nbr->id(p, j);
        if (id == kNoSuperpixel) continue;
        auto gi = g_rs.row(static_cast<std::size_t>(id));
        for (std::size_t c = 0; c < l; ++c) gi[c] += w * gp[c];
      }
      continue;
    }
    const double inv = 1.0 / total;
    const auto sp = rstar.row(p);
    double g_total = 0.0;
    for (std::size_t c = 0; c < l; ++c) g_total -= gp[c] * sp[c];
    g_total *= inv;
    for (std::size_t j = 0; j < kCandidates; ++j) {
      const SuperpixelId id = q.nbr->id(p, j);
      if (id == kNoSuperpixel) continue;
      const auto ri = rs.row(static_cast<std::size_t>(id));
      auto gi = g_rs.row(static_cast<std::size_t>(id));
      const double w = q.at(p, j) * inv;
      double dot = 0.0;
      for (std::size_t c = 0; c < l; ++c) {
        dot += gp[c] * ri[c];
        gi[c] += w * gp[c];
      }
      out.dl_dq(p, j) += dot * inv + g_total;
    }
  }
  backprop_column_mapping(r, rs, g_rs, q, out.dl_dq);
  return out;
}

LossWithGrad compact_loss(const Matrix& ixy, const Association& q, const LabelMap& h) {
  if (!q.nbr || ixy.rows() != q.n() || h.n() != q.n()) throw InvalidArgument("compact_loss: shape mismatch");
  const std::size_t n = q.n(), l = ixy.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Matrix sxy = pixels_to_superpixels(ixy, q);

  LossWithGrad out;
  Matrix g_s(sxy.rows(), l);
  for (std::size_t p = 0; p < n; ++p) {
    const SuperpixelId i = h.labels[p];
    if (i < 0 || i >= q.m()) throw InvalidArgument("compact_loss: hard label out of range");
    const auto s = sxy.row(static_cast<std::size_t>(i));
    auto gs = g_s.row(static_cast<std::size_t>(i));
    for (std::size_t c = 0; c < l; ++c) {
      const double d = ixy(p, c) - s[c];
      out.value += d * d * inv_n;
      gs[c] -= 2.0 * d * inv_n;
    }
  }
  out.dl_dq = Matrix(n, kCandidates);
  backprop_column_mapping(ixy, sxy, g_s, q, out.dl_dq);
  return out;
}

LossValue combined_loss(const PixelProperty& r, const Matrix& ixy, const Association& q, const LabelMap& h,
                        double lambda) {
  LossWithGrad rec = recon_loss(r, q);
  LossWithGrad com = compact_loss(ixy, q, h);
  LossValue v;
  v.recon = rec.value;
  v.compact = com.value;
  v.lambda = lambda;
  v.total = rec.value + lambda * com.value;
  v.dl_dq = std::move(rec.dl_dq);
  for (std::size_t i = 0; i < v.dl_dq.size(); ++i) v.dl_dq.data()[i] += lambda * com.dl_dq.data()[i];
  return v;
}

}  // namespace ssn
