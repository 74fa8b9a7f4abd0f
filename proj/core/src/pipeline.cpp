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

#include "ssn/pipeline.hpp"

#include <algorithm>
#include <unordered_map>

namespace ssn {

GridSpec grid_for(int width, int height, const PipelineConfig& cfg, FeatureScales* scales) {
  const long long n = static_cast<long long>(width) * height;
  const int m_target = static_cast<int>(std::min<long long>(std::max(cfg.m_target, 1), n));
  GridSpec grid = plan_grid(width, height, m_target);
  if (scales) *scales = compute_scales(width, height, grid.m_w, grid.m_h, cfg.eta, cfg.gamma_color);
  return grid;
}

PixelFeatures pixel_features(const Matrix& lab, int width, int height, const FeatureScales& scales,
                             const LinearModel* model) {
  PixelFeatures xylab = build_features(lab, width, height, scales);
  if (!model || model->k == kBaseFeatures) return xylab;
  return model_forward(xylab, *model);
}

Segmentation segment(const Matrix& lab, int width, int height, const PipelineConfig& cfg, const LinearModel* model) {
  Segmentation s;
  s.grid = grid_for(width, height, cfg, &s.scales);
  s.features = pixel_features(lab, width, height, s.scales, model);
  s.dslic = run_dslic(s.features, s.grid, cfg.v);
  s.raw = hard_labels(s.dslic.assoc, width, height);
  s.labels = cfg.connectivity ? enforce_connectivity(s.raw, s.grid) : s.raw;
  return s;
}

Segmentation segment(const RawImage& img, const PipelineConfig& cfg, const LinearModel* model) {
  return segment(rgb_to_lab(img), img.width, img.height, cfg, model);
}

LabelMap segment_slic_hard(const Matrix& lab, int width, int height, const PipelineConfig& cfg) {
  FeatureScales scales;
  const GridSpec grid = grid_for(width, height, cfg, &scales);
  const PixelFeatures f = build_features(lab, width, height, scales);
  LabelMap raw = run_slic_hard(f, grid, cfg.v).labels;
  return cfg.connectivity ? enforce_connectivity(raw, grid) : raw;
}

std::vector<SuperpixelId> densify(const std::vector<SuperpixelId>& ids) {
  std::unordered_map<SuperpixelId, SuperpixelId> map;
  std::vector<SuperpixelId> out(ids.size());
  for (std::size_t p = 0; p < ids.size(); ++p) {
    auto [it, inserted] = map.try_emplace(ids[p], static_cast<SuperpixelId>(map.size()));
    out[p] = it->second;
  }
  return out;
}

Matrix positional_columns(const PixelFeatures& f) {
  Matrix out(f.n(), 2);
  for (std::size_t p = 0; p < f.n(); ++p) {
    out(p, 0) = f.data(p, 0);
    out(p, 1) = f.data(p, 1);
  }
  return out;
}

SampleGradient sample_gradient(const Matrix& lab, int width, int height, const std::vector<SuperpixelId>& gt,
                               const LinearModel& model, const PipelineConfig& cfg, double lambda) {
  if (gt.size() != static_cast<std::size_t>(width) * height) throw InvalidArgument("sample_gradient: GT size mismatch");
  FeatureScales scales;
  const GridSpec grid = grid_for(width, height, cfg, &scales);
  const PixelFeatures xylab = build_features(lab, width, height, scales);
  const PixelFeatures f = model.k == kBaseFeatures ? xylab : model_forward(xylab, model);

  RecordedRun run = forward_recorded(f, grid, cfg.v);
  const LabelMap h = hard_labels(run.result.assoc, width, height);
  const PixelProperty r = one_hot(densify(gt));
  SampleGradient out;
  out.loss = combined_loss(r, positional_columns(xylab), run.result.assoc, h, lambda);
  if (model.k == kBaseFeatures) return out;
  const Matrix dl_df = backward(run.tape, out.loss.dl_dq, Matrix());
  out.grad = model_backward(xylab, model, dl_df).flat();
  return out;
}

}  // namespace ssn
