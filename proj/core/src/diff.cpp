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

#include "ssn/diff.hpp"

namespace ssn {

RecordedRun forward_recorded(const PixelFeatures& f, const GridSpec& spec, int v, const AssignOptions& opts) {
  if (v < 1) throw InvalidArgument("forward_recorded: iteration count must be >= 1");
  RecordedRun run;
  Tape& tape = run.tape;
  tape.features = f;
  tape.owner = spec.owner;
  tape.cell_count.assign(static_cast<std::size_t>(spec.m()), 0.0);
  for (auto o : spec.owner) tape.cell_count[static_cast<std::size_t>(o)] += 1.0;
  tape.nbr = std::make_shared<const NeighborTable>(neighbor_table(spec));
  tape.options = opts;

  SuperpixelState state = init_centers(f, spec);
  for (int t = 0; t < v; ++t) {
    TapeStep step;
    step.centers_in = state.centers;
    step.assoc = soft_assign(f, state, tape.nbr, opts);
    state = update_centers(f, step.assoc);
    step.centers_out = state.centers;
    tape.steps.push_back(std::move(step));
  }
  run.result.assoc = tape.steps.back().assoc;
  run.result.state = std::move(state);
  return run;
}

DslicResult replay(const Tape& tape) {
  const std::size_t n = tape.features.n(), k = tape.features.k();
  SuperpixelState state;
  state.centers = Matrix(tape.cell_count.size(), k);
  for (std::size_t p = 0; p < n; ++p) {
    auto c = state.centers.row(static_cast<std::size_t>(tape.owner[p]));
    const auto fp = tape.features.data.row(p);
    for (std::size_t d = 0; d < k; ++d) c[d] += fp[d];
  }
  for (std::size_t i = 0; i < tape.cell_count.size(); ++i)
    for (auto& v : state.centers.row(i)) v /= tape.cell_count[i];

  DslicResult r;
  for (const TapeStep& step : tape.steps) {
    AssignOptions opts = tape.options;
    opts.fixed_shift = step.assoc.shift;
    r.assoc = soft_assign(tape.features, state, tape.nbr, opts);
    state = update_centers(tape.features, r.assoc);
  }
  r.state = std::move(state);
  return r;
}

Matrix backward(const Tape& tape, const Matrix& dl_dq, const Matrix& dl_ds) {
  if (tape.steps.empty()) throw InvalidArgument("backward: empty tape");
  const PixelFeatures& f = tape.features;
  const std::size_t n = f.n(), k = f.k();
  const std::size_t m = tape.cell_count.size();
  if (!dl_dq.empty()) require_shape(dl_dq, n, kCandidates, "backward dl_dq");
  if (!dl_ds.empty()) require_shape(dl_ds, m, k, "backward dl_ds");
  const NeighborTable& nbr = *tape.nbr;

  Matrix grad_f(n, k);
  Matrix g_s = dl_ds.empty() ? Matrix(m, k) : dl_ds;
  Matrix g_q = dl_dq.empty() ? Matrix(n, kCandidates) : dl_dq;
  Matrix g_n(m, k);
  std::vector<double> g_z(m);

  for (std::size_t t = tape.steps.size(); t-- > 0;) {
    const TapeStep& step = tape.steps[t];
    const Association& a = step.assoc;
    if (t + 1 != tape.steps.size()) g_q.fill(0.0);

    // S_i = N_i / max(Z_i, eps)
    for (std::size_t i = 0; i < m; ++i) {
      const double inv = 1.0 / mass_denominator(a.col_mass[i]);
      const auto gs = g_s.row(i);
      const auto so = step.centers_out.row(i);
      auto gn = g_n.row(i);
      double dot = 0.0;
      for (std::size_t d = 0; d < k; ++d) {
        gn[d] = gs[d] * inv;
        dot += gs[d] * so[d];
      }
      g_z[i] = -dot * inv * mass_denominator_slope(a.col_mass[i]);
    }
    for (std::size_t p = 0; p < n; ++p) {
      const auto fp = f.data.row(p);
      auto gf = grad_f.row(p);
      auto gq = g_q.row(p);
      for (std::size_t j = 0; j < kCandidates; ++j) {
        const SuperpixelId id = nbr.id(p, j);
        if (id == kNoSuperpixel) continue;
        const auto i = static_cast<std::size_t>(id);
        const auto gn = g_n.row(i);
        const double w = a.at(p, j);
        double dot = 0.0;
        for (std::size_t d = 0; d < k; ++d) {
          dot += gn[d] * fp[d];
          gf[d] += w * gn[d];
        }
        gq[j] += dot + g_z[i];
      }
    }

    // Q_pj = exp(shift - |F_p - S_i|^2)
    g_s.fill(0.0);
    for (std::size_t p = 0; p < n; ++p) {
      const auto fp = f.data.row(p);
      auto gf = grad_f.row(p);
      const auto gq = g_q.row(p);
      for (std::size_t j = 0; j < kCandidates; ++j) {
        const SuperpixelId id = nbr.id(p, j);
        if (id == kNoSuperpixel) continue;
        const auto i = static_cast<std::size_t>(id);
        const double g_d = -a.at(p, j) * gq[j];
        if (g_d == 0.0) continue;
        const auto si = step.centers_in.row(i);
        auto gs = g_s.row(i);
        for (std::size_t d = 0; d < k; ++d) {
          const double e = 2.0 * g_d * (fp[d] - si[d]);
          gf[d] += e;
          gs[d] -= e;
        }
      }
    }
  }

  // S^0 is the plain mean of each grid cell
  for (std::size_t p = 0; p < n; ++p) {
    const auto i = static_cast<std::size_t>(tape.owner[p]);
    const double inv = 1.0 / tape.cell_count[i];
    const auto gs = g_s.row(i);
    auto gf = grad_f.row(p);
    for (std::size_t d = 0; d < k; ++d) gf[d] += gs[d] * inv;
  }
  return grad_f;
}

}  // namespace ssn
