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

#include "ssn/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numeric>

namespace ssn {

LabelMap segment_sample(const EvalSample& sample, int m_target, const SweepOptions& opts) {
  PipelineConfig cfg = opts.cfg;
  cfg.m_target = m_target;
  if (opts.method == Method::SlicHard) return segment_slic_hard(sample.lab, sample.width, sample.height, cfg);
  return segment(sample.lab, sample.width, sample.height, cfg, opts.model).labels;
}

double mean_asa(const std::vector<EvalSample>& samples, int m_target, const SweepOptions& opts) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : samples) total += asa(segment_sample(s, m_target, opts).labels, s.gt.labels);
  return total / static_cast<double>(samples.size());
}

std::vector<EvalReport> sweep(const std::vector<EvalSample>& samples, const SweepOptions& opts) {
  std::vector<const EvalSample*> order;
  for (const auto& s : samples) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->name < b->name; });

  std::vector<EvalReport> rows;
  for (int m : opts.m_values) {
    EvalReport mean;
    mean.image = "mean";
    mean.m_requested = m;
    std::size_t ok = 0, with_epe = 0;
    double m_sum = 0.0;
    for (const EvalSample* s : order) {
      EvalReport r;
      try {
        r = evaluate(segment_sample(*s, m, opts), s->gt, opts.boundary_r);
      } catch (const std::exception& e) {
        r = EvalReport{};
        r.failed = true;
        r.error = e.what();
      }
      r.image = s->name;
      r.m_requested = m;
      if (!r.failed) {
        ++ok;
        m_sum += r.m_achieved;
        mean.asa += r.asa;
        mean.br += r.br;
        mean.bp += r.bp;
        mean.f += r.f;
        mean.co += r.co;
        if (r.has_epe) {
          ++with_epe;
          mean.epe += r.epe;
        }
      }
      rows.push_back(std::move(r));
    }
    if (ok == 0) {
      mean.failed = true;
      mean.error = "no successful rows";
    } else {
      const double inv = 1.0 / static_cast<double>(ok);
      mean.m_achieved = static_cast<int>(std::lround(m_sum * inv));
      mean.asa *= inv;
      mean.br *= inv;
      mean.bp *= inv;
      mean.f *= inv;
      mean.co *= inv;
      if (with_epe) {
        mean.has_epe = true;
        mean.epe /= static_cast<double>(with_epe);
      }
    }
    rows.push_back(std::move(mean));
  }
  return rows;
}

std::string report_csv(const std::vector<EvalReport>& rows) {
  std::string out = std::string(kReportHeader) + "\n";
  char buf[256];
  for (const auto& r : rows) {
    if (r.failed) {
      std::snprintf(buf, sizeof buf, ",%d,,,,,,,\n", r.m_requested);
      out += r.image + buf;
      continue;
    }
    std::snprintf(buf, sizeof buf, ",%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,", r.m_requested, r.m_achieved, r.asa, r.br, r.bp,
                  r.f, r.co);
    out += r.image + buf;
    if (r.has_epe) {
      std::snprintf(buf, sizeof buf, "%.6f", r.epe);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace ssn
