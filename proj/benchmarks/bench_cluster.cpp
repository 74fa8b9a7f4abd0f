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

#include <benchmark/benchmark.h>

#include "ssn/cluster.hpp"
#include "ssn/diff.hpp"
#include "ssn/pipeline.hpp"
#include "ssn/synth.hpp"

namespace {

ssn::PixelFeatures make_features(int w, int h, int m, ssn::GridSpec* grid) {
  ssn::SyntheticSpec spec;
  spec.width = w;
  spec.height = h;
  spec.min_regions = spec.max_regions = 32;
  spec.seed = 7;
  const auto sample = ssn::synthesize(spec, 0);
  ssn::PipelineConfig cfg;
  cfg.m_target = m;
  ssn::FeatureScales scales;
  *grid = ssn::grid_for(w, h, cfg, &scales);
  return ssn::build_features(sample.image, scales);
}

void BM_dslic(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  ssn::GridSpec grid;
  const auto f = make_features(2 * side, side, 1000, &grid);
  for (auto _ : state) benchmark::DoNotOptimize(ssn::run_dslic(f, grid, 10));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(f.n()));
}

BENCHMARK(BM_dslic)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_slic_hard(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  ssn::GridSpec grid;
  const auto f = make_features(2 * side, side, 1000, &grid);
  for (auto _ : state) benchmark::DoNotOptimize(ssn::run_slic_hard(f, grid, 10));
}

BENCHMARK(BM_slic_hard)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_forward_backward(benchmark::State& state) {
  ssn::GridSpec grid;
  const auto f = make_features(201, 201, 100, &grid);
  ssn::Matrix ds(static_cast<std::size_t>(grid.m()), f.k(), 1.0);
  for (auto _ : state) {
    auto run = ssn::forward_recorded(f, grid, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(ssn::backward(run.tape, ssn::Matrix(), ds));
  }
}

BENCHMARK(BM_forward_backward)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_connectivity(benchmark::State& state) {
  ssn::GridSpec grid;
  const auto f = make_features(512, 256, 400, &grid);
  const auto r = ssn::run_dslic(f, grid, 10);
  const auto h = ssn::hard_labels(r.assoc, grid.n_w, grid.n_h);
  for (auto _ : state) benchmark::DoNotOptimize(ssn::enforce_connectivity(h, grid));
}

BENCHMARK(BM_connectivity)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
