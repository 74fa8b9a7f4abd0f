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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ssn/cluster.hpp"

using namespace ssn;

namespace {

LabelMap from_rows(int w, int h, const std::vector<int>& v) {
  LabelMap m;
  m.width = w;
  m.height = h;
  m.labels.assign(v.begin(), v.end());
  return m;
}

// Same partition up to a relabeling.
bool same_partition(const std::vector<SuperpixelId>& a, const std::vector<SuperpixelId>& b) {
  std::map<int, int> ab, ba;
  for (std::size_t p = 0; p < a.size(); ++p) {
    auto [it, fresh] = ab.emplace(a[p], b[p]);
    if (!fresh && it->second != b[p]) return false;
    auto [jt, fresh2] = ba.emplace(b[p], a[p]);
    if (!fresh2 && jt->second != a[p]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("connected, large segments are left alone") {
  const GridSpec g = make_grid(12, 12, 3, 3);
  LabelMap in = from_rows(12, 12, {});
  in.labels.clear();
  for (auto o : g.owner) in.labels.push_back(8 - o);
  const LabelMap out = enforce_connectivity(in, g);
  CHECK(out.connected);
  CHECK(same_partition(in.labels, out.labels));
  CHECK(out.labels[0] == 0);
  CHECK(out.count() == 9);
}

TEST_CASE("a stray pixel is absorbed") {
  const GridSpec g = make_grid(10, 10, 2, 2);
  LabelMap in = from_rows(10, 10, std::vector<int>(100, 0));
  for (std::size_t p = 0; p < 100; ++p) in.labels[p] = (p % 10) < 5 ? 0 : 1;
  in.labels[3 * 10 + 2] = 1;
  const LabelMap out = enforce_connectivity(in, g);
  CHECK(out.labels[3 * 10 + 2] == out.labels[0]);
  CHECK(out.count() == 2);
}

TEST_CASE("hand 8x8 map with a fragmented id") {
  // id 1 occurs as two fragments; the right one (3 pixels) is undersized.
  const std::vector<int> v = {
      0, 0, 0, 0, 2, 2, 2, 2,  //
      0, 0, 0, 0, 2, 2, 2, 2,  //
      1, 1, 0, 0, 2, 1, 1, 2,  //
      1, 1, 0, 0, 2, 1, 2, 2,  //
      1, 1, 1, 1, 3, 3, 3, 3,  //
      1, 1, 1, 1, 3, 3, 3, 3,  //
      1, 1, 1, 1, 3, 3, 3, 3,  //
      1, 1, 1, 1, 3, 3, 3, 3,  //
  };
  const GridSpec g = make_grid(8, 8, 2, 2);
  const LabelMap out = enforce_connectivity(from_rows(8, 8, v), g);
  const std::vector<int> lab(out.labels.begin(), out.labels.end());
  const auto comps = oracle::components(lab, 8, 8);
  CHECK(comps.size() == 4);
  for (const auto& [id, sizes] : comps) {
    CHECK(sizes.size() == 1);
    CHECK(sizes[0] >= 16 / 4);
  }
  // The fragment sits inside id 2's block and joins it.
  CHECK(out.labels[2 * 8 + 5] == out.labels[4]);
  CHECK(out.labels[3 * 8 + 5] == out.labels[4]);
  CHECK(out.labels[2 * 8 + 0] != out.labels[2 * 8 + 5]);
}

TEST_CASE("random fixtures become connected") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 6 + static_cast<int>(rng() % 20), h = 6 + static_cast<int>(rng() % 20);
    const GridSpec g = plan_grid(w, h, 1 + static_cast<int>(rng() % 12));
    const std::vector<int> noise = oracle::random_labels(rng, g.n(), g.m());
    LabelMap in = from_rows(w, h, noise);
    const LabelMap out = enforce_connectivity(in, g);
    const auto comps = oracle::components(std::vector<int>(out.labels.begin(), out.labels.end()), w, h);
    CHECK(static_cast<int>(comps.size()) == out.count());
    const double floor = static_cast<double>(g.n()) / (4.0 * out.count());
    for (const auto& [id, sizes] : comps) {
      CHECK(sizes.size() == 1);
      if (comps.size() > 1) CHECK(static_cast<double>(sizes[0]) >= floor);
    }
  }
}

TEST_CASE("single-label input stays single") {
  const GridSpec g = make_grid(5, 4, 2, 2);
  const LabelMap out = enforce_connectivity(from_rows(5, 4, std::vector<int>(20, 7)), g);
  CHECK(out.labels == std::vector<SuperpixelId>(20, 0));
}
