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

#include <cmath>
#include <numeric>

#include "ssn/error.hpp"
#include "ssn/grid.hpp"

using namespace ssn;

namespace {

PixelFeatures features_from(int w, int h, std::size_t k, double (*fn)(std::size_t p, std::size_t c)) {
  PixelFeatures f;
  f.width = w;
  f.height = h;
  f.data = Matrix(static_cast<std::size_t>(w) * h, k);
  for (std::size_t p = 0; p < f.n(); ++p)
    for (std::size_t c = 0; c < k; ++c) f.data(p, c) = fn(p, c);
  return f;
}

}  // namespace

TEST_CASE("plan_grid factorization") {
  GridSpec sq = plan_grid(100, 100, 100);
  CHECK(sq.m_w == 10);
  CHECK(sq.m_h == 10);
  for (auto c : cell_sizes(sq)) CHECK(c == 100);

  GridSpec wide = plan_grid(1024, 512, 1000);
  CHECK(wide.m_w == 45);
  CHECK(wide.m_h == 22);
  CHECK(wide.m() == 990);

  GridSpec small = plan_grid(7, 5, 6);
  CHECK(small.m_w == 3);
  CHECK(small.m_h == 2);
  const std::vector<SuperpixelId> expected = {0, 0, 0, 1, 1, 2, 2, 0, 0, 0, 1, 1, 2, 2, 0, 0, 0, 1, 1, 2, 2,
                                              3, 3, 3, 4, 4, 5, 5, 3, 3, 3, 4, 4, 5, 5};
  CHECK(small.owner == expected);
  for (auto c : cell_sizes(small)) CHECK(c > 0);
}

TEST_CASE("plan_grid rejects out-of-range targets") {
  CHECK_THROWS_AS(plan_grid(4, 4, 0), InvalidArgument);
  CHECK_THROWS_AS(plan_grid(4, 4, 17), InvalidArgument);
  CHECK_THROWS_AS(plan_grid(0, 4, 1), InvalidArgument);
}

TEST_CASE("owners partition the pixels") {
  for (auto [w, h, m] : {std::tuple{13, 9, 7}, {64, 40, 30}, {31, 77, 50}, {5, 5, 25}}) {
    GridSpec g = plan_grid(w, h, m);
    const auto sizes = cell_sizes(g);
    CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == g.n());
    for (auto s : sizes) CHECK(s > 0);
    for (auto o : g.owner) CHECK((o >= 0 && o < g.m()));
  }
}

TEST_CASE("neighbor counts") {
  GridSpec g = make_grid(50, 50, 5, 5);
  NeighborTable t = neighbor_table(g);
  auto pixel_in_cell = [&](int r, int c) {
    for (std::size_t p = 0; p < g.n(); ++p)
      if (g.owner[p] == r * 5 + c) return p;
    return std::size_t{0};
  };
  CHECK(t.valid_count(pixel_in_cell(2, 2)) == 9);
  CHECK(t.valid_count(pixel_in_cell(0, 0)) == 4);
  CHECK(t.valid_count(pixel_in_cell(4, 4)) == 4);
  CHECK(t.valid_count(pixel_in_cell(0, 2)) == 6);

  GridSpec one = make_grid(6, 4, 1, 1);
  NeighborTable t1 = neighbor_table(one);
  for (std::size_t p = 0; p < one.n(); ++p) {
    CHECK(t1.valid_count(p) == 1);
    CHECK(t1.id(p, 4) == 0);
  }
}

TEST_CASE("interior neighbor symmetry") {
  GridSpec g = make_grid(40, 40, 5, 5);
  NeighborTable t = neighbor_table(g);
  std::vector<std::vector<char>> lists(25, std::vector<char>(25, 0));
  for (std::size_t p = 0; p < g.n(); ++p)
    for (std::size_t s = 0; s < kCandidates; ++s)
      if (t.valid(p, s)) lists[g.owner[p]][t.id(p, s)] = 1;
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 25; ++j) CHECK(lists[i][j] == lists[j][i]);
  for (std::size_t p = 0; p < g.n(); ++p) CHECK(t.id(p, 4) == g.owner[p]);
}

TEST_CASE("init_centers") {
  SUBCASE("hand-averaged 4x4 fixture") {
    const PixelFeatures f = features_from(4, 4, 5, [](std::size_t p, std::size_t c) {
      const double x = static_cast<double>(p);
      switch (c) {
        case 0: return x;
        case 1: return x * x;
        case 2: return std::sin(x);
        case 3: return 1.0;
        default: return -x;
      }
    });
    const SuperpixelState s = init_centers(f, make_grid(4, 4, 2, 2));
    const double expected[4][5] = {
        {2.5, 10.5, -0.21856394629079254, 1, -2.5},
        {4.5, 24.5, 0.35699713385135301, 1, -4.5},
        {10.5, 114.5, 0.3212677126728361, 1, -10.5},
        {12.5, 160.5, 0.024220969602978509, 1, -12.5},
    };
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(s.mass[i] == 4.0);
      for (std::size_t c = 0; c < 5; ++c) CHECK(s.centers(i, c) == doctest::Approx(expected[i][c]).epsilon(1e-12));
    }
  }
  SUBCASE("constant features") {
    const PixelFeatures f = features_from(9, 7, 3, [](std::size_t, std::size_t c) { return 1.5 + static_cast<double>(c); });
    const SuperpixelState s = init_centers(f, plan_grid(9, 7, 6));
    for (std::size_t i = 0; i < s.centers.rows(); ++i)
      for (std::size_t c = 0; c < 3; ++c) CHECK(s.centers(i, c) == doctest::Approx(1.5 + static_cast<double>(c)));
  }
  SUBCASE("single cell is the global mean") {
    const PixelFeatures f = features_from(5, 3, 2, [](std::size_t p, std::size_t c) { return c == 0 ? p * 1.0 : p * p * 1.0; });
    const SuperpixelState s = init_centers(f, make_grid(5, 3, 1, 1));
    CHECK(s.centers(0, 0) == doctest::Approx(7.0));
    CHECK(s.centers(0, 1) == doctest::Approx(1015.0 / 15.0));
  }
  SUBCASE("commutes with uniform scaling") {
    auto fn = [](std::size_t p, std::size_t c) { return std::cos(0.7 * p + c); };
    PixelFeatures f = features_from(11, 8, 4, fn);
    PixelFeatures g = f;
    for (auto& v : g.data.data()) v *= 3.25;
    const GridSpec spec = plan_grid(11, 8, 9);
    const SuperpixelState a = init_centers(f, spec), b = init_centers(g, spec);
    for (std::size_t i = 0; i < a.centers.size(); ++i)
      CHECK(b.centers.data()[i] == doctest::Approx(3.25 * a.centers.data()[i]).epsilon(1e-12));
  }
}
