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
#include <random>

#include "oracles.hpp"
#include "ssn/error.hpp"
#include "ssn/loss.hpp"

using namespace ssn;

namespace {

using Dense = std::vector<std::vector<double>>;

LabelMap labels_of(int w, int h, std::vector<SuperpixelId> v) {
  LabelMap m;
  m.width = w;
  m.height = h;
  m.labels = std::move(v);
  return m;
}

// Numeric gradient of a loss with respect to the valid entries of q.
template <class Fn>
double check_dl_dq(const Association& a, const Matrix& dl_dq, Fn loss) {
  std::vector<double> x, analytic;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < a.q.size(); ++i)
    if (a.nbr->valid(i / 9, i % 9)) {
      slots.push_back(i);
      x.push_back(a.q[i]);
      analytic.push_back(dl_dq.data()[i]);
    }
  auto fn = [&](const std::vector<double>& v) {
    Association b = a;
    std::fill(b.col_mass.begin(), b.col_mass.end(), 0.0);
    for (std::size_t t = 0; t < slots.size(); ++t) b.q[slots[t]] = v[t];
    for (std::size_t i = 0; i < b.q.size(); ++i)
      if (b.nbr->valid(i / 9, i % 9)) b.col_mass[static_cast<std::size_t>(b.nbr->id(i / 9, i % 9))] += b.q[i];
    return loss(b);
  };
  return oracle::max_rel_error(analytic, oracle::numeric_gradient(fn, x, 1e-6), 1e-6);
}

Association scaled(const Association& a, double c) {
  Association b = a;
  for (auto& v : b.q) v *= c;
  for (auto& v : b.col_mass) v *= c;
  return b;
}

}  // namespace

TEST_CASE("reconstruction loss") {
  const GridSpec g = make_grid(4, 1, 2, 1);
  auto nbr = std::make_shared<const NeighborTable>(neighbor_table(g));
  const Association a = oracle::from_dense(nbr, Dense{{.9, .1}, {.6, .4}, {.3, .7}, {.05, .95}});

  SUBCASE("cross-entropy hand fixture") {
    const PixelProperty r = one_hot({0, 0, 1, 1});
    const LossWithGrad l = recon_loss(r, a);
    CHECK(l.value == doctest::Approx(0.4133274392617892).epsilon(1e-13));
    CHECK(check_dl_dq(a, l.dl_dq, [&](const Association& b) { return recon_loss(r, b).value; }) <= 1e-4);
  }
  SUBCASE("L1 flow hand fixture") {
    const PixelProperty r = flow_property(Matrix(4, 2, std::vector<double>{1, 2, 1.5, 2, -1, .5, -1, 0}));
    const LossWithGrad l = recon_loss(r, a);
    CHECK(l.value == doctest::Approx(1.3386235072281585).epsilon(1e-13));
    CHECK(check_dl_dq(a, l.dl_dq, [&](const Association& b) { return recon_loss(r, b).value; }) <= 1e-4);
  }
  SUBCASE("constant properties reconstruct exactly") {
    CHECK(recon_loss(one_hot({1, 1, 1, 1}), a).value <= 1e-10);
    CHECK(recon_loss(flow_property(Matrix(4, 2, 3.0)), a).value <= 1e-12);
  }
  SUBCASE("scale invariance") {
    const PixelProperty r = one_hot({0, 1, 1, 0});
    for (double c : {1e-3, 7.0}) CHECK(recon_loss(r, scaled(a, c)).value == doctest::Approx(recon_loss(r, a).value).epsilon(1e-10));
  }
  SUBCASE("labels absent from every candidate hit the clamp") {
    const GridSpec g6 = make_grid(6, 1, 6, 1);
    auto n6 = std::make_shared<const NeighborTable>(neighbor_table(g6));
    Dense d(6, Dense::value_type(6, 0.0));
    for (std::size_t p = 0; p < 6; ++p) d[p][p] = 1.0;
    // Pixel 0's row underflowed: it falls back to its candidates 0 and 1, and
    // neither holds any of its label.
    d[0] = {0, 0, 0, 0, 0, 0};
    const LossWithGrad l = recon_loss(one_hot({1, 0, 0, 0, 0, 0}), oracle::from_dense(n6, d));
    CHECK(l.value == doctest::Approx(-std::log(kCrossEntropyFloor) / 6.0).epsilon(1e-12));
  }
  SUBCASE("subnormal rows keep the gradient finite") {
    const LossWithGrad l =
        recon_loss(one_hot({0, 0, 1, 1}), oracle::from_dense(nbr, Dense{{.9, .1}, {4.9e-324, 0}, {.3, .7}, {0, 1e-300}}));
    CHECK(std::isfinite(l.value));
    for (double x : l.dl_dq.data()) CHECK(std::isfinite(x));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(recon_loss(one_hot({0, 1}), a), InvalidArgument);
    CHECK_THROWS_AS(one_hot({0, -1}), InvalidArgument);
    CHECK_THROWS_AS(flow_property(Matrix(4, 3)), InvalidArgument);
  }
}

TEST_CASE("compactness loss") {
  SUBCASE("hand fixture") {
    const GridSpec g = make_grid(2, 2, 2, 1);
    auto nbr = std::make_shared<const NeighborTable>(neighbor_table(g));
    const Association a = oracle::from_dense(nbr, Dense{{.8, .2}, {.3, .7}, {.6, .4}, {.1, .9}});
    const Matrix ixy(4, 2, std::vector<double>{0, 0, 1, 0, 0, 1, 1, 1});
    const LabelMap h = labels_of(2, 2, {0, 1, 0, 1});
    const LossWithGrad l = compact_loss(ixy, a, h);
    CHECK(l.value == doctest::Approx(0.322186511580451).epsilon(1e-13));
    CHECK(check_dl_dq(a, l.dl_dq, [&](const Association& b) { return compact_loss(ixy, b, h).value; }) <= 1e-4);
    CHECK(compact_loss(ixy, scaled(a, 40.0), h).value == doctest::Approx(l.value).epsilon(1e-10));
  }
  SUBCASE("one pixel per superpixel") {
    const GridSpec g = make_grid(3, 2, 3, 2);
    auto nbr = std::make_shared<const NeighborTable>(neighbor_table(g));
    Dense d(6, Dense::value_type(6, 0.0));
    for (std::size_t p = 0; p < 6; ++p) d[p][p] = 1.0;
    Matrix ixy(6, 2);
    for (std::size_t p = 0; p < 6; ++p) {
      ixy(p, 0) = static_cast<double>(p % 3);
      ixy(p, 1) = static_cast<double>(p / 3);
    }
    const LossWithGrad l = compact_loss(ixy, oracle::from_dense(nbr, d), labels_of(3, 2, {0, 1, 2, 3, 4, 5}));
    CHECK(l.value == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("single superpixel") {
    const GridSpec g = make_grid(3, 1, 1, 1);
    auto nbr = std::make_shared<const NeighborTable>(neighbor_table(g));
    const Association a = oracle::from_dense(nbr, Dense{{1.0}, {2.0}, {1.0}});
    const Matrix ixy(3, 2, std::vector<double>{0, 0, 1, 0, 4, 0});
    // Weighted centroid x = (0 + 2 + 4) / 4 = 1.5.
    const double expected = (1.5 * 1.5 + 0.5 * 0.5 + 2.5 * 2.5) / 3.0;
    CHECK(compact_loss(ixy, a, labels_of(3, 1, {0, 0, 0})).value == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("combined loss") {
  const GridSpec g = make_grid(2, 2, 2, 1);
  auto nbr = std::make_shared<const NeighborTable>(neighbor_table(g));
  const Association a = oracle::from_dense(nbr, Dense{{.8, .2}, {.3, .7}, {.6, .4}, {.1, .9}});
  const Matrix ixy(4, 2, std::vector<double>{0, 0, 1, 0, 0, 1, 1, 1});
  const LabelMap h = labels_of(2, 2, {0, 1, 0, 1});
  const PixelProperty r = one_hot({0, 1, 0, 1});

  const LossValue l = combined_loss(r, ixy, a, h);
  CHECK(l.lambda == 1e-5);
  CHECK(l.total == l.recon + 1e-5 * l.compact);
  CHECK(l.recon >= 0.0);
  CHECK(l.compact >= 0.0);
  CHECK(check_dl_dq(a, l.dl_dq, [&](const Association& b) { return combined_loss(r, ixy, b, h).total; }) <= 1e-4);

  const LossValue z = combined_loss(r, ixy, a, h, 0.0);
  CHECK(z.total == z.recon);

  const LossValue perfect = combined_loss(one_hot({0, 0, 0, 0}), ixy, a, h);
  CHECK(perfect.recon <= 1e-10);
  CHECK(perfect.total == doctest::Approx(1e-5 * perfect.compact).epsilon(1e-6));
}

TEST_CASE("losses are non-negative on random associations") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridSpec g = make_grid(6, 5, 3, 2);
  auto nbr = std::make_shared<const NeighborTable>(neighbor_table(g));
  for (int trial = 0; trial < 10; ++trial) {
    Dense d(30, Dense::value_type(6));
    for (auto& row : d)
      for (auto& v : row) v = u(rng);
    const Association a = oracle::from_dense(nbr, d);
    std::vector<SuperpixelId> lab(30);
    for (auto& v : lab) v = static_cast<SuperpixelId>(rng() % 3);
    Matrix flow(30, 2), ixy(30, 2);
    for (auto& v : flow.data()) v = u(rng) * 4 - 2;
    for (std::size_t p = 0; p < 30; ++p) {
      ixy(p, 0) = static_cast<double>(p % 6);
      ixy(p, 1) = static_cast<double>(p / 6);
    }
    const LabelMap h = hard_labels(a, 6, 5);
    CHECK(recon_loss(one_hot(lab), a).value >= 0.0);
    CHECK(recon_loss(flow_property(flow), a).value >= 0.0);
    CHECK(compact_loss(ixy, a, h).value >= 0.0);
  }
}
