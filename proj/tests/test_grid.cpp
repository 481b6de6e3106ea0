// Copyright 2026 The hybridcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hybridcq/errors.hpp"
#include "hybridcq/grid.hpp"

using namespace hybridcq;
using Catch::Matchers::WithinAbs;

TEST_CASE("bin axes") {
  const auto a = BinAxis::centered(0.5, 5);
  CHECK(a.bins() == 5);
  CHECK(a.center(2) == 0.0);
  CHECK(a.lower(0) == -1.25);
  CHECK(a.upper(4) == 1.25);
  CHECK(a.locate(0.0) == 2u);
  CHECK(a.locate(-1.25) == 0u);
  CHECK_FALSE(a.locate(1.25).has_value());
  // A point on an interior edge goes to the higher bin.
  CHECK(a.locate(0.25) == 3u);
  CHECK_FALSE(a.locate(std::nan("")).has_value());
  CHECK_THROWS_AS(BinAxis::centered(0.5, 4), InvalidInput);
  CHECK_THROWS_AS(BinAxis({0.0, 1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(BinAxis({0.0}), InvalidInput);
  CHECK_THROWS_AS(BinAxis::uniform(1.0, 0.0, 3), InvalidInput);
  const auto u = BinAxis::uniform(0.0, 1.0, 4);
  CHECK(u.width(1) == 0.25);
}

TEST_CASE("single deposit fills one cell with the projector") {
  HybridDensityGrid g(BinAxis::centered(1.0, 3), BinAxis::centered(1.0, 3), 2, 0.0);
  const auto plus = QuantumState::superposition(2, {0, 1});
  g.deposit({0.1, -0.2}, plus);
  CHECK(g.raw_cells().size() == 1);
  CHECK((g.mass(1, 1) - plus.projector()).norm() < 1e-15);
  CHECK(g.total_trace() == Catch::Approx(1.0));
  CHECK(g.density(1, 1)(0, 0).real() == Catch::Approx(0.5));
  g.deposit({10.0, 0.0}, plus);
  CHECK(g.n_outside() == 1);
  CHECK(g.total_trace() == Catch::Approx(0.5));
}

TEST_CASE("merge is associative and commutative") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto ax = BinAxis::centered(0.5, 9);
  auto make = [&](int count) {
    HybridDensityGrid g(ax, ax, 3, 0.0);
    for (int i = 0; i < count; ++i) {
      CVector v(3);
      for (int k = 0; k < 3; ++k) v(k) = Complex(n(gen), n(gen));
      g.deposit({u(gen), u(gen)}, QuantumState::normalized(v));
    }
    return g;
  };
  const auto a = make(50);
  const auto b = make(70);
  const auto c = make(30);
  auto ab_c = a;
  ab_c.merge(b);
  ab_c.merge(c);
  auto bc = b;
  bc.merge(c);
  auto a_bc = a;
  a_bc.merge(bc);
  auto ba = b;
  ba.merge(a);
  auto ab = a;
  ab.merge(b);
  CHECK(ab_c.n_samples() == 150);
  CHECK(l1_distance(ab_c, a_bc) < 1e-13);
  CHECK(l1_distance(ab, ba) < 1e-13);
  const auto check = ab_c.check_cells();
  CHECK(check.max_hermiticity_defect <= 1e-10);
  CHECK(check.min_eigenvalue >= -1e-10);
  HybridDensityGrid other(BinAxis::centered(0.5, 7), ax, 3, 0.0);
  CHECK_THROWS_AS(ab.merge(other), InvalidInput);
}

TEST_CASE("l1 distance and rebinning") {
  const auto fine = BinAxis::centered(1.0, 9);
  const auto coarse = BinAxis::centered(3.0, 3);
  HybridDensityGrid g(fine, fine, 2, 0.0, HybridDensityGrid::Kind::Mass);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.25;
  g.deposit_mass(3, 4, m);
  g.deposit_mass(4, 4, m);
  g.deposit_mass(5, 5, m);
  g.deposit_mass(8, 0, m);
  const auto r = rebin(g, coarse, coarse);
  CHECK(r.total_trace() == Catch::Approx(1.0));
  CHECK(r.mass(1, 1)(0, 0).real() == Catch::Approx(0.75));
  CHECK(r.mass(2, 0)(0, 0).real() == Catch::Approx(0.25));
  CHECK_THROWS_AS(rebin(g, BinAxis::centered(2.0, 3), coarse), InvalidInput);
  HybridDensityGrid e(fine, fine, 2, 0.0, HybridDensityGrid::Kind::Mass);
  CHECK(l1_distance(g, e) == Catch::Approx(1.0));
  CHECK(l1_distance(g, g) == 0.0);
  CHECK_THROWS_AS(g.deposit({0, 0}, QuantumState::basis(2, 0)), InvalidInput);
}

TEST_CASE("bin_map follows fine centres") {
  const auto map = bin_map(BinAxis::uniform(0.0, 1.0, 10), BinAxis::uniform(0.2, 0.6, 2));
  CHECK(map[0] == kNoBin);
  CHECK(map[2] == 0);
  CHECK(map[3] == 0);
  CHECK(map[4] == 1);
  CHECK(map[5] == 1);
  CHECK(map[6] == kNoBin);
}
