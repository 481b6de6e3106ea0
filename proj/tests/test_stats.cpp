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

#include <cmath>
#include <random>

#include "hybridcq/errors.hpp"
#include "hybridcq/models.hpp"
#include "hybridcq/rng.hpp"
#include "hybridcq/stats.hpp"

using namespace hybridcq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const QuantumState kPlus = QuantumState::superposition(2, {0, 1});

HybridDensityGrid mass_grid(std::size_t dim = 2) {
  return HybridDensityGrid(BinAxis::centered(1.0, 5), BinAxis::centered(1.0, 5), dim, 0.0,
                           HybridDensityGrid::Kind::Mass);
}

}  // namespace

TEST_CASE("moment accumulator against two-pass formulas") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> n(1e3, 0.5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> x;
  std::vector<double> w;
  for (int i = 0; i < 5000; ++i) {
    x.push_back(n(gen));
    w.push_back(u(gen));
  }
  double sw = 0.0, swx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
  }
  const double mean = swx / sw;
  double var = 0.0, c2 = 0.0, c4 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    var += w[i] * d * d;
    c2 += w[i] * w[i] * d * d;
  }
  var /= sw;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    c4 += w[i] * w[i] * (d * d - var) * (d * d - var);
  }
  const auto m = weighted_moments(x, w);
  CHECK_THAT(m.mean, WithinRel(mean, 1e-14));
  CHECK_THAT(m.variance, WithinRel(var, 1e-9));
  CHECK_THAT(m.mean_se, WithinRel(std::sqrt(c2) / sw, 1e-8));
  CHECK_THAT(m.variance_se, WithinRel(std::sqrt(c4) / sw, 1e-6));
  CHECK_THROWS_AS(weighted_moments({1.0}, {0.0}), UndefinedMomentFault);
  CHECK_THROWS_AS(weighted_moments({1.0}, {-1.0}), InvalidInput);
}

TEST_CASE("marginal moments on hand-built grids") {
  auto g = mass_grid();
  g.deposit_mass(3, 1, kPlus.projector());
  const auto m = marginal_moments(g, std::nullopt, Axis::Q);
  CHECK(m.mean == 1.0);
  CHECK(m.variance == 0.0);
  CHECK(marginal_moments(g, 0, Axis::P).mean == -1.0);

  auto s = mass_grid();
  s.deposit_mass(0, 2, 0.5 * QuantumState::basis(2, 0).projector());
  s.deposit_mass(4, 2, 0.5 * QuantumState::basis(2, 0).projector());
  CHECK(marginal_moments(s, std::nullopt, Axis::Q).mean == 0.0);
  CHECK(marginal_moments(s, std::nullopt, Axis::Q).variance == 4.0);
  CHECK_THROWS_AS(marginal_moments(s, 1, Axis::Q), UndefinedMomentFault);
}

TEST_CASE("law of total expectation across levels") {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> cell(0, 4);
  auto g = mass_grid(3);
  for (int i = 0; i < 40; ++i) {
    CVector v(3);
    for (int k = 0; k < 3; ++k) v(k) = Complex(n(gen), n(gen));
    g.deposit_mass(cell(gen), cell(gen), 0.025 * QuantumState::normalized(v).projector());
  }
  for (Axis axis : {Axis::Q, Axis::P}) {
    const auto total = marginal_moments(g, std::nullopt, axis);
    double mean = 0.0, second = 0.0, weight = 0.0;
    for (std::size_t l = 0; l < 3; ++l) {
      const auto m = marginal_moments(g, l, axis);
      weight += m.weight;
      mean += m.weight * m.mean;
      second += m.weight * (m.variance + m.mean * m.mean);
    }
    CHECK_THAT(weight, WithinAbs(total.weight, 1e-10));
    CHECK_THAT(mean / weight, WithinAbs(total.mean, 1e-10));
    CHECK_THAT(second / weight - total.mean * total.mean, WithinAbs(total.variance, 1e-10));
  }
}

TEST_CASE("sample moments weight by level population") {
  std::vector<HybridPureState> states = {{QuantumState::basis(2, 0), {1.0, 0.0}, 0.0},
                                         {QuantumState::basis(2, 1), {3.0, 0.0}, 0.0},
                                         {kPlus, {5.0, 0.0}, 0.0}};
  CHECK(sample_moments(states, std::nullopt, Axis::Q).mean == 3.0);
  CHECK_THAT(sample_moments(states, 0, Axis::Q).mean, WithinAbs((1.0 + 2.5) / 1.5, 1e-14));
  CHECK(sample_moments(states, 1, Axis::P).mean == 0.0);
  CHECK_THROWS_AS(sample_moments(states, 2, Axis::Q), InvalidInput);
}

TEST_CASE("gaussian fit") {
  const auto a = gaussian_fit({1.0, 1.0, 1.0});
  CHECK((a.mu == 1.0 && a.sigma == 0.0));
  const auto b = gaussian_fit({0.0, 2.0});
  CHECK(b.mu == 1.0);
  CHECK_THAT(b.sigma, WithinRel(std::sqrt(2.0), 1e-15));
  CHECK_THROWS_AS(gaussian_fit({1.0}), SizeFault);
  StreamRng rng(123);
  std::vector<double> s;
  for (int i = 0; i < 100000; ++i) s.push_back(3.0 + 0.5 * rng.normal());
  const auto f = gaussian_fit(s);
  CHECK(std::abs(f.mu - 3.0) < 3.0 * 0.5 / std::sqrt(1e5));
  CHECK_THAT(f.sigma, WithinRel(0.5, 0.01));
}

TEST_CASE("coherence extraction") {
  const std::vector<HybridPureState> pure(10, HybridPureState{QuantumState::basis(3, 1), {}, 0.0});
  CHECK(coherence_extract(pure, 1, 2).value == Complex(0.0, 0.0));
  const std::vector<HybridPureState> sup(10, HybridPureState{QuantumState::superposition(3, {1, 2}), {}, 0.0});
  const auto e = coherence_extract(sup, 1, 2);
  CHECK_THAT(std::abs(e.value), WithinAbs(0.5, 1e-15));
  // One-pass sums leave a residual of order sqrt(eps) when every sample is identical.
  CHECK(e.abs_se < 1e-7);
  CHECK(e.count == 10);

  const auto q = BinAxis::centered(1.0, 3);
  std::vector<HybridPureState> mixed = {{kPlus, {0.0, 0.0}, 0.0},
                                        {kPlus, {0.1, 0.2}, 0.0},
                                        {kPlus, {1.2, 0.0}, 0.0},
                                        {QuantumState::basis(2, 0), {0.0, 0.0}, 0.0}};
  const auto at = coherence_extract_at_cell(mixed, 0, 1, q, q, 1, 1);
  CHECK(at.count == 3);
  // Restricted sum divided by the full trajectory count.
  CHECK_THAT(at.value.real(), WithinAbs(2 * 0.5 / 4.0, 1e-15));
  CHECK_THROWS_AS(coherence_extract_at_cell(mixed, 0, 1, q, q, 0, 0), UndefinedMomentFault);
  CHECK_THROWS_AS(coherence_extract({}, 0, 1), UndefinedMomentFault);
}

TEST_CASE("coherence standard error matches the spread of |mean|") {
  // Samples with magnitude 1 and random sign: |mean| has SE about 1/sqrt(n).
  StreamRng rng(6);
  CoherenceAccumulator acc;
  const int n = 40000;
  for (int i = 0; i < n; ++i) acc.add(Complex(rng.uniform() < 0.75 ? 1.0 : -1.0, 0.0));
  const auto r = acc.result();
  // Bernoulli(+-1) with p = 3/4: sd = sqrt(1 - 0.25) = 0.866.
  CHECK_THAT(r.abs_se, WithinRel(std::sqrt(0.75) / std::sqrt(static_cast<double>(n)), 0.02));
}

TEST_CASE("energy expectation") {
  const auto model = qubit_diagonal({});
  HybridDensityGrid g(BinAxis::centered(0.1, 3), BinAxis::centered(1.0, 3), 2, 0.0, HybridDensityGrid::Kind::Mass);
  g.deposit_mass(1, 1, QuantumState::basis(2, 0).projector());
  CHECK(energy_expectation(g, model) == 0.0);
  HybridDensityGrid k(BinAxis::centered(0.1, 3), BinAxis::centered(1.0, 3), 2, 0.0, HybridDensityGrid::Kind::Mass);
  k.deposit_mass(1, 2, QuantumState::basis(2, 0).projector());
  CHECK(energy_expectation(k, model) == 0.5);

  // Linear in the grid.
  HybridDensityGrid a(BinAxis::centered(0.1, 3), BinAxis::centered(1.0, 3), 2, 0.0, HybridDensityGrid::Kind::Mass);
  a.deposit_mass(2, 0, 0.3 * QuantumState::basis(2, 1).projector());
  a.deposit_mass(0, 2, 0.2 * kPlus.projector());
  auto merged = a;
  merged.merge(k);
  CHECK_THAT(energy_expectation(merged, model), WithinAbs(energy_expectation(a, model) + energy_expectation(k, model), 1e-15));

  CHECK(energy_sample(model, {kPlus, {0.0, 1.0}, 0.0}) == 0.5);
  CHECK(energy_sample(model, {QuantumState::basis(2, 0), {2.0, 0.0}, 0.0}) == 2.0);
  CHECK(energy_sample(model, {QuantumState::basis(2, 1), {2.0, 0.0}, 0.0}) == -2.0);
}

TEST_CASE("linear fit") {
  const auto f = linear_fit({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK_THAT(f.slope, WithinAbs(2.0, 1e-15));
  CHECK_THAT(f.intercept, WithinAbs(1.0, 1e-15));
  CHECK_THAT(f.slope_se, WithinAbs(0.0, 1e-15));
  const auto g = linear_fit({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
  CHECK(g.slope == 0.0);
  CHECK_THAT(g.slope_se, WithinRel(std::sqrt((2.0 / 3.0) / 1.0 / 2.0), 1e-14));
  CHECK_THROWS_AS(linear_fit({1.0}, {1.0}), SizeFault);
  CHECK_THROWS_AS(linear_fit({1.0, 1.0}, {1.0, 2.0}), InvalidInput);
}
