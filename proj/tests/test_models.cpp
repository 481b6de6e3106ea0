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

#include "hybridcq/engine.hpp"
#include "hybridcq/errors.hpp"
#include "hybridcq/models.hpp"

using namespace hybridcq;
using Catch::Matchers::WithinAbs;

namespace {

CMatrix dense(const SparseCMatrix& s) { return CMatrix(s); }

CMatrix paper_interaction(double q, const QubitParams& p) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = q * p.B * p.omega0;
  h(1, 1) = q * p.B * p.omega1;
  return h;
}

}  // namespace

TEST_CASE("qubit-diagonal channels and kicks") {
  const QubitParams p;
  const auto m = qubit_diagonal(p);
  REQUIRE(m.channels().size() == 2);
  CHECK(m.name() == "qubit-diag");
  CHECK(m.channels()[0].kick({0, 0}).p == -0.01);
  CHECK(m.channels()[1].kick({0, 0}).p == 0.01);
  CHECK(m.channels()[0].kick({0, 0}).q == 0.0);
  const CMatrix sum = dense(m.channels()[0].jump_weight_operator()) + dense(m.channels()[1].jump_weight_operator());
  CHECK(sum.isIdentity(0.0));
  CHECK(interaction_hamiltonian(m, {0, 0}).isZero(0.0));
}

TEST_CASE("both qubit decompositions give the same interaction Hamiltonian") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  QubitParams p;
  p.B = 1.3;
  p.omega0 = 0.7;
  p.omega1 = -2.1;
  const auto d = qubit_diagonal(p);
  const auto n = qubit_nondiagonal(p);
  for (int i = 0; i < 100; ++i) {
    const double q = u(gen);
    const CMatrix ref = paper_interaction(q, p);
    CHECK((interaction_hamiltonian(d, {q, 0.3}) - ref).norm() <= 1e-12);
    CHECK((interaction_hamiltonian(n, {q, 0.3}) - ref).norm() <= 1e-12);
  }
}

TEST_CASE("qubit-nondiagonal ladder structure") {
  const auto m = qubit_nondiagonal({});
  CHECK(m.name() == "qubit-nondiag");
  const CMatrix l1 = dense(m.channels()[0].jump_operator());
  CHECK((l1 * l1).isZero(0.0));
  const auto from0 = jump_probabilities(m, {QuantumState::basis(2, 0), {}, 0.0}, 1e-4);
  CHECK(from0.p[0] > 0.0);
  CHECK(from0.p[1] == 0.0);
}

TEST_CASE("ladder operators obey the truncated algebra") {
  const std::size_t d = 10;
  const CMatrix a = dense(annihilation(d));
  const CMatrix ad = dense(creation(d));
  const CMatrix num = ad * a;
  for (std::size_t n = 0; n < d; ++n) CHECK_THAT(num(n, n).real(), WithinAbs(static_cast<double>(n), 1e-13));
  const CMatrix comm = a * ad - ad * a;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double want = (i == j && i + 1 < d) ? 1.0 : 0.0;
      if (i + 1 < d && j + 1 < d) CHECK_THAT(std::abs(comm(i, j) - want), WithinAbs(0.0, 1e-13));
    }
  }
  // The whole deviation sits on the top level.
  CHECK_THAT(comm(d - 1, d - 1).real(), WithinAbs(-static_cast<double>(d - 1), 1e-12));
  CVector top = CVector::Zero(d);
  top(d - 1) = 1.0;
  CHECK((ad * top).isZero(0.0));
}

TEST_CASE("oscillator jumps move one Fock level with a kick of B tau") {
  OscillatorParams p;
  p.fock_dim = 16;
  const auto m = harmonic_oscillator(p);
  CHECK(m.name() == "oscillator");
  const HybridPureState s{QuantumState::basis(16, 5), {0, 0}, 0.0};
  const auto up = jump_step(m, s, 1, 1e-3);
  const auto down = jump_step(m, s, 0, 1e-3);
  CHECK(up.phi.population(6) == Catch::Approx(1.0));
  CHECK(down.phi.population(4) == Catch::Approx(1.0));
  CHECK_THAT(up.z.p, WithinAbs(0.1, 1e-15));
  CHECK_THAT(down.z.p, WithinAbs(-0.1, 1e-15));
}

TEST_CASE("oscillator jump rates scale with n and n + 1") {
  OscillatorParams p;
  p.fock_dim = 20;
  const auto m = harmonic_oscillator(p);
  for (std::size_t n = 0; n < 19; ++n) {
    const auto pr = jump_probabilities(m, {QuantumState::basis(20, n), {}, 0.0}, 1e-3);
    CHECK_THAT(pr.p[0], WithinAbs(1e-2 * static_cast<double>(n), 1e-15));
    CHECK_THAT(pr.p[1], WithinAbs(1e-2 * static_cast<double>(n + 1), 1e-15));
  }
}

TEST_CASE("parameter validation") {
  QubitParams q;
  q.tau = 0.0;
  CHECK_THROWS_AS(qubit_diagonal(q), InvalidInput);
  q = {};
  q.mass = -1.0;
  CHECK_THROWS_AS(qubit_nondiagonal(q), InvalidInput);
  OscillatorParams o;
  o.fock_dim = 1;
  CHECK_THROWS_AS(harmonic_oscillator(o), InvalidInput);
  o = {};
  o.gamma_up = -0.5;
  CHECK_THROWS_AS(harmonic_oscillator(o), InvalidInput);
}

TEST_CASE("same H_I, different ensemble dynamics") {
  const QubitParams p;
  EngineConfig cfg;
  cfg.dt = 1e-4;
  cfg.total_time = 0.1;
  cfg.n_traj = 2000;
  cfg.master_seed = 99;
  cfg.snapshot_times = {0.1};
  cfg.q_axis = BinAxis::centered(1e-3, 41);
  cfg.p_axis = BinAxis::centered(1e-2, 41);
  const HybridPureState init{QuantumState::superposition(2, {0, 1}), {}, 0.0};
  const auto gd = run_ensemble(qubit_diagonal(p), init, cfg).front();
  const auto gn = run_ensemble(qubit_nondiagonal(p), init, cfg).front();
  // L1 distance between the u_0 momentum marginals.
  double l1 = 0.0;
  for (std::size_t ip = 0; ip < 41; ++ip) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t iq = 0; iq < 41; ++iq) {
      a += gd.mass(iq, ip)(0, 0).real();
      b += gn.mass(iq, ip)(0, 0).real();
    }
    l1 += std::abs(a - b);
  }
  CHECK(l1 > 0.1);
}
