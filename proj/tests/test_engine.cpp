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
#include <map>
#include <random>
#include <set>

#include "hybridcq/engine.hpp"
#include "hybridcq/errors.hpp"
#include "hybridcq/models.hpp"
#include "hybridcq/oracles/analytic.hpp"

using namespace hybridcq;
using Catch::Matchers::WithinAbs;

namespace {

const QuantumState kPlus = QuantumState::superposition(2, {0, 1});

ModelSpec free_particle(double mass = 1.0) { return ModelSpec("free", 2, {}, PhaseFunction::kinetic(mass), mass); }

EngineConfig fig1_config(std::uint64_t n_traj, double total_time) {
  EngineConfig c;
  c.dt = 1e-4;
  c.total_time = total_time;
  c.n_traj = n_traj;
  c.master_seed = 2024;
  return c;
}

CVector random_state(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(n(gen), n(gen));
  return v / v.norm();
}

}  // namespace

TEST_CASE("effective Hamiltonian") {
  const auto f = free_particle();
  CHECK(effective_hamiltonian(f, {1.0, 2.0}).isZero(0.0));

  const auto d = qubit_diagonal({});
  const CMatrix h = effective_hamiltonian(d, {0.0, 0.0});
  CHECK(h.isApprox(Complex(0.0, -50.0) * CMatrix::Identity(2, 2), 1e-15));

  OscillatorParams op;
  op.fock_dim = 3;
  op.tau = 0.2;
  const auto ho = harmonic_oscillator(op);
  const CMatrix heff = effective_hamiltonian(ho, {0.3, 0.0});
  const CMatrix anti = (heff - heff.adjoint()) / Complex(0.0, 2.0);
  CHECK_THAT(anti(0, 0).real(), WithinAbs(-1.0 / (2.0 * op.tau), 1e-14));
  // -(1/2tau)(a^dag a + a a^dag) is negative semidefinite.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(anti);
  CHECK(es.eigenvalues().maxCoeff() <= 1e-14);
}

TEST_CASE("continuous step: free drift and unchanged populations") {
  const auto f = free_particle();
  const auto s = continuous_step(f, {kPlus, {0.0, 2.0}, 0.0}, 0.1);
  CHECK_THAT(s.z.q, WithinAbs(0.2, 1e-15));
  CHECK(s.z.p == 2.0);
  CHECK(s.t == 0.1);
  CHECK((s.phi.amplitudes() - kPlus.amplitudes()).norm() < 1e-15);

  const auto d = qubit_diagonal({});
  const auto s2 = continuous_step(d, {kPlus, {0.0, 0.0}, 0.0}, 1e-4);
  CHECK_THAT(s2.phi.population(0), WithinAbs(0.5, 1e-15));

  HybridPureState st{kPlus, {0.5, -1.5}, 0.0};
  for (int i = 0; i < 1000; ++i) st = continuous_step(free_particle(2.0), st, 1e-3);
  CHECK_THAT(st.z.q, WithinAbs(0.5 - 1.5 * 1.0 / 2.0, 1e-12));
  CHECK(st.z.p == -1.5);
}

TEST_CASE("jump probabilities: worked values") {
  CHECK(jump_probabilities(free_particle(), {kPlus, {}, 0.0}, 0.1).p0 == 1.0);
  const auto pr = jump_probabilities(qubit_diagonal({}), {kPlus, {}, 0.0}, 1e-4);
  CHECK_THAT(pr.p[0], WithinAbs(0.005, 1e-15));
  CHECK_THAT(pr.p[1], WithinAbs(0.005, 1e-15));
  CHECK_THAT(pr.p0, WithinAbs(0.99, 1e-15));
}

TEST_CASE("jump probabilities sum to one bitwise") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  OscillatorParams op;
  op.fock_dim = 6;
  const std::vector<ModelSpec> models = {qubit_diagonal({}), qubit_nondiagonal({}), harmonic_oscillator(op)};
  for (int i = 0; i < 20000; ++i) {
    const auto& m = models[static_cast<std::size_t>(i) % models.size()];
    const double dt = m.min_tau() * u(gen) * 0.09;
    const HybridPureState s{QuantumState::normalized(random_state(gen, static_cast<int>(m.dim()))), {}, 0.0};
    const auto pr = jump_probabilities(m, s, dt);
    REQUIRE(pr.total() == 1.0);
    double sum = 0.0;
    for (double p : pr.p) sum += p;
    REQUIRE(pr.p0 == 1.0 - sum);
  }
}

TEST_CASE("too large a step is a fault, not a clamp") {
  OscillatorParams op;
  op.fock_dim = 40;
  op.tau = 0.1;
  const auto ho = harmonic_oscillator(op);
  const HybridPureState s{QuantumState::basis(40, 30), {}, 0.0};
  CHECK_THROWS_AS(jump_probabilities(ho, s, 0.005), StepSizeFault);

  EngineConfig cfg;
  cfg.dt = 0.005;
  cfg.total_time = 0.01;
  cfg.n_traj = 3;
  cfg.master_seed = 1;
  try {
    for_each_snapshot(ho, s, cfg, [](std::size_t, std::uint64_t, const HybridPureState&) {});
    FAIL("expected an engine fault");
  } catch (const EngineFault& e) {
    CHECK(e.traj_index() == 0);
    CHECK(e.seed() == stream_seed(1, 0));
  }
}

TEST_CASE("jump step: worked examples") {
  const auto d = qubit_diagonal({});
  const auto s = jump_step(d, {kPlus, {}, 0.0}, 0, 1e-4);
  CHECK(s.phi.population(0) == Catch::Approx(1.0));
  CHECK(s.z.p == -0.01);
  CHECK(s.z.q == 0.0);
  CHECK(s.t == 1e-4);

  const auto n = qubit_nondiagonal({});
  const auto s1 = jump_step(n, {QuantumState::basis(2, 0), {}, 0.0}, 0, 1e-4);
  CHECK(s1.phi.population(1) == Catch::Approx(1.0));
  CHECK(jump_probabilities(n, s1, 1e-4).p[0] == 0.0);
  CHECK_THROWS_AS(jump_step(n, s1, 0, 1e-4), ImpossibleJumpFault);
  CHECK_THROWS_AS(jump_step(n, s1, 7, 1e-4), InvalidInput);
}

TEST_CASE("step branch selection at the cdf boundaries") {
  const auto d = qubit_diagonal({});
  const HybridPureState s{kPlus, {}, 0.0};
  const auto [a, ea] = step(d, s, 1e-4, [] { return 0.0; });
  CHECK(ea.kind == StepEvent::Kind::Continuous);
  CHECK(ea.channel == 0);

  const auto z = free_particle();
  LindbladChannel only(1, SparseCMatrix(CMatrix::Identity(2, 2).sparseView()), PhaseFunction::linear(1.0, 0.0), 1.0);
  const ModelSpec single("single", 2, {only}, PhaseFunction::kinetic(1.0), 1.0);
  const auto [b, eb] = step(single, s, 1e-2, [] { return std::nextafter(1.0, 0.0); });
  CHECK(eb.kind == StepEvent::Kind::Jump);
  CHECK(eb.channel == 1);
  CHECK(eb.t_after == eb.t_before + 1e-2);
}

TEST_CASE("trajectory basics") {
  const auto d = qubit_diagonal({});
  const HybridPureState init{kPlus, {}, 0.0};

  auto c0 = fig1_config(1, 0.0);
  const auto r0 = run_trajectory(d, init, c0, 0);
  CHECK(r0.events.empty());
  REQUIRE(r0.snapshots.size() == 1);
  CHECK(r0.snapshots[0].phi.amplitudes() == init.phi.amplitudes());

  auto c = fig1_config(1, 0.1);
  c.snapshot_times = {0.05, 0.1};
  const auto r = run_trajectory(d, init, c, 4);
  CHECK(r.events.size() == 1000);
  CHECK(r.seed == stream_seed(c.master_seed, 4));
  for (std::size_t i = 0; i < r.events.size(); ++i) {
    CHECK(r.events[i].t_after == Catch::Approx(1e-4 * static_cast<double>(i + 1)).epsilon(1e-12));
  }
  // Replay is exact.
  const auto again = run_trajectory(d, init, c, 4);
  CHECK(again.events == r.events);
}

TEST_CASE("qubit-diagonal: collapse, absorbing states and momentum sign") {
  const auto d = qubit_diagonal({});
  const HybridPureState init{kPlus, {}, 0.0};
  auto c = fig1_config(400, 0.1);
  for (std::uint64_t i = 0; i < c.n_traj; ++i) {
    const auto r = run_trajectory(d, init, c, i);
    int first = 0;
    for (const auto& e : r.events) {
      if (e.kind != StepEvent::Kind::Jump) continue;
      if (first == 0) first = e.channel;
      REQUIRE(e.channel == first);
    }
    const auto& fin = r.snapshots.back();
    if (first == 0) continue;
    REQUIRE(fin.phi.population(static_cast<std::size_t>(first - 1)) == Catch::Approx(1.0).margin(1e-12));
    // Channel 1 (|0>) kicks p down, channel 2 (|1>) kicks p up.
    REQUIRE((first == 1 ? fin.z.p < 0.0 : fin.z.p > 0.0));
  }
}

TEST_CASE("qubit-nondiagonal momentum takes at most three values") {
  const auto n = qubit_nondiagonal({});
  const HybridPureState init{QuantumState::basis(2, 0), {}, 0.0};
  auto c = fig1_config(300, 0.1);
  std::set<double> seen;
  for (std::uint64_t i = 0; i < c.n_traj; ++i) {
    for (const auto& e : run_trajectory(n, init, c, i).events) seen.insert(e.z_after.p);
  }
  for (double p : seen) CHECK((p == -0.01 || p == 0.0 || p == 0.01));
}

TEST_CASE("state stays normalized after every step") {
  OscillatorParams op;
  op.fock_dim = 24;
  const auto ho = harmonic_oscillator(op);
  Stepper st(ho, 1e-3);
  StreamRng rng(8);
  CVector phi = QuantumState::superposition(24, {3, 9}).amplitudes();
  PhasePoint z;
  for (int i = 0; i < 5000; ++i) {
    st.advance(phi, z, rng.uniform());
    REQUIRE(std::abs(phi.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("jump counts are Poisson(t / tau)") {
  // chi-square goodness of fit on 10^4 trajectories, t/tau = 10
  const auto d = qubit_diagonal({});
  const HybridPureState init{kPlus, {}, 0.0};
  auto c = fig1_config(10000, 0.1);
  std::map<int, double> counts;
  Stepper st(d, c.dt);
  for (std::uint64_t i = 0; i < c.n_traj; ++i) {
    StreamRng rng(c.master_seed, i);
    CVector phi = init.phi.amplitudes();
    PhasePoint z;
    int k = 0;
    for (std::size_t s = 0; s < c.n_steps(); ++s) k += st.advance(phi, z, rng.uniform()) >= 0 ? 1 : 0;
    counts[k] += 1.0;
  }
  // Pool tails so every expected count is >= 5. The step scheme is
  // binomial(1000, 0.01), so use that as the exact null (Poisson in the limit).
  auto binom = [](int k) {
    return std::exp(std::lgamma(1001.0) - std::lgamma(k + 1.0) - std::lgamma(1001.0 - k) + k * std::log(0.01) +
                    (1000 - k) * std::log(0.99));
  };
  const int lo = 3;
  const int hi = 18;
  double chi2 = 0.0;
  double tail_lo_e = 0.0, tail_lo_o = 0.0, tail_hi_e = 0.0, tail_hi_o = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double e = 1e4 * binom(k);
    const double o = counts.count(k) ? counts[k] : 0.0;
    if (k <= lo) {
      tail_lo_e += e;
      tail_lo_o += o;
    } else if (k >= hi) {
      tail_hi_e += e;
      tail_hi_o += o;
    } else {
      chi2 += (o - e) * (o - e) / e;
    }
  }
  chi2 += (tail_lo_o - tail_lo_e) * (tail_lo_o - tail_lo_e) / tail_lo_e;
  chi2 += (tail_hi_o - tail_hi_e) * (tail_hi_o - tail_hi_e) / tail_hi_e;
  // 16 cells, 15 degrees of freedom; the p = 0.01 critical value is 30.58.
  CHECK(chi2 < 30.58);
  // Poisson and binomial weights agree to within a percent near the mode.
  CHECK(std::abs(poisson_weight(10, 0.1, 0.01) - binom(10)) < 0.01 * binom(10) + 1e-3);
}

TEST_CASE("ensemble output does not depend on the thread count") {
  const auto d = qubit_diagonal({});
  const HybridPureState init{kPlus, {}, 0.0};
  auto c = fig1_config(300, 0.02);
  c.snapshot_times = {0.01, 0.02};
  std::vector<std::tuple<std::size_t, std::uint64_t, double, double, Complex>> ref;
  for (unsigned threads : {1u, 2u, 5u, 0u}) {
    c.threads = threads;
    std::vector<std::tuple<std::size_t, std::uint64_t, double, double, Complex>> seen;
    for_each_snapshot(d, init, c, [&](std::size_t s, std::uint64_t i, const HybridPureState& st) {
      seen.emplace_back(s, i, st.z.q, st.z.p, st.phi[0]);
    });
    if (ref.empty()) {
      ref = seen;
      CHECK(ref.size() == 600);
      CHECK(std::get<1>(ref[2]) == 1);
    } else {
      CHECK(seen == ref);
    }
  }
}

TEST_CASE("run_ensemble") {
  const auto d = qubit_diagonal({});
  const HybridPureState init{kPlus, {}, 0.0};
  auto c = fig1_config(1, 0.0);
  c.q_axis = BinAxis::centered(1e-3, 5);
  c.p_axis = BinAxis::centered(1e-2, 5);
  const auto g = run_ensemble(d, init, c);
  REQUIRE(g.size() == 1);
  CHECK(g[0].raw_cells().size() == 1);
  CHECK((g[0].mass(2, 2) - kPlus.projector()).norm() < 1e-15);

  // u_0 drifts to negative momentum, u_1 to positive.
  auto c2 = fig1_config(2000, 0.1);
  c2.q_axis = BinAxis::centered(1e-3, 41);
  c2.p_axis = BinAxis::centered(1e-2, 41);
  c2.threads = 2;
  const auto g2 = run_ensemble(d, init, c2).front();
  double p0 = 0.0, p1 = 0.0;
  for (const auto& [k, m] : g2.raw_cells()) {
    const double pc = g2.p_axis().center(g2.key_p(k));
    p0 += pc * m(0, 0).real();
    p1 += pc * m(1, 1).real();
  }
  CHECK(p0 < 0.0);
  CHECK(p1 > 0.0);
  CHECK(std::abs(g2.total_trace() - 1.0) <= 3.0 / std::sqrt(2000.0));
  const auto chk = g2.check_cells();
  CHECK(chk.max_hermiticity_defect <= 1e-10);
  CHECK(chk.min_eigenvalue >= -1e-10);
}

TEST_CASE("engine configuration validation") {
  const auto d = qubit_diagonal({});
  auto c = fig1_config(1, 0.1);
  CHECK_NOTHROW(c.validate(d));
  auto bad = c;
  bad.dt = 0.02;
  CHECK_THROWS_AS(bad.validate(d), InvalidInput);
  bad = c;
  bad.n_traj = 0;
  CHECK_THROWS_AS(bad.validate(d), InvalidInput);
  bad = c;
  bad.snapshot_times = {0.00015};
  CHECK_THROWS_AS(bad.validate(d), InvalidInput);
  bad = c;
  bad.snapshot_times = {0.2};
  CHECK_THROWS_AS(bad.validate(d), InvalidInput);
  bad = c;
  bad.q_axis = BinAxis::centered(1.0, 3);
  CHECK_THROWS_AS(bad.validate(d), InvalidInput);
  CHECK(c.n_steps() == 1000);
  c.snapshot_times = {0.1, 0.0, 0.03};
  CHECK(c.snapshot_steps() == std::vector<std::size_t>{1000, 0, 300});
}
