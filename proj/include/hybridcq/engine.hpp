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

// Stochastic unravelling of the hybrid master equation.
//
// Every time step either evolves the pure hybrid state continuously
//   phi <- (1 - i dt H_eff(z)) phi / norm,   z <- z + dt (dH_C/dp, -dH_C/dq)
// with probability p_0, or applies jump alpha
//   phi <- L_alpha phi / norm,               z <- z + tau_alpha (dh/dp, -dh/dq)
// with probability p_alpha = (dt / tau_alpha) <phi|L_alpha^dag L_alpha|phi>.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hybridcq/core.hpp"
#include "hybridcq/grid.hpp"
#include "hybridcq/rng.hpp"

namespace hybridcq {

struct StepEvent {
  enum class Kind { Continuous, Jump };
  Kind kind = Kind::Continuous;
  /// Label of the channel that fired; 0 for continuous steps.
  int channel = 0;
  double t_before = 0.0;
  double t_after = 0.0;
  PhasePoint z_after;

  friend bool operator==(const StepEvent&, const StepEvent&) = default;
};

struct JumpProbabilities {
  double p0 = 1.0;
  /// One entry per channel, in model order.
  std::vector<double> p;

  /// p0 + (p[0] + p[1] + ...), summed left to right. Equals 1 bitwise.
  double total() const;
};

struct EngineConfig {
  double dt = 0.0;
  double total_time = 0.0;
  std::uint64_t n_traj = 1;
  std::uint64_t master_seed = 0;
  /// Elapsed times (from the initial state) at which states are sampled. Each
  /// must be a multiple of dt in [0, total_time].
  std::vector<double> snapshot_times;
  /// Binning used by run_ensemble.
  std::optional<BinAxis> q_axis;
  std::optional<BinAxis> p_axis;
  /// Worker threads; 0 picks the hardware concurrency. Never changes results.
  unsigned threads = 1;

  /// Throws InvalidInput when dt, T, n_traj or snapshot times are unusable for `model`.
  void validate(const ModelSpec& model) const;
  std::size_t n_steps() const;
  /// Step index of each snapshot time, in the order given.
  std::vector<std::size_t> snapshot_steps() const;
};

struct TrajectoryRecord {
  HybridPureState initial;
  std::vector<StepEvent> events;
  std::vector<HybridPureState> snapshots;
  std::uint64_t seed = 0;
  std::uint64_t traj_index = 0;
};

/// H_I(z) - (i/2) sum_alpha L_alpha^dag L_alpha / tau_alpha.
CMatrix effective_hamiltonian(const ModelSpec& model, const PhasePoint& z);

HybridPureState continuous_step(const ModelSpec& model, const HybridPureState& state, double dt);
JumpProbabilities jump_probabilities(const ModelSpec& model, const HybridPureState& state, double dt);
/// Applies channel `channel_index` (position in model.channels(), not its label).
HybridPureState jump_step(const ModelSpec& model, const HybridPureState& state, std::size_t channel_index,
                          double dt);

/// Reusable in-place stepper for one model and step size. Holds scratch
/// buffers, so one instance per thread.
class Stepper {
 public:
  Stepper(const ModelSpec& model, double dt);

  const ModelSpec& model() const noexcept { return model_; }
  double dt() const noexcept { return dt_; }

  /// Fills probs_ from phi; returns p0. Throws StepSizeFault when p0 < 0.
  double compute_probabilities(const CVector& phi);
  const std::vector<double>& probabilities() const noexcept { return probs_; }

  void continuous(CVector& phi, PhasePoint& z);
  void jump(CVector& phi, PhasePoint& z, std::size_t channel_index);

  /// Picks the branch for uniform draw u in [0, 1) after compute_probabilities.
  /// Returns -1 for the continuous branch, otherwise a channel index.
  int select(double u, double p0) const;

  /// One full update; returns the branch taken as in select().
  int advance(CVector& phi, PhasePoint& z, double u) {
    const double p0 = compute_probabilities(phi);
    const int branch = select(u, p0);
    if (branch < 0) {
      continuous(phi, z);
    } else {
      jump(phi, z, static_cast<std::size_t>(branch));
    }
    return branch;
  }

 private:
  const ModelSpec& model_;
  double dt_;
  std::vector<double> probs_;
  CVector work_;
};

/// One unravelling step driven by `uniform`, a callable returning doubles in [0, 1).
template <typename Uniform>
std::pair<HybridPureState, StepEvent> step(const ModelSpec& model, const HybridPureState& state, double dt,
                                           Uniform&& uniform) {
  Stepper stepper(model, dt);
  CVector phi = state.phi.amplitudes();
  PhasePoint z = state.z;
  const int branch = stepper.advance(phi, z, uniform());
  StepEvent event;
  event.kind = branch < 0 ? StepEvent::Kind::Continuous : StepEvent::Kind::Jump;
  event.channel = branch < 0 ? 0 : model.channels()[static_cast<std::size_t>(branch)].label();
  event.t_before = state.t;
  event.t_after = state.t + dt;
  event.z_after = z;
  return {HybridPureState{QuantumState(std::move(phi)), z, state.t + dt}, event};
}

/// Deterministic in (model, initial, config.master_seed, traj_index).
TrajectoryRecord run_trajectory(const ModelSpec& model, const HybridPureState& initial, const EngineConfig& config,
                                std::uint64_t traj_index);

/// Called once per (snapshot, trajectory) with the sampled state.
using SnapshotVisitor = std::function<void(std::size_t snapshot_index, std::uint64_t traj_index,
                                           const HybridPureState& state)>;

/// Runs config.n_traj trajectories on config.threads workers and hands every
/// snapshot to `visitor` on the calling thread, ordered by trajectory index
/// and then snapshot index, whatever the thread count. The first failing
/// trajectory (by index) aborts the run with an EngineFault.
void for_each_snapshot(const ModelSpec& model, const HybridPureState& initial, const EngineConfig& config,
                       const SnapshotVisitor& visitor);

/// One density grid per snapshot time, built from config.q_axis / config.p_axis.
std::vector<HybridDensityGrid> run_ensemble(const ModelSpec& model, const HybridPureState& initial,
                                            const EngineConfig& config);

}  // namespace hybridcq
