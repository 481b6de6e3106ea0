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

#include "hybridcq/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "hybridcq/errors.hpp"

namespace hybridcq {

double JumpProbabilities::total() const {
  double s = 0.0;
  for (double x : p) s += x;
  return p0 + s;
}

// ---------------------------------------------------------------------------
// Configuration

void EngineConfig::validate(const ModelSpec& model) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be positive and finite");
  if (!model.channels().empty() && !(dt < model.min_tau())) {
    throw InvalidInput("dt must be smaller than the smallest channel tau (" + std::to_string(model.min_tau()) + ")");
  }
  if (!(total_time >= 0.0) || !std::isfinite(total_time)) throw InvalidInput("total time must be >= 0 and finite");
  if (n_traj == 0) throw InvalidInput("n_traj must be at least 1");
  for (double t : snapshot_times) {
    if (!std::isfinite(t) || t < 0.0) throw InvalidInput("snapshot times must be finite and >= 0");
    const double ratio = t / dt;
    if (std::abs(ratio - std::nearbyint(ratio)) > 1e-6) {
      throw InvalidInput("snapshot time " + std::to_string(t) + " is not a multiple of dt");
    }
    if (static_cast<std::size_t>(std::llround(ratio)) > n_steps()) {
      throw InvalidInput("snapshot time " + std::to_string(t) + " is beyond the total time");
    }
  }
  if (q_axis.has_value() != p_axis.has_value()) throw InvalidInput("grid needs both q and p axes");
}

std::size_t EngineConfig::n_steps() const {
  if (total_time <= 0.0) return 0;
  // The small offset absorbs rounding in T/dt for T an exact multiple of dt.
  return static_cast<std::size_t>(std::ceil(total_time / dt - 1e-9));
}

std::vector<std::size_t> EngineConfig::snapshot_steps() const {
  if (snapshot_times.empty()) return {n_steps()};
  std::vector<std::size_t> steps;
  steps.reserve(snapshot_times.size());
  for (double t : snapshot_times) steps.push_back(static_cast<std::size_t>(std::llround(t / dt)));
  return steps;
}

// ---------------------------------------------------------------------------
// Single steps

CMatrix effective_hamiltonian(const ModelSpec& model, const PhasePoint& z) {
  CMatrix h = interaction_hamiltonian(model, z);
  for (const auto& c : model.channels()) {
    h -= (0.5 * kI / c.tau()) * CMatrix(c.jump_weight_operator());
  }
  return h;
}

Stepper::Stepper(const ModelSpec& model, double dt)
    : model_(model), dt_(dt), probs_(model.channels().size(), 0.0), work_(model.dim()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be positive and finite");
}

double Stepper::compute_probabilities(const CVector& phi) {
  const auto& channels = model_.channels();
  double sum = 0.0;
  for (std::size_t a = 0; a < channels.size(); ++a) {
    const double w = detail::sparse_expectation(channels[a].jump_weight_operator(), phi);
    // <L^dag L> >= 0; clip rounding noise so a channel that cannot fire gets exactly 0.
    probs_[a] = w > 0.0 ? (dt_ / channels[a].tau()) * w : 0.0;
    sum += probs_[a];
  }
  const double p0 = 1.0 - sum;
  if (p0 < 0.0) {
    throw StepSizeFault("no-jump probability is negative (" + std::to_string(p0) + "); reduce dt");
  }
  return p0;
}

int Stepper::select(double u, double p0) const {
  if (u < p0) return -1;
  double acc = p0;
  int last = -1;
  for (std::size_t a = 0; a < probs_.size(); ++a) {
    if (probs_[a] <= 0.0) continue;
    last = static_cast<int>(a);
    acc += probs_[a];
    if (u < acc) return last;
  }
  // Rounding left u above the cumulative sum: take the last channel that can fire.
  return last;
}

void Stepper::continuous(CVector& phi, PhasePoint& z) {
  const auto& channels = model_.channels();
  work_ = phi;
  for (const auto& c : channels) {
    const Complex coef = -kI * dt_ * c.h().value(z) - dt_ / (2.0 * c.tau());
    const auto& k = c.jump_weight_operator();
    for (int r = 0; r < k.outerSize(); ++r) {
      Complex row(0.0, 0.0);
      for (SparseCMatrix::InnerIterator it(k, r); it; ++it) row += it.value() * phi(it.col());
      work_(r) += coef * row;
    }
  }
  const double norm = work_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw StepSizeFault("continuous step produced a vanishing state; reduce dt");
  }
  phi = work_ / norm;

  const auto& hc = model_.classical_hamiltonian();
  const double dq = hc.d_dp(z) * dt_;
  const double dp = -hc.d_dq(z) * dt_;
  z.q += dq;
  z.p += dp;
}

void Stepper::jump(CVector& phi, PhasePoint& z, std::size_t channel_index) {
  const auto& channels = model_.channels();
  if (channel_index >= channels.size()) throw InvalidInput("jump: channel index out of range");
  const auto& c = channels[channel_index];
  work_.noalias() = c.jump_operator() * phi;
  const double norm = work_.norm();
  if (!(norm > 0.0)) {
    throw ImpossibleJumpFault("channel " + std::to_string(c.label()) + " annihilates the current state");
  }
  phi = work_ / norm;
  const PhasePoint kick = c.kick(z);
  z.q += kick.q;
  z.p += kick.p;
}

HybridPureState continuous_step(const ModelSpec& model, const HybridPureState& state, double dt) {
  Stepper stepper(model, dt);
  CVector phi = state.phi.amplitudes();
  PhasePoint z = state.z;
  stepper.continuous(phi, z);
  return {QuantumState(std::move(phi)), z, state.t + dt};
}

JumpProbabilities jump_probabilities(const ModelSpec& model, const HybridPureState& state, double dt) {
  Stepper stepper(model, dt);
  JumpProbabilities out;
  out.p0 = stepper.compute_probabilities(state.phi.amplitudes());
  out.p = stepper.probabilities();
  return out;
}

HybridPureState jump_step(const ModelSpec& model, const HybridPureState& state, std::size_t channel_index,
                          double dt) {
  Stepper stepper(model, dt);
  CVector phi = state.phi.amplitudes();
  PhasePoint z = state.z;
  stepper.jump(phi, z, channel_index);
  return {QuantumState(std::move(phi)), z, state.t + dt};
}

// ---------------------------------------------------------------------------
// Trajectories

namespace {

/// (step, snapshot index) pairs sorted by step so one pass covers them all.
std::vector<std::pair<std::size_t, std::size_t>> snapshot_schedule(const EngineConfig& config) {
  const auto steps = config.snapshot_steps();
  std::vector<std::pair<std::size_t, std::size_t>> schedule;
  for (std::size_t i = 0; i < steps.size(); ++i) schedule.emplace_back(steps[i], i);
  std::sort(schedule.begin(), schedule.end());
  return schedule;
}

/// Runs one trajectory; `on_event` may be null. Snapshots land in `snaps`
/// indexed like config.snapshot_times.
void simulate(const ModelSpec& model, const HybridPureState& initial, const EngineConfig& config,
              const std::vector<std::pair<std::size_t, std::size_t>>& schedule, std::uint64_t traj_index,
              std::vector<StepEvent>* events, std::vector<HybridPureState>& snaps) {
  StreamRng rng(config.master_seed, traj_index);
  Stepper stepper(model, config.dt);
  CVector phi = initial.phi.amplitudes();
  PhasePoint z = initial.z;
  const std::size_t n_steps = config.n_steps();
  auto next = schedule.begin();
  auto take = [&](std::size_t n) {
    while (next != schedule.end() && next->first == n) {
      snaps[next->second] = HybridPureState{QuantumState(phi), z, initial.t + static_cast<double>(n) * config.dt};
      ++next;
    }
  };
  take(0);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t_before = initial.t + static_cast<double>(n) * config.dt;
    int branch = -1;
    try {
      branch = stepper.advance(phi, z, rng.uniform());
    } catch (const StepSizeFault& e) {
      throw StepSizeFault(std::string(e.what()) + " at t=" + std::to_string(t_before));
    } catch (const ImpossibleJumpFault& e) {
      throw ImpossibleJumpFault(std::string(e.what()) + " at t=" + std::to_string(t_before));
    }
    if (events != nullptr) {
      StepEvent ev;
      ev.kind = branch < 0 ? StepEvent::Kind::Continuous : StepEvent::Kind::Jump;
      ev.channel = branch < 0 ? 0 : model.channels()[static_cast<std::size_t>(branch)].label();
      ev.t_before = t_before;
      ev.t_after = initial.t + static_cast<double>(n + 1) * config.dt;
      ev.z_after = z;
      events->push_back(ev);
    }
    take(n + 1);
  }
}

void check_initial(const ModelSpec& model, const HybridPureState& initial) {
  if (initial.phi.dim() != model.dim()) throw InvalidInput("initial state dimension does not match the model");
  if (!initial.z.finite() || !std::isfinite(initial.t)) throw InvalidInput("initial phase point must be finite");
}

}  // namespace

TrajectoryRecord run_trajectory(const ModelSpec& model, const HybridPureState& initial, const EngineConfig& config,
                                std::uint64_t traj_index) {
  config.validate(model);
  check_initial(model, initial);
  const auto schedule = snapshot_schedule(config);
  TrajectoryRecord record{initial, {}, {}, stream_seed(config.master_seed, traj_index), traj_index};
  record.events.reserve(config.n_steps());
  record.snapshots.assign(schedule.size(), initial);
  simulate(model, initial, config, schedule, traj_index, &record.events, record.snapshots);
  return record;
}

// ---------------------------------------------------------------------------
// Ensembles

namespace {

constexpr std::uint64_t kChunk = 64;

struct ChunkResult {
  /// snapshots[i] belongs to trajectory first + i.
  std::vector<std::vector<HybridPureState>> snapshots;
  std::uint64_t first = 0;
  /// Index of the failing trajectory inside the chunk, if any.
  std::optional<std::uint64_t> failed;
  std::string failure;
};

ChunkResult run_chunk(const ModelSpec& model, const HybridPureState& initial, const EngineConfig& config,
                      const std::vector<std::pair<std::size_t, std::size_t>>& schedule, std::uint64_t chunk) {
  ChunkResult out;
  out.first = chunk * kChunk;
  const std::uint64_t last = std::min(config.n_traj, out.first + kChunk);
  for (std::uint64_t i = out.first; i < last; ++i) {
    std::vector<HybridPureState> snaps(schedule.size(), initial);
    try {
      simulate(model, initial, config, schedule, i, nullptr, snaps);
    } catch (const std::exception& e) {
      out.failed = i;
      out.failure = e.what();
      break;
    }
    out.snapshots.push_back(std::move(snaps));
  }
  return out;
}

void deliver(const ChunkResult& chunk, const EngineConfig& config, const SnapshotVisitor& visitor) {
  for (std::size_t k = 0; k < chunk.snapshots.size(); ++k) {
    const auto& snaps = chunk.snapshots[k];
    for (std::size_t s = 0; s < snaps.size(); ++s) visitor(s, chunk.first + k, snaps[s]);
  }
  if (chunk.failed) {
    throw EngineFault(*chunk.failed, stream_seed(config.master_seed, *chunk.failed), chunk.failure);
  }
}

}  // namespace

void for_each_snapshot(const ModelSpec& model, const HybridPureState& initial, const EngineConfig& config,
                       const SnapshotVisitor& visitor) {
  config.validate(model);
  check_initial(model, initial);
  const auto schedule = snapshot_schedule(config);
  const std::uint64_t n_chunks = (config.n_traj + kChunk - 1) / kChunk;
  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));

  if (threads <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) deliver(run_chunk(model, initial, config, schedule, c), config, visitor);
    return;
  }

  // Workers claim chunks in order but may run at most `window` chunks ahead
  // of the consumer, which bounds memory. The consumer delivers strictly in
  // chunk order, so the visitor sees the same sequence for any thread count.
  const std::uint64_t window = 4ULL * threads;
  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::optional<ChunkResult>> slots(n_chunks);
  std::uint64_t next_claim = 0;
  std::uint64_t consumed = 0;
  bool stop = false;

  auto worker = [&]() {
    for (;;) {
      std::uint64_t c = 0;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return stop || next_claim >= n_chunks || next_claim < consumed + window; });
        if (stop || next_claim >= n_chunks) return;
        c = next_claim++;
      }
      ChunkResult result = run_chunk(model, initial, config, schedule, c);
      {
        std::lock_guard lock(mu);
        slots[c] = std::move(result);
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  auto shutdown = [&]() {
    {
      std::lock_guard lock(mu);
      stop = true;
    }
    cv.notify_all();
    for (auto& t : pool) t.join();
    pool.clear();
  };

  try {
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      ChunkResult result;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[c].has_value(); });
        result = std::move(*slots[c]);
        slots[c].reset();
        consumed = c + 1;
      }
      cv.notify_all();
      deliver(result, config, visitor);
    }
  } catch (...) {
    shutdown();
    throw;
  }
  shutdown();
}

std::vector<HybridDensityGrid> run_ensemble(const ModelSpec& model, const HybridPureState& initial,
                                            const EngineConfig& config) {
  if (!config.q_axis || !config.p_axis) throw InvalidInput("run_ensemble needs grid axes");
  const auto steps = config.snapshot_steps();
  std::vector<HybridDensityGrid> grids;
  grids.reserve(steps.size());
  for (std::size_t s : steps) {
    grids.emplace_back(*config.q_axis, *config.p_axis, model.dim(), initial.t + static_cast<double>(s) * config.dt);
  }
  for_each_snapshot(model, initial, config, [&](std::size_t s, std::uint64_t, const HybridPureState& state) {
    grids[s].deposit(state.z, state.phi);
  });
  return grids;
}

}  // namespace hybridcq
