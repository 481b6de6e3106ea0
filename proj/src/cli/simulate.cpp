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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "common.hpp"
#include "hybridcq/cli/commands.hpp"
#include "hybridcq/engine.hpp"
#include "hybridcq/errors.hpp"
#include "hybridcq/stats.hpp"

namespace hybridcq::cli {

namespace {

using detail::CsvWriter;

struct CoherencePair {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

struct SimulationPlan {
  ModelSpec model;
  HybridPureState initial;
  EngineConfig engine;
  std::filesystem::path out_dir;
  bool write_density = true;
  bool write_energy = true;
  std::vector<std::size_t> moment_levels;
  std::vector<CoherencePair> coherence_pairs;
};

SimulationPlan plan_from_config(Config& cfg, const CommandOptions& options) {
  ModelSpec model = model_from_config(cfg);
  HybridPureState initial = initial_from_config(cfg, model.dim());

  EngineConfig engine;
  engine.dt = cfg.number("engine", "dt_seconds");
  engine.total_time = cfg.number("engine", "total_time_seconds");
  const auto n_traj = cfg.integer("engine", "n_traj");
  if (n_traj < 1) cfg.fail("engine", "n_traj", "must be at least 1");
  engine.n_traj = static_cast<std::uint64_t>(n_traj);
  engine.master_seed = cfg.unsigned_integer("engine", "seed", 0);
  if (options.seed) {
    engine.master_seed = *options.seed;
    cfg.set_resolved("engine", "seed", std::to_string(*options.seed));
  }
  engine.snapshot_times = cfg.numbers("engine", "snapshot_times_seconds", {engine.total_time});
  // The thread count never changes results, so it is not part of the recorded configuration.
  engine.threads = options.threads.value_or(1);
  if (!(engine.dt > 0.0)) cfg.fail("engine", "dt_seconds", "must be positive");
  if (!(engine.total_time >= 0.0)) cfg.fail("engine", "total_time_seconds", "must be >= 0");
  try {
    engine.validate(model);
  } catch (const InvalidInput& e) {
    cfg.fail("engine", "dt_seconds", e.what());
  }

  SimulationPlan plan{std::move(model), std::move(initial), std::move(engine), {}, true, true, {}, {}};

  const std::string dir = cfg.string("outputs", "directory", "output");
  plan.out_dir = options.out_dir.value_or(dir);
  // Where the files land is not part of the result; leaving it out keeps
  // runs written to different directories byte-comparable.
  cfg.omit_resolved("outputs", "directory");
  plan.write_density = cfg.boolean("outputs", "density", true);
  plan.write_energy = cfg.boolean("outputs", "energy", true);

  const std::size_t d = plan.model.dim();
  std::vector<double> default_levels;
  std::vector<std::string> default_pairs;
  if (d == 2) {
    default_levels = {0.0, 1.0};
    default_pairs = {"0:1"};
  }
  for (double l : cfg.numbers("outputs", "moment_levels", default_levels)) {
    if (l < 0.0 || l != std::floor(l) || l >= static_cast<double>(d)) {
      cfg.fail("outputs", "moment_levels", "entries must be level indices below " + std::to_string(d));
    }
    plan.moment_levels.push_back(static_cast<std::size_t>(l));
  }
  for (const auto& s : cfg.strings("outputs", "coherence_pairs", default_pairs)) {
    const auto colon = s.find(':');
    char* e1 = nullptr;
    char* e2 = nullptr;
    const std::string a = colon == std::string::npos ? "" : s.substr(0, colon);
    const std::string b = colon == std::string::npos ? "" : s.substr(colon + 1);
    const unsigned long n1 = std::strtoul(a.c_str(), &e1, 10);
    const unsigned long n2 = std::strtoul(b.c_str(), &e2, 10);
    if (a.empty() || b.empty() || e1 != a.c_str() + a.size() || e2 != b.c_str() + b.size() || n1 >= d || n2 >= d) {
      cfg.fail("outputs", "coherence_pairs", "entry '" + s + "' is not a pair \"n1:n2\" of levels below " + std::to_string(d));
    }
    plan.coherence_pairs.push_back({n1, n2});
  }

  if (plan.write_density) {
    const double wq = cfg.number("grid", "q_bin_width_meters");
    const auto nq = cfg.integer("grid", "q_bins");
    const double wp = cfg.number("grid", "p_bin_width_kg_meter_per_second");
    const auto np = cfg.integer("grid", "p_bins");
    if (!(wq > 0.0)) cfg.fail("grid", "q_bin_width_meters", "must be positive");
    if (!(wp > 0.0)) cfg.fail("grid", "p_bin_width_kg_meter_per_second", "must be positive");
    if (nq < 1 || nq % 2 == 0 || nq > 100001) cfg.fail("grid", "q_bins", "must be an odd count up to 100001");
    if (np < 1 || np % 2 == 0 || np > 100001) cfg.fail("grid", "p_bins", "must be an odd count up to 100001");
    plan.engine.q_axis = BinAxis::centered(wq, static_cast<std::size_t>(nq));
    plan.engine.p_axis = BinAxis::centered(wp, static_cast<std::size_t>(np));
  }
  cfg.check_all_used();
  return plan;
}

std::string level_name(std::optional<std::size_t> level) { return level ? std::to_string(*level) : "trace"; }

}  // namespace

int cmd_simulate(const CommandOptions& options, std::ostream& log) {
  Config cfg;
  SimulationPlan plan{qubit_diagonal({}), {QuantumState::basis(2, 0), {}, 0.0}, {}, {}, true, true, {}, {}};
  try {
    cfg = Config::load(options.config_path);
    plan = plan_from_config(cfg, options);
    detail::ensure_directory(plan.out_dir);
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  const std::size_t n_snap = plan.engine.snapshot_steps().size();
  const std::size_t d = plan.model.dim();
  std::vector<double> times;
  for (std::size_t s : plan.engine.snapshot_steps()) {
    times.push_back(plan.initial.t + static_cast<double>(s) * plan.engine.dt);
  }

  // Per snapshot accumulators. Index 0 of the moment vectors is the trace.
  std::vector<std::optional<std::size_t>> levels{std::nullopt};
  for (std::size_t l : plan.moment_levels) levels.emplace_back(l);
  std::vector<std::vector<MomentAccumulator>> acc_q(n_snap, std::vector<MomentAccumulator>(levels.size()));
  std::vector<std::vector<MomentAccumulator>> acc_p(n_snap, std::vector<MomentAccumulator>(levels.size()));
  std::vector<MomentAccumulator> acc_energy(n_snap);
  std::vector<std::vector<CoherenceAccumulator>> acc_coh(n_snap,
                                                         std::vector<CoherenceAccumulator>(plan.coherence_pairs.size()));
  std::vector<double> top_population(n_snap, 0.0);
  std::vector<HybridDensityGrid> grids;
  if (plan.write_density) {
    for (std::size_t s = 0; s < n_snap; ++s) grids.emplace_back(*plan.engine.q_axis, *plan.engine.p_axis, d, times[s]);
  }
  const bool truncated_model = plan.model.name() == "oscillator";

  try {
    for_each_snapshot(plan.model, plan.initial, plan.engine,
                      [&](std::size_t s, std::uint64_t, const HybridPureState& state) {
                        for (std::size_t i = 0; i < levels.size(); ++i) {
                          const double w = levels[i] ? state.phi.population(*levels[i]) : 1.0;
                          acc_q[s][i].add(state.z.q, w);
                          acc_p[s][i].add(state.z.p, w);
                        }
                        if (plan.write_energy) acc_energy[s].add(energy_sample(plan.model, state));
                        for (std::size_t c = 0; c < plan.coherence_pairs.size(); ++c) {
                          const auto& pr = plan.coherence_pairs[c];
                          acc_coh[s][c].add(state.phi[pr.n1] * std::conj(state.phi[pr.n2]));
                        }
                        if (truncated_model) top_population[s] += state.phi.population(d - 1) + state.phi.population(d - 2);
                        if (plan.write_density) grids[s].deposit(state.z, state.phi);
                      });
  } catch (const EngineFault& e) {
    log << "engine fault: " << e.what() << '\n';
    return kExitEngine;
  }

  const double n = static_cast<double>(plan.engine.n_traj);
  const auto header = detail::header_block(
      {"hybridcq simulate", "model = " + plan.model.name(), "seed = " + std::to_string(plan.engine.master_seed),
       "n_traj = " + std::to_string(plan.engine.n_traj)},
      cfg);
  auto f = format_double;

  try {
    if (plan.write_density) {
      for (std::size_t s = 0; s < n_snap; ++s) {
        auto h = header;
        h.push_back("snapshot " + std::to_string(s) + " at t = " + f(times[s]) +
                    "; density per unit phase-space area, upper triangle, non-zero entries");
        h.push_back("samples outside the grid = " + std::to_string(grids[s].n_outside()));
        CsvWriter w(plan.out_dir / ("density_s" + std::to_string(s) + ".csv"), h,
                    {"t", "iq", "ip", "q_center", "p_center", "row", "col", "density_re", "density_im"});
        const auto& g = grids[s];
        for (const auto& [key, raw] : g.raw_cells()) {
          (void)raw;
          const std::size_t iq = g.key_q(key);
          const std::size_t ip = g.key_p(key);
          const CMatrix rho = g.density(iq, ip);
          for (Eigen::Index r = 0; r < rho.rows(); ++r) {
            for (Eigen::Index c = r; c < rho.cols(); ++c) {
              if (rho(r, c) == Complex(0.0, 0.0)) continue;
              w.row({f(times[s]), std::to_string(iq), std::to_string(ip), f(g.q_axis().center(iq)),
                     f(g.p_axis().center(ip)), std::to_string(r), std::to_string(c), f(rho(r, c).real()),
                     f(rho(r, c).imag())});
            }
          }
        }
        w.close();
      }
    }

    {
      auto h = header;
      h.push_back("moments of the level-conditioned marginals from trajectory samples; weight = population");
      CsvWriter w(plan.out_dir / "moments.csv", h,
                  {"t", "level", "weight", "mean_q", "mean_q_se", "var_q", "var_q_se", "mean_p", "mean_p_se", "var_p",
                   "var_p_se"});
      for (std::size_t s = 0; s < n_snap; ++s) {
        for (std::size_t i = 0; i < levels.size(); ++i) {
          const double weight = acc_q[s][i].weight() / n;
          if (!(acc_q[s][i].weight() > 0.0)) {
            w.row({f(times[s]), level_name(levels[i]), f(0.0), "nan", "nan", "nan", "nan", "nan", "nan", "nan", "nan"});
            continue;
          }
          const Moments mq = acc_q[s][i].result();
          const Moments mp = acc_p[s][i].result();
          w.row({f(times[s]), level_name(levels[i]), f(weight), f(mq.mean), f(mq.mean_se), f(mq.variance),
                 f(mq.variance_se), f(mp.mean), f(mp.mean_se), f(mp.variance), f(mp.variance_se)});
        }
      }
      w.close();
    }

    if (plan.write_energy) {
      auto h = header;
      h.push_back("mean of H_C(z) + <phi|H_I(z)|phi> over trajectories");
      CsvWriter w(plan.out_dir / "energy.csv", h, {"t", "energy", "energy_se"});
      for (std::size_t s = 0; s < n_snap; ++s) {
        const Moments m = acc_energy[s].result();
        const double se = plan.engine.n_traj > 1 ? std::sqrt(m.variance / (n - 1.0)) : 0.0;
        w.row({f(times[s]), f(m.mean), f(se)});
      }
      w.close();
    }

    if (!plan.coherence_pairs.empty()) {
      auto h = header;
      h.push_back("coherence <n1|rho|n2> with the classical degrees of freedom traced out");
      CsvWriter w(plan.out_dir / "coherence.csv", h, {"t", "n1", "n2", "re", "im", "abs", "abs_se"});
      for (std::size_t s = 0; s < n_snap; ++s) {
        for (std::size_t c = 0; c < plan.coherence_pairs.size(); ++c) {
          const auto est = acc_coh[s][c].result();
          w.row({f(times[s]), std::to_string(plan.coherence_pairs[c].n1), std::to_string(plan.coherence_pairs[c].n2),
                 f(est.value.real()), f(est.value.imag()), f(std::abs(est.value)), f(est.abs_se)});
        }
      }
      w.close();
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  if (truncated_model) {
    for (std::size_t s = 0; s < n_snap; ++s) {
      const double pop = top_population[s] / n;
      if (pop > kTruncationThreshold) {
        log << "engine fault: population " << f(pop) << " in the top two Fock levels at t = " << f(times[s])
            << " exceeds " << f(kTruncationThreshold) << "; increase fock_dim\n";
        return kExitEngine;
      }
    }
  }
  log << "wrote " << plan.out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace hybridcq::cli
