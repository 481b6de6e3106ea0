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


#include "hybridcq/oracles/grid_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "hybridcq/errors.hpp"

namespace hybridcq {

namespace {

double uniform_width(const BinAxis& axis, const char* name) {
  const double w = axis.width(0);
  for (std::size_t i = 1; i < axis.bins(); ++i) {
    if (std::abs(axis.width(i) - w) > 1e-9 * w) {
      throw InvalidInput(std::string("integrator lattice must be uniform along ") + name);
    }
  }
  return w;
}

/// Displacement in cells; rejects anything that is not a whole number of cells.
long cells(double displacement, double width, const char* what) {
  const double ratio = displacement / width;
  const double rounded = std::nearbyint(ratio);
  if (!std::isfinite(ratio) || std::abs(ratio - rounded) > 1e-6 * std::max(1.0, std::abs(rounded))) {
    throw InvalidInput(std::string(what) + " of " + std::to_string(displacement) +
                       " is not commensurate with the lattice spacing " + std::to_string(width));
  }
  return static_cast<long>(rounded);
}

/// One lattice row (fixed p) holding cells [lo, lo + n) as flat d*d blocks.
struct Row {
  long lo = 0;
  long n = 0;
  std::vector<Complex> data;
};

struct Shift {
  long dq = 0;
  long dp = 0;
};

}  // namespace

MasterIntegratorResult grid_master_integrator(const ModelSpec& model, const HybridDensityGrid& initial,
                                              const MasterIntegratorSpec& spec) {
  if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) throw InvalidInput("integrator dt must be positive");
  if (!(spec.total_time >= 0.0)) throw InvalidInput("integrator total time must be >= 0");
  if (initial.dim() != model.dim()) throw InvalidInput("initial density dimension does not match the model");
  if (spec.output_q_axis.has_value() != spec.output_p_axis.has_value()) {
    throw InvalidInput("output grid needs both q and p axes");
  }

  const BinAxis& qa = initial.q_axis();
  const BinAxis& pa = initial.p_axis();
  const double wq = uniform_width(qa, "q");
  const double wp = uniform_width(pa, "p");
  const long nq = static_cast<long>(qa.bins());
  const long np = static_cast<long>(pa.bins());
  const auto d = static_cast<Eigen::Index>(model.dim());
  const long block = static_cast<long>(d * d);

  const std::size_t n_steps =
      spec.total_time <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(spec.total_time / spec.dt - 1e-9));
  std::vector<std::pair<std::size_t, std::size_t>> schedule;
  for (std::size_t i = 0; i < spec.output_times.size(); ++i) {
    const double ratio = spec.output_times[i] / spec.dt;
    if (!(spec.output_times[i] >= 0.0) || std::abs(ratio - std::nearbyint(ratio)) > 1e-6 ||
        static_cast<std::size_t>(std::llround(ratio)) > n_steps) {
      throw InvalidInput("output time " + std::to_string(spec.output_times[i]) + " is not a step time of the run");
    }
    schedule.emplace_back(static_cast<std::size_t>(std::llround(ratio)), i);
  }
  std::sort(schedule.begin(), schedule.end());

  const BinAxis& out_q = spec.output_q_axis ? *spec.output_q_axis : qa;
  const BinAxis& out_p = spec.output_p_axis ? *spec.output_p_axis : pa;
  const auto qmap = bin_map(qa, out_q);
  const auto pmap = bin_map(pa, out_p);

  const auto& channels = model.channels();
  std::vector<CMatrix> jump_ops;
  std::vector<CMatrix> weight_ops;
  for (const auto& c : channels) {
    jump_ops.emplace_back(c.jump_operator());
    weight_ops.emplace_back(c.jump_weight_operator());
  }

  std::vector<Row> rows(static_cast<std::size_t>(np));
  for (const auto& [key, raw] : initial.raw_cells()) {
    (void)raw;
    const long iq = static_cast<long>(initial.key_q(key));
    const long ip = static_cast<long>(initial.key_p(key));
    Row& row = rows[static_cast<std::size_t>(ip)];
    const long lo = row.n == 0 ? iq : std::min(row.lo, iq);
    const long hi = row.n == 0 ? iq + 1 : std::max(row.lo + row.n, iq + 1);
    std::vector<Complex> data(static_cast<std::size_t>((hi - lo) * block), Complex(0.0, 0.0));
    if (row.n > 0) std::copy(row.data.begin(), row.data.end(), data.begin() + (row.lo - lo) * block);
    row.lo = lo;
    row.n = hi - lo;
    row.data = std::move(data);
    const CMatrix m = initial.mass(static_cast<std::size_t>(iq), static_cast<std::size_t>(ip));
    Eigen::Map<CMatrix>(row.data.data() + (iq - lo) * block, d, d) += m;
  }

  MasterIntegratorResult result;
  result.steps = n_steps;

  auto total_trace = [&]() {
    double acc = 0.0;
    for (const Row& row : rows) {
      for (long c = 0; c < row.n; ++c) {
        const Complex* cell = row.data.data() + c * block;
        for (Eigen::Index i = 0; i < d; ++i) acc += cell[i * d + i].real();
      }
    }
    return acc;
  };

  auto emit = [&](std::size_t step) {
    HybridDensityGrid grid(out_q, out_p, model.dim(), initial.t() + static_cast<double>(step) * spec.dt,
                           HybridDensityGrid::Kind::Mass);
    for (long ip = 0; ip < np; ++ip) {
      const Row& row = rows[static_cast<std::size_t>(ip)];
      const std::size_t cp = pmap[static_cast<std::size_t>(ip)];
      if (row.n == 0 || cp == kNoBin) continue;
      // Accumulate runs of cells that share a coarse bin before depositing.
      CMatrix acc = CMatrix::Zero(d, d);
      std::size_t current = kNoBin;
      for (long c = 0; c < row.n; ++c) {
        const std::size_t cq = qmap[static_cast<std::size_t>(row.lo + c)];
        if (cq != current) {
          if (current != kNoBin) grid.deposit_mass(current, cp, acc);
          acc.setZero();
          current = cq;
        }
        if (cq != kNoBin) acc += Eigen::Map<const CMatrix>(row.data.data() + c * block, d, d);
      }
      if (current != kNoBin) grid.deposit_mass(current, cp, acc);
    }
    return grid;
  };

  std::vector<std::optional<HybridDensityGrid>> outputs(spec.output_times.size());
  auto next = schedule.begin();
  auto take = [&](std::size_t step) {
    while (next != schedule.end() && next->first == step) {
      outputs[next->second] = emit(step);
      ++next;
    }
  };
  take(0);

  const std::size_t n_branches = 1 + channels.size();
  std::vector<std::vector<Shift>> shifts(static_cast<std::size_t>(np));
  std::vector<Row> next_rows(static_cast<std::size_t>(np));
  std::vector<long> dest_lo(static_cast<std::size_t>(np));
  std::vector<long> dest_hi(static_cast<std::size_t>(np));
  std::vector<Complex> coef(channels.size());
  CMatrix k_eff(d, d);
  CMatrix k_rho(d, d);
  CMatrix tmp(d, d);
  CMatrix out(d, d);
  const double dt = spec.dt;
  const auto& hc = model.classical_hamiltonian();

  double trace_before = total_trace();
  for (std::size_t step = 0; step < n_steps; ++step) {
    // Pass 1: displacements of every occupied cell and destination row ranges.
    std::fill(dest_lo.begin(), dest_lo.end(), std::numeric_limits<long>::max());
    std::fill(dest_hi.begin(), dest_hi.end(), std::numeric_limits<long>::min());
    for (long ip = 0; ip < np; ++ip) {
      const Row& row = rows[static_cast<std::size_t>(ip)];
      auto& sh = shifts[static_cast<std::size_t>(ip)];
      sh.resize(static_cast<std::size_t>(row.n) * n_branches);
      for (long c = 0; c < row.n; ++c) {
        const PhasePoint z{qa.center(static_cast<std::size_t>(row.lo + c)), pa.center(static_cast<std::size_t>(ip))};
        Shift* s = sh.data() + static_cast<std::size_t>(c) * n_branches;
        s[0] = {cells(hc.d_dp(z) * dt, wq, "drift in q"), cells(-hc.d_dq(z) * dt, wp, "drift in p")};
        for (std::size_t a = 0; a < channels.size(); ++a) {
          const PhasePoint kick = channels[a].kick(z);
          s[1 + a] = {cells(kick.q, wq, "jump shift in q"), cells(kick.p, wp, "jump shift in p")};
        }
        for (std::size_t b = 0; b < n_branches; ++b) {
          const long tq = row.lo + c + s[b].dq;
          const long tp = ip + s[b].dp;
          if (tq < 0 || tq >= nq || tp < 0 || tp >= np) continue;
          dest_lo[static_cast<std::size_t>(tp)] = std::min(dest_lo[static_cast<std::size_t>(tp)], tq);
          dest_hi[static_cast<std::size_t>(tp)] = std::max(dest_hi[static_cast<std::size_t>(tp)], tq + 1);
        }
      }
    }
    for (long ip = 0; ip < np; ++ip) {
      Row& nr = next_rows[static_cast<std::size_t>(ip)];
      const auto i = static_cast<std::size_t>(ip);
      if (dest_lo[i] >= dest_hi[i]) {
        nr.lo = 0;
        nr.n = 0;
        nr.data.clear();
        continue;
      }
      nr.lo = dest_lo[i];
      nr.n = dest_hi[i] - dest_lo[i];
      nr.data.assign(static_cast<std::size_t>(nr.n * block), Complex(0.0, 0.0));
    }

    // Pass 2: apply the step.
    double lost = 0.0;
    auto deposit = [&](long tq, long tp, const CMatrix& m) {
      if (tq < 0 || tq >= nq || tp < 0 || tp >= np) {
        lost += m.trace().real();
        return;
      }
      Row& nr = next_rows[static_cast<std::size_t>(tp)];
      Eigen::Map<CMatrix>(nr.data.data() + (tq - nr.lo) * block, d, d) += m;
    };
    for (long ip = 0; ip < np; ++ip) {
      const Row& row = rows[static_cast<std::size_t>(ip)];
      const auto& sh = shifts[static_cast<std::size_t>(ip)];
      for (long c = 0; c < row.n; ++c) {
        const Eigen::Map<const CMatrix> rho(row.data.data() + c * block, d, d);
        const PhasePoint z{qa.center(static_cast<std::size_t>(row.lo + c)), pa.center(static_cast<std::size_t>(ip))};
        const Shift* s = sh.data() + static_cast<std::size_t>(c) * n_branches;
        k_eff.setZero();
        for (std::size_t a = 0; a < channels.size(); ++a) {
          k_eff += Complex(channels[a].h().value(z), -0.5 / channels[a].tau()) * weight_ops[a];
        }
        // rho is Hermitian, so rho K^dag = (K rho)^dag.
        k_rho.noalias() = k_eff * rho;
        out = rho;
        out.noalias() -= kI * dt * (k_rho - k_rho.adjoint());
        deposit(row.lo + c + s[0].dq, ip + s[0].dp, out);
        for (std::size_t a = 0; a < channels.size(); ++a) {
          tmp.noalias() = jump_ops[a] * rho;
          out.noalias() = tmp * jump_ops[a].adjoint();
          out *= dt / channels[a].tau();
          deposit(row.lo + c + s[1 + a].dq, ip + s[1 + a].dp, out);
        }
      }
    }
    std::swap(rows, next_rows);

    // Trim negligible cells from both ends of each row.
    for (Row& row : rows) {
      auto cell_trace = [&](long c) {
        double tr = 0.0;
        const Complex* cell = row.data.data() + c * block;
        for (Eigen::Index i = 0; i < d; ++i) tr += cell[i * d + i].real();
        return tr;
      };
      long first = 0;
      long last = row.n;
      while (first < last && std::abs(cell_trace(first)) <= spec.prune_threshold) lost += cell_trace(first++);
      while (last > first && std::abs(cell_trace(last - 1)) <= spec.prune_threshold) lost += cell_trace(--last);
      if (first == 0 && last == row.n) continue;
      if (first == last) {
        row.n = 0;
        row.data.clear();
        continue;
      }
      row.data.erase(row.data.begin() + last * block, row.data.end());
      row.data.erase(row.data.begin(), row.data.begin() + first * block);
      row.lo += first;
      row.n = last - first;
    }

    const double trace_after = total_trace();
    result.lost_mass += lost;
    result.max_step_trace_defect =
        std::max(result.max_step_trace_defect, std::abs(trace_after + lost - trace_before));
    trace_before = trace_after;
    if (std::abs(result.lost_mass) > spec.max_lost_mass) {
      throw InvalidInput("probability mass " + std::to_string(result.lost_mass) +
                         " left the integrator lattice; enlarge it");
    }
    take(step + 1);
  }

  for (auto& g : outputs) result.grids.push_back(std::move(*g));
  return result;
}

}  // namespace hybridcq
