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


// Brute-force integrator of the hybrid master equation on a phase-space lattice.
//
// Each step of length dt maps the cell matrix rho at z to
//   rho - i dt (K rho - rho K^dag)         at z + dt (dH_C/dp, -dH_C/dq)
//   (dt / tau_a) L_a rho L_a^dag           at z + tau_a (dh_a/dp, -dh_a/dq)
// with K = H_I(z) - (i/2) sum_a L_a^dag L_a / tau_a. The lattice must be
// commensurate with every displacement, so transport is an exact re-indexing
// of cells and there is no numerical diffusion. The map preserves the trace
// exactly and matches, step for step, the ensemble average of the unravelling.

#pragma once

#include <optional>
#include <vector>

#include "hybridcq/core.hpp"
#include "hybridcq/grid.hpp"

namespace hybridcq {

struct MasterIntegratorSpec {
  double total_time = 0.0;
  double dt = 0.0;
  /// Elapsed times at which the density is reported; multiples of dt.
  std::vector<double> output_times;
  /// Optional coarser reporting axes whose edges lie on the lattice edges.
  std::optional<BinAxis> output_q_axis;
  std::optional<BinAxis> output_p_axis;
  /// Cells at the edge of a row whose trace falls below this are dropped.
  double prune_threshold = 1e-18;
  /// Mass allowed to leave the lattice (or be pruned) before the run is rejected.
  double max_lost_mass = 1e-8;
};

struct MasterIntegratorResult {
  /// Mass grids, one per output time.
  std::vector<HybridDensityGrid> grids;
  double lost_mass = 0.0;
  /// Largest |trace after + lost in step - trace before| over all steps.
  double max_step_trace_defect = 0.0;
  std::size_t steps = 0;
};

/// `initial` defines the lattice through its (uniform) axes and holds the
/// initial probability mass per cell. Throws InvalidInput for non-uniform or
/// non-commensurate lattices and when more than max_lost_mass leaves it.
MasterIntegratorResult grid_master_integrator(const ModelSpec& model, const HybridDensityGrid& initial,
                                              const MasterIntegratorSpec& spec);

}  // namespace hybridcq
