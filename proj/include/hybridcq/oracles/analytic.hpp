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


// Closed-form predictions for the qubit models and the Poisson jump counts.
//
// The engine follows the Hamiltonian-flow sign of the jump kicks, under which
// level 0 of the diagonal qubit drifts to negative momentum. The predictions
// here are magnitudes; compare them against absolute values of the measured
// means.

#pragma once

#include <functional>

#include "hybridcq/linalg.hpp"
#include "hybridcq/models.hpp"

namespace hybridcq {

struct MomentPrediction {
  double t = 0.0;
  double mean_q = 0.0;
  double mean_p = 0.0;
  double var_q = 0.0;
  double var_p = 0.0;
};

/// Initial coherence field c0(q, p).
using CoherenceField = std::function<Complex(double q, double p)>;

/// c0(q - p t / m, p) exp(-i q B (omega0 - omega1) t - t / tau).
Complex qubit_diag_coherence(const CoherenceField& c0, double q, double p, double t, const QubitParams& params);

/// Level-conditioned moments of the diagonal qubit starting from a point,
/// with tau0 the mean waiting time before the first collapse (0 when the
/// initial state is already an eigenstate).
///   mean_q = |B omega0| t^2 / 2m           mean_p = |B omega0| t
///   var_p  = (B omega0)^2 tau t
///   var_q  = (B omega0 t / m)^2 ((tau0 + tau) t + 5 tau0 tau) / 3
MomentPrediction qubit_diag_moments(double t, const QubitParams& params, double tau0);

/// Mean energy from delta(q) delta(p) |0><0|: (B omega0)^2 tau t / 2m.
double qubit_diag_energy(double t, const QubitParams& params);

/// Momentum diffusion constant (B omega0)^2 tau, equal to var_p(t) / t.
double diffusion_coefficient(const QubitParams& params);

struct PositionStats {
  double mean_q = 0.0;
  double sigma_q = 0.0;
};

/// Position statistics of the ladder-operator qubit started in |0> at the
/// origin. Level 1 is populated first:
///   mean_q  = |B omega0| (tau - dt) t / 2m
///   sigma_q = (|B omega0| / 2m) (tau - dt)^{3/2} sqrt(t)
/// Level 0 needs one extra jump, so its curves lag by tau: they are the
/// level-1 formulas evaluated at max(t - tau, 0).
PositionStats nondiag_position_stats(double t, const QubitParams& params, double dt, int level = 1);

/// (t/tau)^k exp(-t/tau) / k!, evaluated in log space.
double poisson_weight(unsigned k, double t, double tau);

}  // namespace hybridcq
