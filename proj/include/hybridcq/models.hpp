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


// The three worked systems: a qubit with projective or ladder Lindblad
// operators in a linear potential, and a truncated harmonic oscillator.

#pragma once

#include <cstddef>

#include "hybridcq/core.hpp"

namespace hybridcq {

struct QubitParams {
  double B = 1.0;       ///< coupling [J s / m]
  double omega0 = 1.0;  ///< [1/s]
  double omega1 = -1.0; ///< [1/s]
  double mass = 1.0;    ///< [kg]
  double tau = 1e-2;    ///< [s]

  void validate() const;
};

struct OscillatorParams {
  double B = 1.0;
  double tau = 0.1;
  double gamma_up = 1.0;
  double gamma_down = 1.0;
  std::size_t fock_dim = 64;
  double mass = 1.0;
  /// Only magnitude and sign are used: |omega| scales the rate, sign(omega) the kick.
  double omega0 = 1.0;
  double omega1 = -1.0;

  void validate() const;
};

/// L_1 = |0><0| with h = omega0 B q, L_2 = |1><1| with h = omega1 B q, H_C = p^2/2m.
ModelSpec qubit_diagonal(const QubitParams& params);

/// L_1 = |1><0| with h = omega0 B q, L_2 = |0><1| with h = omega1 B q, H_C = p^2/2m.
ModelSpec qubit_nondiagonal(const QubitParams& params);

/// L_1 = sqrt(gamma_down |omega0|) a with h = sign(omega0) B q (kick -B tau for omega0 > 0),
/// L_2 = sqrt(gamma_up |omega1|) a^dag with h = sign(omega1) B q (kick +B tau for omega1 < 0).
/// a^dag maps the top Fock level to zero.
ModelSpec harmonic_oscillator(const OscillatorParams& params);

/// Truncated ladder operators on fock_dim levels.
SparseCMatrix annihilation(std::size_t fock_dim);
SparseCMatrix creation(std::size_t fock_dim);

/// Population of the top two Fock levels above which a run is flagged as
/// contaminated by the truncation.
inline constexpr double kTruncationThreshold = 1e-3;

}  // namespace hybridcq
