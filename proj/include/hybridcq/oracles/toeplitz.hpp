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


// Coherence band of the oscillator model.
//
// In the Fourier variable x conjugate to momentum, the coherences
// u_{n1+k, n2+k} with k in (-N/2, N/2] obey du/dt = M u with M tridiagonal.
// Slot r = 1..N holds k = r - N/2. For large n1, n2 the band is close to a
// Toeplitz matrix with constant diagonals, whose eigen-system is known in
// closed form.

#pragma once

#include <vector>

#include "hybridcq/linalg.hpp"

namespace hybridcq {

/// Exact band generator, phase phi = B tau x:
///   M[r][r]   = -(n1 + n2 + 2k + 1) / tau
///   M[r][r+1] =  sqrt((n1 + k + 1)(n2 + k + 1)) e^{+i phi} / tau
///   M[r][r-1] =  sqrt((n1 + k)(n2 + k)) e^{-i phi} / tau
/// Couplings into slots with a negative Fock label are zero. N must be even.
CMatrix ho_tridiagonal_matrix(int n1, int n2, int N, double tau, double phi);

/// Constant-diagonal approximation: diagonal -(n1 + n2)/tau, off-diagonals
/// sqrt(n1 n2)/tau times e^{+i phi} (above) and e^{-i phi} (below).
CMatrix ho_toeplitz_matrix(int n1, int n2, int N, double tau, double phi);

struct ToeplitzSystem {
  int n1 = 0;
  int n2 = 0;
  int N = 0;
  double tau = 0.0;
  double phi = 0.0;
  /// lambda_m = -(n1 + n2)/tau + (2/tau) sqrt(n1 n2) cos(m pi / (N + 1)), m = 1..N.
  std::vector<Complex> eigenvalues;
  /// B(m-1, r-1) = sqrt(2/(N+1)) e^{-i r phi} sin(m r pi / (N + 1)); row m is
  /// the eigenvector of lambda_m.
  CMatrix B;

  /// Dominant decoherence rate (n1 + n2) / tau.
  double decoherence_rate() const { return (n1 + n2) / tau; }
  /// sum_m lambda_m v_m v_m^dagger with v_m the rows of B.
  CMatrix reconstruct() const;
};

ToeplitzSystem ho_toeplitz_eigen(int n1, int n2, int N, double tau, double phi);

/// Band coherences u_{n1-N/2+l, n2-N/2+l}(t), l = 1..N, at phi = 0, from the
/// Toeplitz eigen-system with u = 1/2 at the centre slot initially.
std::vector<Complex> ho_coherence_evolution(int n1, int n2, int N, double tau, double t);

/// Same initial condition propagated with the exact tridiagonal generator
/// (dense eigendecomposition).
std::vector<Complex> ho_band_evolution(int n1, int n2, int N, double tau, double t);

/// Index (0-based) of the slot holding u_{n1, n2}.
inline int ho_center_slot(int N) { return N / 2 - 1; }

}  // namespace hybridcq
