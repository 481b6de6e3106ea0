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


#include "hybridcq/oracles/toeplitz.hpp"

#include <cmath>
#include <numbers>

#include "hybridcq/errors.hpp"

namespace hybridcq {

namespace {

void check_band(int n1, int n2, int N, double tau) {
  if (n1 < 0 || n2 < 0) throw InvalidInput("Fock labels must be >= 0");
  if (N < 1) throw InvalidInput("band size must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("tau must be positive and finite");
}

void check_even(int N) {
  if (N % 2 != 0) throw InvalidInput("band size must be even");
}

/// sqrt(a b) for Fock labels a, b; zero when either level does not exist.
double ladder(int a, int b) {
  if (a < 0 || b < 0) return 0.0;
  return std::sqrt(static_cast<double>(a) * static_cast<double>(b));
}

}  // namespace

CMatrix ho_tridiagonal_matrix(int n1, int n2, int N, double tau, double phi) {
  check_band(n1, n2, N, tau);
  check_even(N);
  const Complex up = std::polar(1.0, phi);
  CMatrix m = CMatrix::Zero(N, N);
  for (int r = 1; r <= N; ++r) {
    const int k = r - N / 2;
    m(r - 1, r - 1) = -static_cast<double>(n1 + n2 + 2 * k + 1) / tau;
    const bool exists = n1 + k >= 0 && n2 + k >= 0;
    if (r < N && exists) m(r - 1, r) = ladder(n1 + k + 1, n2 + k + 1) * up / tau;
    if (r > 1 && exists) m(r - 1, r - 2) = ladder(n1 + k, n2 + k) * std::conj(up) / tau;
  }
  return m;
}

CMatrix ho_toeplitz_matrix(int n1, int n2, int N, double tau, double phi) {
  check_band(n1, n2, N, tau);
  const Complex off = ladder(n1, n2) * std::polar(1.0, phi) / tau;
  CMatrix m = CMatrix::Zero(N, N);
  for (int r = 0; r < N; ++r) {
    m(r, r) = -static_cast<double>(n1 + n2) / tau;
    if (r + 1 < N) {
      m(r, r + 1) = off;
      m(r + 1, r) = std::conj(off);
    }
  }
  return m;
}

CMatrix ToeplitzSystem::reconstruct() const {
  CMatrix out = CMatrix::Zero(N, N);
  for (int m = 0; m < N; ++m) {
    const CVector v = B.row(m).transpose();
    out += eigenvalues[static_cast<std::size_t>(m)] * v * v.adjoint();
  }
  return out;
}

ToeplitzSystem ho_toeplitz_eigen(int n1, int n2, int N, double tau, double phi) {
  check_band(n1, n2, N, tau);
  ToeplitzSystem sys;
  sys.n1 = n1;
  sys.n2 = n2;
  sys.N = N;
  sys.tau = tau;
  sys.phi = phi;
  const double pi = std::numbers::pi;
  const double scale = std::sqrt(2.0 / (N + 1));
  sys.B = CMatrix::Zero(N, N);
  for (int m = 1; m <= N; ++m) {
    const double angle = m * pi / (N + 1);
    sys.eigenvalues.emplace_back(-static_cast<double>(n1 + n2) / tau + 2.0 * ladder(n1, n2) * std::cos(angle) / tau,
                                 0.0);
    for (int r = 1; r <= N; ++r) {
      sys.B(m - 1, r - 1) = scale * std::polar(1.0, -r * phi) * std::sin(r * angle);
    }
  }
  return sys;
}

std::vector<Complex> ho_coherence_evolution(int n1, int n2, int N, double tau, double t) {
  check_even(N);
  if (!(t >= 0.0)) throw InvalidInput("time must be >= 0");
  const ToeplitzSystem sys = ho_toeplitz_eigen(n1, n2, N, tau, 0.0);
  CVector u0 = CVector::Zero(N);
  u0(ho_center_slot(N)) = 0.5;
  CVector u = CVector::Zero(N);
  for (int m = 0; m < N; ++m) {
    const CVector v = sys.B.row(m).transpose();
    u += std::exp(sys.eigenvalues[static_cast<std::size_t>(m)] * t) * v * v.dot(u0);
  }
  return {u.data(), u.data() + u.size()};
}

std::vector<Complex> ho_band_evolution(int n1, int n2, int N, double tau, double t) {
  if (!(t >= 0.0)) throw InvalidInput("time must be >= 0");
  // At phi = 0 the band generator is real symmetric.
  const Eigen::MatrixXd m = ho_tridiagonal_matrix(n1, n2, N, tau, 0.0).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(N);
  u0(ho_center_slot(N)) = 0.5;
  const Eigen::VectorXd decay = (solver.eigenvalues() * t).array().exp().matrix();
  const Eigen::VectorXd u = solver.eigenvectors() * decay.asDiagonal() * solver.eigenvectors().transpose() * u0;
  std::vector<Complex> out;
  for (int i = 0; i < N; ++i) out.emplace_back(u(i), 0.0);
  return out;
}

}  // namespace hybridcq
