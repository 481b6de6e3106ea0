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


#include "hybridcq/models.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hybridcq/errors.hpp"

namespace hybridcq {

namespace {

SparseCMatrix outer(std::size_t dim, std::size_t row, std::size_t col, double value = 1.0) {
  SparseCMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.insert(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
  m.makeCompressed();
  return m;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be positive and finite");
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

}  // namespace

void QubitParams::validate() const {
  check_finite(B, "B");
  check_finite(omega0, "omega0");
  check_finite(omega1, "omega1");
  check_positive(mass, "mass");
  check_positive(tau, "tau");
}

void OscillatorParams::validate() const {
  check_finite(B, "B");
  check_positive(tau, "tau");
  check_positive(mass, "mass");
  check_finite(omega0, "omega0");
  check_finite(omega1, "omega1");
  if (!(gamma_up >= 0.0) || !(gamma_down >= 0.0) || !std::isfinite(gamma_up) || !std::isfinite(gamma_down)) {
    throw InvalidInput("gamma_up and gamma_down must be >= 0");
  }
  if (fock_dim < 2) throw InvalidInput("fock_dim must be >= 2");
}

ModelSpec qubit_diagonal(const QubitParams& params) {
  params.validate();
  const double b = params.B;
  std::vector<LindbladChannel> channels;
  channels.emplace_back(1, outer(2, 0, 0), PhaseFunction::linear(params.omega0 * b, 0.0), params.tau);
  channels.emplace_back(2, outer(2, 1, 1), PhaseFunction::linear(params.omega1 * b, 0.0), params.tau);
  return ModelSpec("qubit-diag", 2, std::move(channels), PhaseFunction::kinetic(params.mass), params.mass);
}

ModelSpec qubit_nondiagonal(const QubitParams& params) {
  params.validate();
  const double b = params.B;
  std::vector<LindbladChannel> channels;
  channels.emplace_back(1, outer(2, 1, 0), PhaseFunction::linear(params.omega0 * b, 0.0), params.tau);
  channels.emplace_back(2, outer(2, 0, 1), PhaseFunction::linear(params.omega1 * b, 0.0), params.tau);
  return ModelSpec("qubit-nondiag", 2, std::move(channels), PhaseFunction::kinetic(params.mass), params.mass);
}

SparseCMatrix annihilation(std::size_t fock_dim) {
  if (fock_dim < 2) throw InvalidInput("fock_dim must be >= 2");
  const auto d = static_cast<Eigen::Index>(fock_dim);
  SparseCMatrix a(d, d);
  a.reserve(Eigen::VectorXi::Constant(d, 1));
  for (Eigen::Index n = 1; n < d; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  a.makeCompressed();
  return a;
}

SparseCMatrix creation(std::size_t fock_dim) {
  return SparseCMatrix(annihilation(fock_dim).adjoint());
}

ModelSpec harmonic_oscillator(const OscillatorParams& params) {
  params.validate();
  const std::size_t d = params.fock_dim;
  const double b = params.B;
  std::vector<LindbladChannel> channels;
  channels.emplace_back(1, SparseCMatrix(std::sqrt(params.gamma_down * std::abs(params.omega0)) * annihilation(d)),
                        PhaseFunction::linear(sign(params.omega0) * b, 0.0), params.tau);
  channels.emplace_back(2, SparseCMatrix(std::sqrt(params.gamma_up * std::abs(params.omega1)) * creation(d)),
                        PhaseFunction::linear(sign(params.omega1) * b, 0.0), params.tau);
  return ModelSpec("oscillator", d, std::move(channels), PhaseFunction::kinetic(params.mass), params.mass);
}

}  // namespace hybridcq
