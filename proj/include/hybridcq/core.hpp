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

// Hybrid classical-quantum state model.
//
// A hybrid pure state is a quantum state vector attached to a single point of
// classical phase space. Models couple the two through Lindblad channels: each
// channel carries a jump operator L and a scalar phase-space function h whose
// Hamiltonian flow over the channel time tau is the classical kick that
// accompanies the quantum jump.

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "hybridcq/linalg.hpp"

namespace hybridcq {

/// Position q [m] and momentum p [kg m/s].
struct PhasePoint {
  double q = 0.0;
  double p = 0.0;

  bool finite() const noexcept;
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Normalized state vector of dimension >= 2.
class QuantumState {
 public:
  /// Tolerance on | ||phi|| - 1 | accepted by the checked constructor.
  static constexpr double kNormTolerance = 1e-12;

  /// Takes ownership of already-normalized amplitudes; throws InvalidInput otherwise.
  explicit QuantumState(CVector amplitudes);

  /// Normalizes arbitrary non-zero amplitudes.
  static QuantumState normalized(CVector amplitudes);
  static QuantumState basis(std::size_t dim, std::size_t level);
  /// Equal-weight superposition of the listed basis levels.
  static QuantumState superposition(std::size_t dim, std::initializer_list<std::size_t> levels);
  static QuantumState superposition(std::size_t dim, const std::vector<std::size_t>& levels);

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
  double population(std::size_t level) const { return std::norm((*this)[level]); }
  /// |phi><phi|
  CMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  CVector amplitudes_;
};

struct HybridPureState {
  QuantumState phi;
  PhasePoint z;
  double t = 0.0;
};

/// Scalar phase-space function with analytic partial derivatives.
struct PhaseFunction {
  std::function<double(const PhasePoint&)> value;
  std::function<double(const PhasePoint&)> d_dq;
  std::function<double(const PhasePoint&)> d_dp;

  /// f(q, p) = a*q + b*p + c
  static PhaseFunction linear(double a, double b, double c = 0.0);
  /// Free-particle kinetic energy p^2 / 2m.
  static PhaseFunction kinetic(double mass);
  static PhaseFunction zero() { return linear(0.0, 0.0, 0.0); }
};

/// One jump channel: operator L, flow generator h and time scale tau (> 0).
class LindbladChannel {
 public:
  LindbladChannel(int label, SparseCMatrix jump_operator, PhaseFunction h, double tau);

  /// Index alpha used in reports (the models number channels from 1).
  int label() const noexcept { return label_; }
  const SparseCMatrix& jump_operator() const noexcept { return jump_; }
  /// L^dagger L, cached at construction.
  const SparseCMatrix& jump_weight_operator() const noexcept { return weight_; }
  const PhaseFunction& h() const noexcept { return h_; }
  double tau() const noexcept { return tau_; }

  /// Classical displacement of a jump at z: tau * (dh/dp, -dh/dq).
  PhasePoint kick(const PhasePoint& z) const;

 private:
  int label_;
  SparseCMatrix jump_;
  SparseCMatrix weight_;
  PhaseFunction h_;
  double tau_;
};

/// One hybrid master equation: Lindblad channels, classical Hamiltonian and mass.
class ModelSpec {
 public:
  ModelSpec(std::string name, std::size_t dim, std::vector<LindbladChannel> channels,
            PhaseFunction classical_hamiltonian, double mass);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<LindbladChannel>& channels() const noexcept { return channels_; }
  const PhaseFunction& classical_hamiltonian() const noexcept { return classical_; }
  double mass() const noexcept { return mass_; }
  double min_tau() const;

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<LindbladChannel> channels_;
  PhaseFunction classical_;
  double mass_;
};

/// <phi|A|phi> for Hermitian A. Throws InvalidInput on dimension mismatch or
/// when A is not Hermitian within 1e-12.
double expectation(const CMatrix& a, const QuantumState& phi);

/// H_I(z) = sum_alpha h_alpha(z) L_alpha^dagger L_alpha.
CMatrix interaction_hamiltonian(const ModelSpec& model, const PhasePoint& z);

namespace detail {
/// Real part of <v|A|v>; no checks, used on the hot path.
double sparse_expectation(const SparseCMatrix& a, const CVector& v);
}  // namespace detail

}  // namespace hybridcq
