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

#include "hybridcq/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hybridcq/errors.hpp"

namespace hybridcq {

bool PhasePoint::finite() const noexcept { return std::isfinite(q) && std::isfinite(p); }

namespace {

bool all_finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  }
  return true;
}

}  // namespace

QuantumState::QuantumState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) throw InvalidInput("quantum state needs dimension >= 2");
  if (!all_finite(amplitudes_)) throw InvalidInput("quantum state has non-finite amplitudes");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvalidInput("quantum state is not normalized (norm " + std::to_string(norm) + ")");
  }
}

QuantumState QuantumState::normalized(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidInput("cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return QuantumState(std::move(amplitudes));
}

QuantumState QuantumState::basis(std::size_t dim, std::size_t level) {
  if (level >= dim) throw InvalidInput("basis level outside the Hilbert space");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(level)) = 1.0;
  return QuantumState(std::move(v));
}

QuantumState QuantumState::superposition(std::size_t dim, std::initializer_list<std::size_t> levels) {
  return superposition(dim, std::vector<std::size_t>(levels));
}

QuantumState QuantumState::superposition(std::size_t dim, const std::vector<std::size_t>& levels) {
  if (levels.empty()) throw InvalidInput("superposition needs at least one level");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t level : levels) {
    if (level >= dim) throw InvalidInput("superposition level outside the Hilbert space");
    v(static_cast<Eigen::Index>(level)) += 1.0;
  }
  return normalized(std::move(v));
}

PhaseFunction PhaseFunction::linear(double a, double b, double c) {
  return PhaseFunction{
      [a, b, c](const PhasePoint& z) { return a * z.q + b * z.p + c; },
      [a](const PhasePoint&) { return a; },
      [b](const PhasePoint&) { return b; },
  };
}

PhaseFunction PhaseFunction::kinetic(double mass) {
  if (!(mass > 0.0)) throw InvalidInput("mass must be positive");
  return PhaseFunction{
      [mass](const PhasePoint& z) { return z.p * z.p / (2.0 * mass); },
      [](const PhasePoint&) { return 0.0; },
      [mass](const PhasePoint& z) { return z.p / mass; },
  };
}

LindbladChannel::LindbladChannel(int label, SparseCMatrix jump_operator, PhaseFunction h, double tau)
    : label_(label), jump_(std::move(jump_operator)), h_(std::move(h)), tau_(tau) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw InvalidInput("channel tau must be positive and finite");
  if (jump_.rows() != jump_.cols()) throw InvalidInput("jump operator must be square");
  if (!h_.value || !h_.d_dq || !h_.d_dp) throw InvalidInput("channel h needs value and both partials");
  for (int k = 0; k < jump_.outerSize(); ++k) {
    for (SparseCMatrix::InnerIterator it(jump_, k); it; ++it) {
      if (!std::isfinite(it.value().real()) || !std::isfinite(it.value().imag())) {
        throw InvalidInput("jump operator has non-finite entries");
      }
    }
  }
  jump_.makeCompressed();
  weight_ = SparseCMatrix(jump_.adjoint() * jump_);
  weight_.prune(Complex(0.0, 0.0));
  weight_.makeCompressed();
}

PhasePoint LindbladChannel::kick(const PhasePoint& z) const {
  return PhasePoint{tau_ * h_.d_dp(z), -tau_ * h_.d_dq(z)};
}

ModelSpec::ModelSpec(std::string name, std::size_t dim, std::vector<LindbladChannel> channels,
                     PhaseFunction classical_hamiltonian, double mass)
    : name_(std::move(name)),
      dim_(dim),
      channels_(std::move(channels)),
      classical_(std::move(classical_hamiltonian)),
      mass_(mass) {
  if (dim_ < 2) throw InvalidInput("model Hilbert dimension must be >= 2");
  if (!(mass_ > 0.0)) throw InvalidInput("model mass must be positive");
  if (!classical_.value || !classical_.d_dq || !classical_.d_dp) {
    throw InvalidInput("classical Hamiltonian needs value and both partials");
  }
  for (const auto& c : channels_) {
    if (static_cast<std::size_t>(c.jump_operator().rows()) != dim_) {
      throw InvalidInput("channel " + std::to_string(c.label()) + " has the wrong dimension");
    }
  }
}

double ModelSpec::min_tau() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : channels_) m = std::min(m, c.tau());
  return m;
}

double expectation(const CMatrix& a, const QuantumState& phi) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != phi.dim()) {
    throw InvalidInput("expectation: operator and state dimensions differ");
  }
  if (hermiticity_defect(a) > 1e-12) throw InvalidInput("expectation: operator is not Hermitian");
  const Complex value = phi.amplitudes().dot(a * phi.amplitudes());
  return value.real();
}

CMatrix interaction_hamiltonian(const ModelSpec& model, const PhasePoint& z) {
  if (!z.finite()) throw InvalidInput("interaction_hamiltonian: non-finite phase point");
  const auto d = static_cast<Eigen::Index>(model.dim());
  CMatrix h = CMatrix::Zero(d, d);
  for (const auto& c : model.channels()) {
    h += c.h().value(z) * CMatrix(c.jump_weight_operator());
  }
  return h;
}

namespace detail {

double sparse_expectation(const SparseCMatrix& a, const CVector& v) {
  double acc = 0.0;
  for (int r = 0; r < a.outerSize(); ++r) {
    Complex row(0.0, 0.0);
    for (SparseCMatrix::InnerIterator it(a, r); it; ++it) row += it.value() * v(it.col());
    acc += (std::conj(v(r)) * row).real();
  }
  return acc;
}

}  // namespace detail

}  // namespace hybridcq
