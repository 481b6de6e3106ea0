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

#include "hybridcq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "hybridcq/errors.hpp"

namespace hybridcq {

BinAxis::BinAxis(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw InvalidInput("bin axis needs at least two edges");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) throw InvalidInput("bin edges must be finite");
    if (i > 0 && !(edges_[i] > edges_[i - 1])) throw InvalidInput("bin edges must be strictly increasing");
  }
}

BinAxis BinAxis::uniform(double lower, double upper, std::size_t bins) {
  if (bins == 0) throw InvalidInput("bin axis needs at least one bin");
  if (!(upper > lower)) throw InvalidInput("bin axis upper bound must exceed lower bound");
  std::vector<double> edges(bins + 1);
  const double width = (upper - lower) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = lower + width * static_cast<double>(i);
  edges.back() = upper;
  return BinAxis(std::move(edges));
}

BinAxis BinAxis::centered(double width, std::size_t bins) {
  if (bins % 2 == 0) throw InvalidInput("centered bin axis needs an odd bin count");
  if (!(width > 0.0)) throw InvalidInput("bin width must be positive");
  const double half = static_cast<double>(bins / 2) + 0.5;
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = width * (static_cast<double>(i) - half);
  return BinAxis(std::move(edges));
}

std::optional<std::size_t> BinAxis::locate(double x) const {
  if (!(x >= edges_.front()) || !(x < edges_.back())) return std::nullopt;
  // upper_bound puts a point sitting on an interior edge into the higher bin.
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

HybridDensityGrid::HybridDensityGrid(BinAxis q_axis, BinAxis p_axis, std::size_t dim, double t, Kind kind)
    : q_axis_(std::move(q_axis)), p_axis_(std::move(p_axis)), dim_(dim), t_(t), kind_(kind) {
  if (dim_ < 2) throw InvalidInput("grid dimension must be >= 2");
}

void HybridDensityGrid::deposit(const PhasePoint& z, const QuantumState& phi) { deposit(z, phi.amplitudes()); }

void HybridDensityGrid::deposit(const PhasePoint& z, const CVector& phi) {
  if (kind_ != Kind::Samples) throw InvalidInput("deposit of samples into a mass grid");
  if (static_cast<std::size_t>(phi.size()) != dim_) throw InvalidInput("deposit: state dimension mismatch");
  ++n_samples_;
  const auto iq = q_axis_.locate(z.q);
  const auto ip = p_axis_.locate(z.p);
  if (!iq || !ip) {
    ++n_outside_;
    return;
  }
  auto [it, inserted] = cells_.try_emplace(key(*iq, *ip));
  if (inserted) it->second = CMatrix::Zero(phi.size(), phi.size());
  it->second.noalias() += phi * phi.adjoint();
}

void HybridDensityGrid::deposit_mass(std::size_t iq, std::size_t ip, const CMatrix& mass) {
  if (kind_ != Kind::Mass) throw InvalidInput("deposit of mass into a sample grid");
  if (iq >= q_axis_.bins() || ip >= p_axis_.bins()) throw InvalidInput("deposit_mass: cell outside grid");
  if (static_cast<std::size_t>(mass.rows()) != dim_ || mass.rows() != mass.cols()) {
    throw InvalidInput("deposit_mass: matrix dimension mismatch");
  }
  auto [it, inserted] = cells_.try_emplace(key(iq, ip));
  if (inserted) {
    it->second = mass;
  } else {
    it->second += mass;
  }
}

void HybridDensityGrid::merge(const HybridDensityGrid& other) {
  if (!(q_axis_ == other.q_axis_) || !(p_axis_ == other.p_axis_) || dim_ != other.dim_ ||
      kind_ != other.kind_ || t_ != other.t_) {
    throw InvalidInput("merge: grids are not compatible");
  }
  for (const auto& [k, m] : other.cells_) {
    auto [it, inserted] = cells_.try_emplace(k);
    if (inserted) {
      it->second = m;
    } else {
      it->second += m;
    }
  }
  n_samples_ += other.n_samples_;
  n_outside_ += other.n_outside_;
}

double HybridDensityGrid::normalization() const {
  if (kind_ == Kind::Mass) return 1.0;
  return n_samples_ == 0 ? 1.0 : static_cast<double>(n_samples_);
}

double HybridDensityGrid::cell_area(std::size_t iq, std::size_t ip) const {
  return q_axis_.width(iq) * p_axis_.width(ip);
}

CMatrix HybridDensityGrid::mass(std::size_t iq, std::size_t ip) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  const auto it = cells_.find(key(iq, ip));
  if (it == cells_.end()) return CMatrix::Zero(d, d);
  return it->second / normalization();
}

CMatrix HybridDensityGrid::density(std::size_t iq, std::size_t ip) const {
  return mass(iq, ip) / cell_area(iq, ip);
}

double HybridDensityGrid::total_trace() const {
  double acc = 0.0;
  for (const auto& [k, m] : cells_) acc += m.trace().real();
  return acc / normalization();
}

HybridDensityGrid::CellCheck HybridDensityGrid::check_cells() const {
  CellCheck check;
  check.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& [k, raw] : cells_) {
    const CMatrix m = raw / normalization();
    check.max_hermiticity_defect = std::max(check.max_hermiticity_defect, hermiticity_defect(m));
    const CMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    check.min_eigenvalue = std::min(check.min_eigenvalue, solver.eigenvalues().minCoeff());
  }
  if (cells_.empty()) check.min_eigenvalue = 0.0;
  return check;
}

double l1_distance(const HybridDensityGrid& a, const HybridDensityGrid& b) {
  if (!(a.q_axis() == b.q_axis()) || !(a.p_axis() == b.p_axis()) || a.dim() != b.dim()) {
    throw InvalidInput("l1_distance: grids are not compatible");
  }
  std::vector<std::size_t> keys;
  for (const auto& [k, m] : a.raw_cells()) keys.push_back(k);
  for (const auto& [k, m] : b.raw_cells()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  double acc = 0.0;
  for (std::size_t k : keys) {
    const std::size_t iq = a.key_q(k);
    const std::size_t ip = a.key_p(k);
    const CMatrix diff = a.mass(iq, ip) - b.mass(iq, ip);
    const CMatrix herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    acc += solver.eigenvalues().cwiseAbs().sum();
  }
  return acc;
}

std::vector<std::size_t> bin_map(const BinAxis& fine, const BinAxis& coarse) {
  constexpr auto npos = kNoBin;
  const auto& fe = fine.edges();
  const auto& ce = coarse.edges();
  for (double edge : ce) {
    const auto it = std::lower_bound(fe.begin(), fe.end(), edge);
    bool aligned = false;
    const double tol = 1e-9 * (fe.back() - fe.front());
    if (it != fe.end() && std::abs(*it - edge) <= tol) aligned = true;
    if (it != fe.begin() && std::abs(*(it - 1) - edge) <= tol) aligned = true;
    if (!aligned) throw InvalidInput("rebin: coarse edge does not coincide with a fine edge");
  }
  std::vector<std::size_t> map(fine.bins(), npos);
  for (std::size_t i = 0; i < fine.bins(); ++i) {
    if (auto c = coarse.locate(fine.center(i))) map[i] = *c;
  }
  return map;
}

HybridDensityGrid rebin(const HybridDensityGrid& fine, const BinAxis& q_axis, const BinAxis& p_axis) {
  constexpr auto npos = kNoBin;
  const auto qmap = bin_map(fine.q_axis(), q_axis);
  const auto pmap = bin_map(fine.p_axis(), p_axis);
  HybridDensityGrid coarse(q_axis, p_axis, fine.dim(), fine.t(), HybridDensityGrid::Kind::Mass);
  const bool samples = fine.kind() == HybridDensityGrid::Kind::Samples;
  const double norm = samples && fine.n_samples() > 0 ? static_cast<double>(fine.n_samples()) : 1.0;
  for (const auto& [k, m] : fine.raw_cells()) {
    const std::size_t cq = qmap[fine.key_q(k)];
    const std::size_t cp = pmap[fine.key_p(k)];
    if (cq == npos || cp == npos) continue;
    coarse.deposit_mass(cq, cp, m / norm);
  }
  return coarse;
}

}  // namespace hybridcq
