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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hybridcq/core.hpp"

namespace hybridcq {

/// Strictly increasing bin boundaries. Bins are half-open [lower, upper): a
/// point exactly on an interior edge belongs to the higher-index bin, and the
/// last edge is outside the axis.
class BinAxis {
 public:
  explicit BinAxis(std::vector<double> edges);
  static BinAxis uniform(double lower, double upper, std::size_t bins);
  /// `bins` bins of width `width` whose centers are width * (i - bins/2), i.e.
  /// symmetric about zero with zero at a bin center. Requires odd `bins`.
  static BinAxis centered(double width, std::size_t bins);

  std::size_t bins() const noexcept { return edges_.size() - 1; }
  const std::vector<double>& edges() const noexcept { return edges_; }
  double lower(std::size_t i) const { return edges_[i]; }
  double upper(std::size_t i) const { return edges_[i + 1]; }
  double center(std::size_t i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
  double width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }
  std::optional<std::size_t> locate(double x) const;

  friend bool operator==(const BinAxis&, const BinAxis&) = default;

 private:
  std::vector<double> edges_;
};

/// Estimate of the hybrid density on a (q, p) grid. Each occupied cell keeps
/// the running sum of deposited d x d matrices; the density of a cell is that
/// sum divided by the normalization and the cell area.
///
/// Sample grids (Monte Carlo) are normalized by their sample count, including
/// samples that fell outside the axes. Mass grids (deterministic oracles) hold
/// probability mass per cell directly.
class HybridDensityGrid {
 public:
  enum class Kind { Samples, Mass };

  HybridDensityGrid(BinAxis q_axis, BinAxis p_axis, std::size_t dim, double t, Kind kind = Kind::Samples);

  const BinAxis& q_axis() const noexcept { return q_axis_; }
  const BinAxis& p_axis() const noexcept { return p_axis_; }
  std::size_t dim() const noexcept { return dim_; }
  double t() const noexcept { return t_; }
  Kind kind() const noexcept { return kind_; }
  std::uint64_t n_samples() const noexcept { return n_samples_; }
  std::uint64_t n_outside() const noexcept { return n_outside_; }

  /// Adds |phi><phi| to the cell containing z (Samples grids only).
  void deposit(const PhasePoint& z, const QuantumState& phi);
  void deposit(const PhasePoint& z, const CVector& phi);
  /// Adds probability mass to a cell (Mass grids only).
  void deposit_mass(std::size_t iq, std::size_t ip, const CMatrix& mass);
  /// Cell-wise sum with sample-count addition. Axes, dim, time and kind must match.
  void merge(const HybridDensityGrid& other);

  double cell_area(std::size_t iq, std::size_t ip) const;
  /// Probability mass in the cell (density times area).
  CMatrix mass(std::size_t iq, std::size_t ip) const;
  /// Density matrix per unit phase-space area.
  CMatrix density(std::size_t iq, std::size_t ip) const;
  /// Sum over cells of trace times cell area.
  double total_trace() const;

  /// Occupied cells keyed by iq * p_bins + ip; values are raw deposited sums.
  const std::map<std::size_t, CMatrix>& raw_cells() const noexcept { return cells_; }
  std::size_t key(std::size_t iq, std::size_t ip) const { return iq * p_axis_.bins() + ip; }
  std::size_t key_q(std::size_t key) const { return key / p_axis_.bins(); }
  std::size_t key_p(std::size_t key) const { return key % p_axis_.bins(); }

  /// Largest Hermiticity defect and smallest eigenvalue over cell masses.
  struct CellCheck {
    double max_hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;
  };
  CellCheck check_cells() const;

 private:
  double normalization() const;

  BinAxis q_axis_;
  BinAxis p_axis_;
  std::size_t dim_;
  double t_;
  Kind kind_;
  std::uint64_t n_samples_ = 0;
  std::uint64_t n_outside_ = 0;
  std::map<std::size_t, CMatrix> cells_;
};

/// Sum over cells of the trace norm of the mass difference. Both grids must
/// share axes and dimension.
double l1_distance(const HybridDensityGrid& a, const HybridDensityGrid& b);

inline constexpr std::size_t kNoBin = static_cast<std::size_t>(-1);

/// For each bin of `fine`, the bin of `coarse` containing it, or kNoBin when
/// outside. Every coarse edge must coincide with a fine edge.
std::vector<std::size_t> bin_map(const BinAxis& fine, const BinAxis& coarse);

/// Re-bins onto coarser axes whose edges are a subset of the fine edges.
HybridDensityGrid rebin(const HybridDensityGrid& fine, const BinAxis& q_axis, const BinAxis& p_axis);

}  // namespace hybridcq
