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


// Estimators over trajectory ensembles and density grids.
//
// Level-conditioned moments weight each trajectory by the population of the
// level, w = |<l|phi>|^2, so that they describe the marginal of u_l. Standard
// errors use the delta method for ratio estimators over independent
// trajectories.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hybridcq/core.hpp"
#include "hybridcq/grid.hpp"

namespace hybridcq {

enum class Axis { Q, P };

struct Moments {
  double weight = 0.0;  ///< sum of weights
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

/// Streaming weighted moments. Sums are kept about the first sample to limit
/// cancellation.
class MomentAccumulator {
 public:
  void add(double x, double w = 1.0);
  std::size_t count() const noexcept { return n_; }
  double weight() const noexcept { return sw_; }
  /// Throws UndefinedMomentFault when the total weight is not positive.
  Moments result() const;

 private:
  std::size_t n_ = 0;
  double shift_ = 0.0;
  double sw_ = 0.0, swx_ = 0.0, swx2_ = 0.0;
  double s2_ = 0.0, s2x_ = 0.0, s2x2_ = 0.0, s2x3_ = 0.0, s2x4_ = 0.0;
};

Moments weighted_moments(const std::vector<double>& x, const std::vector<double>& w);

/// Sample moments along `axis`, weighted by the population of `level` (or 1
/// when no level is given).
Moments sample_moments(const std::vector<HybridPureState>& states, std::optional<std::size_t> level, Axis axis);

/// Moments of the level-conditioned (or trace) marginal of a grid using bin
/// centres. Standard errors are not available from a grid and are left at 0.
Moments marginal_moments(const HybridDensityGrid& grid, std::optional<std::size_t> level, Axis axis);

struct GaussianFit {
  double mu = 0.0;
  double sigma = 0.0;
};

/// Moment-matched normal: sample mean and unbiased standard deviation.
GaussianFit gaussian_fit(const std::vector<double>& samples);

struct CoherenceEstimate {
  Complex value{0.0, 0.0};
  /// Standard error of |value|.
  double abs_se = 0.0;
  /// Trajectories that contributed (all of them when traced).
  std::size_t count = 0;
};

/// Streaming form of the coherence estimators: add one value per trajectory
/// (zero for trajectories excluded by a cell condition).
class CoherenceAccumulator {
 public:
  void add(const Complex& c, bool counted = true);
  CoherenceEstimate result() const;

 private:
  std::size_t n_ = 0;
  std::size_t counted_ = 0;
  Complex sum_{0.0, 0.0};
  double sum_re2_ = 0.0;
  double sum_im2_ = 0.0;
  double sum_reim_ = 0.0;
};

/// (1/n) sum over trajectories of <n1|phi><phi|n2>.
CoherenceEstimate coherence_extract(const std::vector<HybridPureState>& states, std::size_t n1, std::size_t n2);

/// Same sum restricted to trajectories in cell (iq, ip), still divided by the
/// total trajectory count. Throws UndefinedMomentFault for an empty cell.
CoherenceEstimate coherence_extract_at_cell(const std::vector<HybridPureState>& states, std::size_t n1,
                                            std::size_t n2, const BinAxis& q_axis, const BinAxis& p_axis,
                                            std::size_t iq, std::size_t ip);

/// H_C(z) + <phi|H_I(z)|phi> for one trajectory.
double energy_sample(const ModelSpec& model, const HybridPureState& state);

/// sum over cells of tr[(H_C + H_I)(centre) * mass].
double energy_expectation(const HybridDensityGrid& grid, const ModelSpec& model);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares of y on x; slope_se from the residuals (0 for two points).
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hybridcq
