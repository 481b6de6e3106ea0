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


#include "hybridcq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hybridcq/errors.hpp"

namespace hybridcq {

void MomentAccumulator::add(double x, double w) {
  if (!std::isfinite(x) || !std::isfinite(w) || w < 0.0) throw InvalidInput("moment samples need finite x and w >= 0");
  if (n_ == 0) shift_ = x;
  ++n_;
  const double y = x - shift_;
  const double wy = w * y;
  sw_ += w;
  swx_ += wy;
  swx2_ += wy * y;
  const double w2 = w * w;
  const double y2 = y * y;
  s2_ += w2;
  s2x_ += w2 * y;
  s2x2_ += w2 * y2;
  s2x3_ += w2 * y2 * y;
  s2x4_ += w2 * y2 * y2;
}

Moments MomentAccumulator::result() const {
  if (!(sw_ > 0.0)) throw UndefinedMomentFault("no weight to condition on");
  Moments m;
  m.weight = sw_;
  const double my = swx_ / sw_;
  m.mean = shift_ + my;
  m.variance = std::max(0.0, swx2_ / sw_ - my * my);
  // sum w^2 (y - my)^2
  const double c2 = s2x2_ - 2.0 * my * s2x_ + my * my * s2_;
  m.mean_se = std::sqrt(std::max(0.0, c2)) / sw_;
  // sum w^2 ((y - my)^2 - v)^2 = sum w^2 (y - my)^4 - 2 v c2 + v^2 sum w^2
  const double my2 = my * my;
  const double c4 = s2x4_ - 4.0 * my * s2x3_ + 6.0 * my2 * s2x2_ - 4.0 * my2 * my * s2x_ + my2 * my2 * s2_;
  const double v = m.variance;
  m.variance_se = std::sqrt(std::max(0.0, c4 - 2.0 * v * c2 + v * v * s2_)) / sw_;
  return m;
}

Moments weighted_moments(const std::vector<double>& x, const std::vector<double>& w) {
  if (x.size() != w.size()) throw InvalidInput("weighted_moments: x and w differ in length");
  MomentAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], w[i]);
  return acc.result();
}

Moments sample_moments(const std::vector<HybridPureState>& states, std::optional<std::size_t> level, Axis axis) {
  MomentAccumulator acc;
  for (const auto& s : states) {
    if (level && *level >= s.phi.dim()) throw InvalidInput("level outside the Hilbert space");
    const double w = level ? s.phi.population(*level) : 1.0;
    acc.add(axis == Axis::Q ? s.z.q : s.z.p, w);
  }
  return acc.result();
}

Moments marginal_moments(const HybridDensityGrid& grid, std::optional<std::size_t> level, Axis axis) {
  if (level && *level >= grid.dim()) throw InvalidInput("level outside the Hilbert space");
  double sw = 0.0;
  double swx = 0.0;
  double swx2 = 0.0;
  for (const auto& [key, raw] : grid.raw_cells()) {
    (void)raw;
    const std::size_t iq = grid.key_q(key);
    const std::size_t ip = grid.key_p(key);
    const CMatrix m = grid.mass(iq, ip);
    const auto l = static_cast<Eigen::Index>(level.value_or(0));
    const double w = level ? m(l, l).real() : m.trace().real();
    const double x = axis == Axis::Q ? grid.q_axis().center(iq) : grid.p_axis().center(ip);
    sw += w;
    swx += w * x;
    swx2 += w * x * x;
  }
  if (!(sw > 0.0)) throw UndefinedMomentFault("grid has no mass in the requested population");
  Moments out;
  out.weight = sw;
  out.mean = swx / sw;
  out.variance = std::max(0.0, swx2 / sw - out.mean * out.mean);
  return out;
}

GaussianFit gaussian_fit(const std::vector<double>& samples) {
  if (samples.size() < 2) throw SizeFault("a Gaussian fit needs at least 2 samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(samples.size() - 1))};
}

void CoherenceAccumulator::add(const Complex& c, bool counted) {
  ++n_;
  if (counted) ++counted_;
  sum_ += c;
  sum_re2_ += c.real() * c.real();
  sum_im2_ += c.imag() * c.imag();
  sum_reim_ += c.real() * c.imag();
}

CoherenceEstimate CoherenceAccumulator::result() const {
  if (n_ == 0) throw UndefinedMomentFault("no trajectories at this snapshot");
  CoherenceEstimate est;
  const double n = static_cast<double>(n_);
  est.value = sum_ / n;
  est.count = counted_;
  // Error of |mean| from the spread of each sample projected on the mean's direction.
  const double mag = std::abs(est.value);
  const double cs = mag > 0.0 ? est.value.real() / mag : 1.0;
  const double sn = mag > 0.0 ? est.value.imag() / mag : 0.0;
  const double sum_r2 = cs * cs * sum_re2_ + 2.0 * cs * sn * sum_reim_ + sn * sn * sum_im2_;
  const double ss = std::max(0.0, sum_r2 - n * mag * mag);
  est.abs_se = n > 1.0 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return est;
}

namespace {

CoherenceEstimate coherence_impl(const std::vector<HybridPureState>& states, std::size_t n1, std::size_t n2,
                                 const std::function<bool(const HybridPureState&)>& include) {
  CoherenceAccumulator acc;
  for (const auto& s : states) {
    if (n1 >= s.phi.dim() || n2 >= s.phi.dim()) throw InvalidInput("coherence level outside the Hilbert space");
    if (include && !include(s)) {
      acc.add(Complex(0.0, 0.0), false);
    } else {
      acc.add(s.phi[n1] * std::conj(s.phi[n2]));
    }
  }
  return acc.result();
}

}  // namespace

CoherenceEstimate coherence_extract(const std::vector<HybridPureState>& states, std::size_t n1, std::size_t n2) {
  return coherence_impl(states, n1, n2, nullptr);
}

CoherenceEstimate coherence_extract_at_cell(const std::vector<HybridPureState>& states, std::size_t n1,
                                            std::size_t n2, const BinAxis& q_axis, const BinAxis& p_axis,
                                            std::size_t iq, std::size_t ip) {
  if (iq >= q_axis.bins() || ip >= p_axis.bins()) throw InvalidInput("cell outside the grid");
  auto est = coherence_impl(states, n1, n2, [&](const HybridPureState& s) {
    const auto cq = q_axis.locate(s.z.q);
    const auto cp = p_axis.locate(s.z.p);
    return cq && cp && *cq == iq && *cp == ip;
  });
  if (est.count == 0) throw UndefinedMomentFault("no trajectory in the requested cell");
  return est;
}

double energy_sample(const ModelSpec& model, const HybridPureState& state) {
  double e = model.classical_hamiltonian().value(state.z);
  for (const auto& c : model.channels()) {
    e += c.h().value(state.z) * detail::sparse_expectation(c.jump_weight_operator(), state.phi.amplitudes());
  }
  return e;
}

double energy_expectation(const HybridDensityGrid& grid, const ModelSpec& model) {
  if (grid.dim() != model.dim()) throw InvalidInput("grid and model dimensions differ");
  double e = 0.0;
  for (const auto& [key, raw] : grid.raw_cells()) {
    (void)raw;
    const std::size_t iq = grid.key_q(key);
    const std::size_t ip = grid.key_p(key);
    const PhasePoint z{grid.q_axis().center(iq), grid.p_axis().center(ip)};
    const CMatrix m = grid.mass(iq, ip);
    e += model.classical_hamiltonian().value(z) * m.trace().real();
    e += (interaction_hamiltonian(model, z) * m).trace().real();
  }
  return e;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("linear_fit: x and y differ in length");
  if (x.size() < 2) throw SizeFault("linear_fit needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

}  // namespace hybridcq
