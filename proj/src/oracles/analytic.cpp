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


#include "hybridcq/oracles/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "hybridcq/errors.hpp"

namespace hybridcq {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("time must be finite and >= 0");
}

}  // namespace

Complex qubit_diag_coherence(const CoherenceField& c0, double q, double p, double t, const QubitParams& params) {
  params.validate();
  check_time(t);
  if (!c0) throw InvalidInput("initial coherence field is empty");
  const double phase = -q * params.B * (params.omega0 - params.omega1) * t;
  return c0(q - p * t / params.mass, p) * std::exp(Complex(-t / params.tau, phase));
}

MomentPrediction qubit_diag_moments(double t, const QubitParams& params, double tau0) {
  params.validate();
  check_time(t);
  if (!(tau0 >= 0.0) || !std::isfinite(tau0)) throw InvalidInput("tau0 must be finite and >= 0");
  const double f = std::abs(params.B * params.omega0);
  const double m = params.mass;
  const double tau = params.tau;
  MomentPrediction out;
  out.t = t;
  out.mean_q = f * t * t / (2.0 * m);
  out.mean_p = f * t;
  out.var_p = f * f * tau * t;
  const double drift = f * t / m;
  out.var_q = drift * drift * ((tau0 + tau) * t + 5.0 * tau0 * tau) / 3.0;
  return out;
}

double qubit_diag_energy(double t, const QubitParams& params) {
  params.validate();
  check_time(t);
  const double f = params.B * params.omega0;
  return f * f * params.tau * t / (2.0 * params.mass);
}

double diffusion_coefficient(const QubitParams& params) {
  params.validate();
  const double f = params.B * params.omega0;
  return f * f * params.tau;
}

PositionStats nondiag_position_stats(double t, const QubitParams& params, double dt, int level) {
  params.validate();
  check_time(t);
  if (!(dt > 0.0) || !(dt < params.tau)) throw InvalidInput("dt must satisfy 0 < dt < tau");
  if (level != 0 && level != 1) throw InvalidInput("qubit level must be 0 or 1");
  const double te = level == 1 ? t : std::max(t - params.tau, 0.0);
  const double f = std::abs(params.B * params.omega0) / (2.0 * params.mass);
  const double w = params.tau - dt;
  return {f * w * te, f * std::pow(w, 1.5) * std::sqrt(te)};
}

double poisson_weight(unsigned k, double t, double tau) {
  check_time(t);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("tau must be positive and finite");
  const double lambda = t / tau;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

}  // namespace hybridcq
