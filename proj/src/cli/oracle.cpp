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


#include <cmath>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "common.hpp"
#include "hybridcq/cli/commands.hpp"
#include "hybridcq/errors.hpp"
#include "hybridcq/oracles/analytic.hpp"
#include "hybridcq/oracles/history.hpp"
#include "hybridcq/oracles/toeplitz.hpp"

namespace hybridcq::cli {

namespace {

using detail::CsvWriter;

struct OracleOutput {
  std::string file;
  std::string formula;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::vector<double> times(Config& cfg) {
  const auto t = cfg.numbers("oracle", "times_seconds");
  if (t.empty()) cfg.fail("oracle", "times_seconds", "needs at least one time");
  for (double x : t) {
    if (x < 0.0) cfg.fail("oracle", "times_seconds", "times must be >= 0");
  }
  return t;
}

int int_field(Config& cfg, const std::string& key, std::int64_t lo, std::int64_t hi) {
  const auto v = cfg.integer("oracle", key);
  if (v < lo || v > hi) cfg.fail("oracle", key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

OracleOutput run_oracle(Config& cfg) {
  const std::string name = cfg.string("oracle", "name");
  auto f = format_double;
  OracleOutput out;

  if (name == "qubit-moments") {
    const QubitParams params = detail::qubit_params(cfg);
    const double tau0 = cfg.number("oracle", "tau0_seconds", 0.0);
    const auto levels = cfg.numbers("oracle", "levels", std::vector<double>{0.0, 1.0});
    for (double l : levels) {
      if (l != 0.0 && l != 1.0) cfg.fail("oracle", "levels", "qubit levels are 0 and 1");
    }
    if (tau0 < 0.0) cfg.fail("oracle", "tau0_seconds", "must be >= 0");
    out.file = "moments.csv";
    out.formula =
        "diagonal qubit: mean_q = |B omega0| t^2/(2m), mean_p = |B omega0| t, var_p = (B omega0)^2 tau t, "
        "var_q = (B omega0 t/m)^2 ((tau0 + tau) t + 5 tau0 tau)/3";
    out.columns = {"t", "level", "mean_q", "mean_p", "var_q", "var_p"};
    for (double t : times(cfg)) {
      for (double l : levels) {
        // Level 1 feels omega1 in place of omega0.
        QubitParams lp = params;
        if (l == 1.0) lp.omega0 = params.omega1;
        const auto m = qubit_diag_moments(t, lp, tau0);
        out.rows.push_back({f(t), std::to_string(static_cast<int>(l)), f(m.mean_q), f(m.mean_p), f(m.var_q), f(m.var_p)});
      }
    }
  } else if (name == "qubit-energy") {
    const QubitParams params = detail::qubit_params(cfg);
    out.file = "energy.csv";
    out.formula = "diagonal qubit from |0><0| at the origin: <H>(t) = (B omega0)^2 tau t/(2m)";
    out.columns = {"t", "energy"};
    for (double t : times(cfg)) out.rows.push_back({f(t), f(qubit_diag_energy(t, params))});
  } else if (name == "qubit-coherence") {
    const QubitParams params = detail::qubit_params(cfg);
    const HybridPureState init = initial_from_config(cfg, 2);
    const Complex c0 = init.phi[0] * std::conj(init.phi[1]);
    out.file = "coherence.csv";
    out.formula =
        "diagonal qubit, point initial state: traced coherence c0 exp(-i q B (omega0 - omega1) t - t/tau) at q = q0";
    out.columns = {"t", "n1", "n2", "re", "im", "abs"};
    const double q0 = init.z.q;
    const double p0 = init.z.p;
    for (double t : times(cfg)) {
      // The point moves with the free drift, so evaluate the field along it.
      const double q = q0 + p0 * t / params.mass;
      const Complex c = qubit_diag_coherence([&](double, double) { return c0; }, q, p0, t, params);
      out.rows.push_back({f(t), "0", "1", f(c.real()), f(c.imag()), f(std::abs(c))});
    }
  } else if (name == "ho-coherence") {
    const double tau = cfg.number("model", "tau_seconds");
    if (!(tau > 0.0)) cfg.fail("model", "tau_seconds", "must be positive");
    const int n1 = int_field(cfg, "n1", 0, 1000000);
    const int n2 = int_field(cfg, "n2", 0, 1000000);
    const int band = int_field(cfg, "band_size", 2, 10000);
    if (band % 2 != 0) cfg.fail("oracle", "band_size", "must be even");
    out.file = "coherence.csv";
    out.formula =
        "oscillator coherence band from the Toeplitz eigen-system: u(t) = sum_m exp(lambda_m t) v_m v_m^dag u(0), "
        "lambda_m = -(n1+n2)/tau + (2/tau) sqrt(n1 n2) cos(m pi/(N+1)), u(0) = 1/2 at (n1, n2)";
    out.columns = {"t", "n1", "n2", "re", "im", "abs"};
    for (double t : times(cfg)) {
      const auto u = ho_coherence_evolution(n1, n2, band, tau, t);
      for (int l = 1; l <= band; ++l) {
        const int a = n1 - band / 2 + l;
        const int b = n2 - band / 2 + l;
        if (a < 0 || b < 0) continue;
        const Complex c = u[static_cast<std::size_t>(l - 1)];
        out.rows.push_back({f(t), std::to_string(a), std::to_string(b), f(c.real()), f(c.imag()), f(std::abs(c))});
      }
    }
  } else if (name == "nondiag-position") {
    const QubitParams params = detail::qubit_params(cfg);
    const double dt = cfg.number("engine", "dt_seconds");
    if (!(dt > 0.0) || !(dt < params.tau)) cfg.fail("engine", "dt_seconds", "must satisfy 0 < dt < tau");
    out.file = "moments.csv";
    out.formula =
        "ladder qubit from |0>: level 1 mean_q = |B omega0| (tau - dt) t/(2m), sigma_q = (|B omega0|/2m) (tau - "
        "dt)^(3/2) sqrt(t); level 0 lags by tau; var_q = sigma_q^2";
    out.columns = {"t", "level", "mean_q", "var_q"};
    for (double t : times(cfg)) {
      for (int level : {0, 1}) {
        const auto s = nondiag_position_stats(t, params, dt, level);
        out.rows.push_back({f(t), std::to_string(level), f(s.mean_q), f(s.sigma_q * s.sigma_q)});
      }
    }
  } else if (name == "diffusion") {
    const QubitParams params = detail::qubit_params(cfg);
    out.file = "diffusion.csv";
    out.formula = "momentum diffusion constant D = (B omega0)^2 tau";
    out.columns = {"D"};
    out.rows.push_back({f(diffusion_coefficient(params))});
  } else if (name == "history-stats") {
    const int k = int_field(cfg, "k", 0, 1000000);
    const int n = int_field(cfg, "n", 0, 1000000);
    const std::string mode = cfg.string("oracle", "mode", "closed_form");
    HistoryMode m = HistoryMode::ClosedForm;
    if (mode == "enumerate") {
      m = HistoryMode::Enumerate;
      if (k + n > static_cast<int>(kMaxHistoryLength)) {
        cfg.fail("oracle", "mode", "enumeration supports n + k <= " + std::to_string(kMaxHistoryLength));
      }
    } else if (mode != "closed_form") {
      cfg.fail("oracle", "mode", "expected \"closed_form\" or \"enumerate\"");
    }
    const auto s = history_position_stats(static_cast<unsigned>(k), static_cast<unsigned>(n), m);
    out.file = "history.csv";
    out.formula =
        "final position q = n k + n(n-1)/2 - sum_l l x_l over histories with n momentum jumps; closed form mean n k/2, "
        "variance n k (N-1)(2N-1)/(6N), N = n + k";
    out.columns = {"k", "n", "mode", "mean", "variance"};
    out.rows.push_back({std::to_string(k), std::to_string(n), mode, f(s.mean), f(s.variance)});
  } else if (name == "ho-toeplitz") {
    const double tau = cfg.number("model", "tau_seconds");
    if (!(tau > 0.0)) cfg.fail("model", "tau_seconds", "must be positive");
    const int n1 = int_field(cfg, "n1", 0, 100000000);
    const int n2 = int_field(cfg, "n2", 0, 100000000);
    const int band = int_field(cfg, "band_size", 1, 10000);
    const double phi = cfg.number("oracle", "phi", 0.0);
    const auto sys = ho_toeplitz_eigen(n1, n2, band, tau, phi);
    out.file = "toeplitz.csv";
    out.formula = "lambda_m = -(n1+n2)/tau + (2/tau) sqrt(n1 n2) cos(m pi/(N+1)), m = 1..N";
    out.columns = {"m", "lambda_re", "lambda_im"};
    for (int m = 0; m < band; ++m) {
      const Complex l = sys.eigenvalues[static_cast<std::size_t>(m)];
      out.rows.push_back({std::to_string(m + 1), f(l.real()), f(l.imag())});
    }
  } else if (name == "poisson") {
    const double tau = cfg.number("model", "tau_seconds");
    if (!(tau > 0.0)) cfg.fail("model", "tau_seconds", "must be positive");
    const double t = cfg.number("oracle", "t_seconds");
    if (t < 0.0) cfg.fail("oracle", "t_seconds", "must be >= 0");
    const int k_max = int_field(cfg, "k_max", 0, 100000);
    out.file = "poisson.csv";
    out.formula = "jump-count weights P(k) = (t/tau)^k exp(-t/tau)/k!";
    out.columns = {"k", "weight"};
    for (int k = 0; k <= k_max; ++k) out.rows.push_back({std::to_string(k), f(poisson_weight(k, t, tau))});
  } else {
    cfg.fail("oracle", "name",
             "unknown oracle '" + name +
                 "' (expected qubit-moments, qubit-energy, qubit-coherence, ho-coherence, nondiag-position, diffusion, "
                 "history-stats, ho-toeplitz or poisson)");
  }
  return out;
}

}  // namespace

int cmd_oracle(const CommandOptions& options, std::ostream& log) {
  Config cfg;
  OracleOutput result;
  std::filesystem::path dir;
  try {
    cfg = Config::load(options.config_path);
    // Model sections are shared with simulation configs; only the oracle's inputs are read.
    result = run_oracle(cfg);
    dir = options.out_dir.value_or(cfg.string("outputs", "directory", "oracle"));
    cfg.omit_resolved("outputs", "directory");
    detail::ensure_directory(dir);
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  try {
    const auto header = detail::header_block({"hybridcq oracle", "formula: " + result.formula}, cfg);
    CsvWriter w(dir / result.file, header, result.columns);
    for (const auto& row : result.rows) w.row(row);
    w.close();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  log << "wrote " << (dir / result.file).string() << '\n';
  return kExitOk;
}

}  // namespace hybridcq::cli
