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


#include "common.hpp"

#include <cstdlib>

#include "hybridcq/cli/commands.hpp"
#include "hybridcq/errors.hpp"

namespace hybridcq::cli {

namespace detail {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), n_columns_(columns.size()) {
  if (!out_) throw Error("cannot write '" + path.string() + "'");
  for (const auto& line : header) out_ << "# " << line << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != n_columns_) throw Error("internal: CSV row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error("failed writing '" + path_.string() + "'");
}

QubitParams qubit_params(Config& cfg) {
  QubitParams p;
  p.tau = cfg.number("model", "tau_seconds");
  p.B = cfg.number("model", "B_joule_second_per_meter", 1.0);
  p.omega0 = cfg.number("model", "omega0_per_second", 1.0);
  p.omega1 = cfg.number("model", "omega1_per_second", -1.0);
  p.mass = cfg.number("model", "mass_kg", 1.0);
  if (!(p.tau > 0.0)) cfg.fail("model", "tau_seconds", "must be positive");
  if (!(p.mass > 0.0)) cfg.fail("model", "mass_kg", "must be positive");
  return p;
}

OscillatorParams oscillator_params(Config& cfg) {
  OscillatorParams p;
  p.tau = cfg.number("model", "tau_seconds");
  p.B = cfg.number("model", "B_joule_second_per_meter", 1.0);
  p.omega0 = cfg.number("model", "omega0_per_second", 1.0);
  p.omega1 = cfg.number("model", "omega1_per_second", -1.0);
  p.mass = cfg.number("model", "mass_kg", 1.0);
  p.gamma_up = cfg.number("model", "gamma_up", 1.0);
  p.gamma_down = cfg.number("model", "gamma_down", 1.0);
  const auto fock = cfg.integer("model", "fock_dim", 64);
  if (!(p.tau > 0.0)) cfg.fail("model", "tau_seconds", "must be positive");
  if (!(p.mass > 0.0)) cfg.fail("model", "mass_kg", "must be positive");
  if (p.gamma_up < 0.0) cfg.fail("model", "gamma_up", "must be >= 0");
  if (p.gamma_down < 0.0) cfg.fail("model", "gamma_down", "must be >= 0");
  if (fock < 2 || fock > 4096) cfg.fail("model", "fock_dim", "must be between 2 and 4096");
  p.fock_dim = static_cast<std::size_t>(fock);
  return p;
}

std::vector<std::string> header_block(const std::vector<std::string>& lead, const Config& cfg) {
  std::vector<std::string> out = lead;
  out.emplace_back("resolved configuration:");
  for (const auto& line : cfg.resolved_lines()) out.push_back("  " + line);
  return out;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error("cannot create output directory '" + dir.string() + "'");
}

}  // namespace detail

ModelSpec model_from_config(Config& cfg) {
  const std::string name = cfg.string("model", "name");
  if (name == "qubit-diag") return qubit_diagonal(detail::qubit_params(cfg));
  if (name == "qubit-nondiag") return qubit_nondiagonal(detail::qubit_params(cfg));
  if (name == "oscillator") return harmonic_oscillator(detail::oscillator_params(cfg));
  cfg.fail("model", "name", "unknown model '" + name + "' (expected qubit-diag, qubit-nondiag or oscillator)");
}

HybridPureState initial_from_config(Config& cfg, std::size_t dim) {
  const double q = cfg.number("initial", "q_meters", 0.0);
  const double p = cfg.number("initial", "p_kg_meter_per_second", 0.0);
  const std::string state = cfg.string("initial", "state", "basis:0");
  auto parse_level = [&](const std::string& s) -> std::size_t {
    char* end = nullptr;
    const unsigned long v = std::strtoul(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || s.front() == '-') {
      cfg.fail("initial", "state", "'" + s + "' is not a level index");
    }
    if (v >= dim) cfg.fail("initial", "state", "level " + s + " is outside the Hilbert space of dimension " + std::to_string(dim));
    return v;
  };
  try {
    if (state == "plus") return {QuantumState::superposition(dim, {0, 1}), {q, p}, 0.0};
    if (state.rfind("basis:", 0) == 0) return {QuantumState::basis(dim, parse_level(state.substr(6))), {q, p}, 0.0};
    if (state.rfind("superposition:", 0) == 0) {
      std::vector<std::size_t> levels;
      std::string rest = state.substr(14);
      std::size_t pos = 0;
      while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        levels.push_back(parse_level(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      return {QuantumState::superposition(dim, levels), {q, p}, 0.0};
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    cfg.fail("initial", "state", e.what());
  }
  cfg.fail("initial", "state", "unknown state '" + state + "' (expected plus, basis:<n> or superposition:<n1>,<n2>,...)");
}

}  // namespace hybridcq::cli
