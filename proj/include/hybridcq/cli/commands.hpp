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


// Batch commands behind the hybridcq executable.
//
// Exit codes: 0 success, 2 invalid configuration or mismatched inputs,
// 3 engine fault (including a Fock truncation that contaminates the run).

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hybridcq/cli/config.hpp"
#include "hybridcq/core.hpp"

namespace hybridcq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitEngine = 3;

struct CommandOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

struct CompareOptions {
  std::string sim_dir;
  std::string oracle_dir;
  /// Largest accepted |z|; <= 0 disables the z-score check.
  double z_max = 3.0;
  std::optional<double> rel_max;
};

int cmd_simulate(const CommandOptions& options, std::ostream& log);
int cmd_oracle(const CommandOptions& options, std::ostream& log);
int cmd_compare(const CompareOptions& options, std::ostream& out);

/// Model described by the [model] section.
ModelSpec model_from_config(Config& cfg);

/// Initial hybrid state described by the [initial] section. States are
/// "plus", "basis:<n>" or "superposition:<n1>,<n2>,...".
HybridPureState initial_from_config(Config& cfg, std::size_t dim);

}  // namespace hybridcq::cli
