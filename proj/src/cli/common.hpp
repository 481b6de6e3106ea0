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


// Helpers shared by the command implementations.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hybridcq/cli/config.hpp"
#include "hybridcq/models.hpp"

namespace hybridcq::cli::detail {

/// CSV file with a '#' header block followed by one column-name row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
            const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t n_columns_;
};

QubitParams qubit_params(Config& cfg);
OscillatorParams oscillator_params(Config& cfg);

/// "# " prefixed resolved configuration plus the given leading lines.
std::vector<std::string> header_block(const std::vector<std::string>& lead, const Config& cfg);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace hybridcq::cli::detail
