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


#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hybridcq/cli/commands.hpp"

namespace cli = hybridcq::cli;

int main(int argc, char** argv) {
  CLI::App app{"Stochastic unravelling of hybrid classical-quantum dynamics"};
  app.require_subcommand(1);

  cli::CommandOptions sim_opts;
  std::optional<std::string> sim_out;
  std::optional<std::uint64_t> sim_seed;
  std::optional<unsigned> sim_threads;
  auto* sim = app.add_subcommand("simulate", "Run an ensemble and write densities and statistics");
  sim->add_option("--config", sim_opts.config_path, "TOML run configuration")->required();
  sim->add_option("--out", sim_out, "Output directory (overrides [outputs] directory)");
  sim->add_option("--seed", sim_seed, "Master seed (overrides [engine] seed)");
  sim->add_option("--threads", sim_threads, "Worker threads, 0 for all cores");

  cli::CommandOptions orc_opts;
  std::optional<std::string> orc_out;
  auto* orc = app.add_subcommand("oracle", "Evaluate a closed-form or exact reference");
  orc->add_option("--config", orc_opts.config_path, "TOML oracle configuration")->required();
  orc->add_option("--out", orc_out, "Output directory");

  cli::CompareOptions cmp_opts;
  std::optional<double> rel_max;
  auto* cmp = app.add_subcommand("compare", "Check simulation output against oracle output");
  cmp->add_option("sim_dir", cmp_opts.sim_dir, "Simulation output directory")->required();
  cmp->add_option("oracle_dir", cmp_opts.oracle_dir, "Oracle output directory")->required();
  cmp->add_option("--z-max", cmp_opts.z_max, "Largest accepted |z| (<= 0 disables)")->capture_default_str();
  cmp->add_option("--rel-max", rel_max, "Largest accepted relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalid;
  }

  if (sim->parsed()) {
    sim_opts.out_dir = sim_out;
    sim_opts.seed = sim_seed;
    sim_opts.threads = sim_threads;
    return cli::cmd_simulate(sim_opts, std::cerr);
  }
  if (orc->parsed()) {
    orc_opts.out_dir = orc_out;
    return cli::cmd_oracle(orc_opts, std::cerr);
  }
  cmp_opts.rel_max = rel_max;
  return cli::cmd_compare(cmp_opts, std::cout);
}
