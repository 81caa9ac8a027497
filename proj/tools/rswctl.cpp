// Copyright 2026 The rswsqueeze Authors
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

// rswctl: batch front end.
//   rswctl run <config> [--output DIR] [--seed N] [--threads N]
// Exit status: 0 success, 1 config error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "rsw/config.hpp"
#include "rsw/error.hpp"
#include "rsw/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int run(const std::string& config_path, const std::string& output, const std::uint64_t* seed,
        int threads) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw rsw::ConfigError(config_path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  rsw::ExperimentConfig cfg = rsw::parse_config(text.str(), config_path);
  if (seed) rsw::set_seed(cfg, *seed, text.str());
  if (!output.empty()) cfg.output = output;
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
  const rsw::OutputFiles files = rsw::run_experiment(cfg, &cfg.output);
  rsw::write_outputs(files, cfg.output);
  for (const auto& [name, data] : files) std::cout << (cfg.output / name).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-squeezing simulation and optimal control"};
  app.require_subcommand(1);
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path;
  std::string output;
  std::uint64_t seed = 0;
  int threads = 0;
  run_cmd->add_option("config", config_path, "YAML config")->required();
  run_cmd->add_option("--output", output, "Output directory (overrides the config)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Random seed (overrides the config)");
  run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    return run(config_path, output, seed_opt->count() ? &seed : nullptr, threads);
  } catch (const rsw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rsw::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
