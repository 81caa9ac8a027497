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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rsw/control.hpp"
#include "rsw/control_field.hpp"
#include "rsw/lattice.hpp"

namespace rsw {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "0.1.0";

enum class RunMode { Simulate, Optimize, TatBenchmark, OracleValidate, DephasingSweep };

const char* mode_name(RunMode mode);

struct HusimiOptions {
  int n_theta = 181;
  int n_phi = 361;
  std::vector<double> times;  // snapshot times; empty means none
};

struct TatOptions {
  std::vector<int> sizes;
  double t_max = 3.0;
  int samples = 3001;
};

struct OracleOptions {
  int trajectories = 500;  // trajectory count for individual dephasing
  bool optimize_first = false;
};

struct SweepOptions {
  std::vector<double> rates;
  std::vector<double> total_times;
};

struct ExperimentConfig {
  RunMode mode = RunMode::Simulate;
  LatticeSpec lattice;
  ControlField field;  // initial field for Optimize, fixed field otherwise
  int segments = 64;
  Noise noise;
  OptimizerOptions optimizer;
  int time_samples = 101;
  std::uint64_t seed = 0;
  std::filesystem::path output = "out";
  HusimiOptions husimi;
  TatOptions tat;
  OracleOptions oracle;
  SweepOptions sweep;

  // Hash of the config text and the effective seed; printed in every output header.
  std::string config_hash;
};

/// Parses and validates a YAML config. Throws ConfigError with a line number for
/// anything malformed or out of range.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-derives config_hash after a seed override.
void set_seed(ExperimentConfig& config, std::uint64_t seed, const std::string& text);

std::string sha256_hex(const std::string& data);

}  // namespace rsw
