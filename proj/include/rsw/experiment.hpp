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

#include <filesystem>
#include <map>
#include <string>

#include "rsw/config.hpp"

namespace rsw {

/// Output files keyed by name relative to the output directory, held in memory so
/// that a failed run leaves nothing behind.
using OutputFiles = std::map<std::string, std::string>;

/// Runs one experiment. `checkpoint_dir`, when set, receives optimization checkpoints
/// while the run is in progress.
OutputFiles run_experiment(const ExperimentConfig& config,
                           const std::filesystem::path* checkpoint_dir = nullptr);

void write_outputs(const OutputFiles& files, const std::filesystem::path& dir);

}  // namespace rsw
