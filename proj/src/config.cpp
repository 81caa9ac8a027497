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

#include "rsw/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "rsw/error.hpp"

namespace rsw {

const char* mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Simulate: return "simulate";
    case RunMode::Optimize: return "optimize";
    case RunMode::TatBenchmark: return "tat_benchmark";
    case RunMode::OracleValidate: return "oracle_validate";
    case RunMode::DephasingSweep: return "dephasing_sweep";
  }
  return "?";
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

namespace {

class Parser {
 public:
  Parser(std::string origin, std::filesystem::path base) : origin_(std::move(origin)), base_(std::move(base)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    std::ostringstream out;
    out << origin_;
    if (node.IsDefined() && node.Mark().line >= 0) out << ":" << node.Mark().line + 1;
    out << ": " << msg;
    throw ConfigError(out.str());
  }

  void expect_map(const YAML::Node& node, const std::string& name) const {
    if (!node.IsMap()) fail(node, "'" + name + "' must be a mapping");
  }

  void allow_keys(const YAML::Node& node, const std::string& name, std::set<std::string> keys) const {
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!keys.count(key)) fail(kv.first, "unknown key '" + key + "' in '" + name + "'");
    }
  }

  template <class T>
  T get(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, "'" + what + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + what + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  template <class T>
  T get_or(const YAML::Node& parent, const std::string& key, T fallback) const {
    const YAML::Node node = parent[key];
    if (!node.IsDefined() || node.IsNull()) return fallback;
    return get<T>(node, key);
  }

  template <class T>
  std::vector<T> get_list(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, "'" + what + "' must be a list");
    std::vector<T> out;
    for (const auto& item : node) out.push_back(get<T>(item, what));
    return out;
  }

  double finite(const YAML::Node& parent, const std::string& key, double fallback) const {
    const double v = get_or<double>(parent, key, fallback);
    if (!std::isfinite(v)) fail(parent[key], "'" + key + "' must be finite");
    return v;
  }

  const std::filesystem::path& base() const { return base_; }

 private:
  std::string origin_;
  std::filesystem::path base_;
};

RunMode parse_mode(const Parser& p, const YAML::Node& node) {
  const std::string s = p.get<std::string>(node, "mode");
  if (s == "simulate") return RunMode::Simulate;
  if (s == "optimize") return RunMode::Optimize;
  if (s == "tat_benchmark") return RunMode::TatBenchmark;
  if (s == "oracle_validate") return RunMode::OracleValidate;
  if (s == "dephasing_sweep") return RunMode::DephasingSweep;
  p.fail(node, "unknown mode '" + s + "'");
}

LatticeSpec parse_lattice(const Parser& p, const YAML::Node& node) {
  p.expect_map(node, "lattice");
  p.allow_keys(node, "lattice", {"lx", "ly", "boundary", "alpha", "coupling"});
  if (!node["lx"] || !node["ly"]) p.fail(node, "'lattice' needs lx and ly");
  LatticeSpec spec;
  spec.lx = p.get<int>(node["lx"], "lx");
  spec.ly = p.get<int>(node["ly"], "ly");
  const std::string b = p.get_or<std::string>(node, "boundary", "periodic");
  if (b == "periodic") {
    spec.boundary = Boundary::Periodic;
  } else if (b == "open") {
    spec.boundary = Boundary::Open;
  } else {
    p.fail(node["boundary"], "boundary must be 'periodic' or 'open'");
  }
  spec.alpha = p.finite(node, "alpha", 3.0);
  spec.coupling = p.finite(node, "coupling", 1.0);
  try {
    spec.validate();
  } catch (const std::exception& e) {
    p.fail(node, e.what());
  }
  return spec;
}

ControlField load_checkpoint_field(const Parser& p, const YAML::Node& node) {
  std::filesystem::path path = p.get<std::string>(node, "checkpoint");
  if (path.is_relative()) path = p.base() / path;
  std::ifstream in(path);
  if (!in) p.fail(node, "cannot open checkpoint '" + path.string() + "'");
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    const auto& f = j.at("best_field");
    return ControlField{f.at("total_time").get<double>(), f.at("segments").get<std::vector<double>>()};
  } catch (const std::exception& e) {
    p.fail(node, std::string("malformed checkpoint: ") + e.what());
  }
}

void parse_field(const Parser& p, const YAML::Node& node, ExperimentConfig& cfg) {
  p.expect_map(node, "field");
  p.allow_keys(node, "field", {"total_time", "segments", "value", "values", "checkpoint"});
  if (node["checkpoint"]) {
    cfg.field = load_checkpoint_field(p, node["checkpoint"]);
    cfg.segments = cfg.field.n_segments();
    return;
  }
  if (!node["total_time"]) p.fail(node, "'field' needs total_time");
  const double t = p.finite(node, "total_time", 1.0);
  if (!(t > 0.0)) p.fail(node["total_time"], "total_time must be > 0");
  if (node["values"]) {
    if (node["value"]) p.fail(node["value"], "give either 'value' or 'values', not both");
    cfg.field = ControlField{t, p.get_list<double>(node["values"], "values")};
    if (cfg.field.segments.empty()) p.fail(node["values"], "'values' must not be empty");
    if (node["segments"] && p.get<int>(node["segments"], "segments") != cfg.field.n_segments()) {
      p.fail(node["segments"], "segments does not match the length of 'values'");
    }
  } else {
    const int m = p.get_or<int>(node, "segments", 64);
    if (m < 1) p.fail(node["segments"], "segments must be >= 1");
    cfg.field = ControlField::constant(t, m, p.finite(node, "value", 0.0));
  }
  for (double h : cfg.field.segments) {
    if (!std::isfinite(h)) p.fail(node, "field values must be finite");
  }
  cfg.segments = cfg.field.n_segments();
}

Noise parse_noise(const Parser& p, const YAML::Node& node) {
  p.expect_map(node, "noise");
  p.allow_keys(node, "noise", {"kind", "rate"});
  const std::string kind = p.get_or<std::string>(node, "kind", "none");
  const double rate = p.finite(node, "rate", 0.0);
  if (rate < 0.0) p.fail(node["rate"], "noise rate must be >= 0");
  if (kind == "none") return Noise::none();
  if (kind == "collective") return Noise::collective(rate);
  if (kind == "individual") return Noise::individual(rate);
  p.fail(node["kind"], "noise kind must be none, collective or individual");
}

void parse_optimizer(const Parser& p, const YAML::Node& node, OptimizerOptions& o) {
  p.expect_map(node, "optimizer");
  p.allow_keys(node, "optimizer",
               {"max_iterations", "random_starts", "fd_step", "h_max", "gradient_tolerance",
                "random_amplitude", "constant_seed", "include_zero_seed", "include_constant_seed"});
  o.max_iterations = p.get_or<int>(node, "max_iterations", o.max_iterations);
  o.n_random_starts = p.get_or<int>(node, "random_starts", o.n_random_starts);
  o.fd_step = p.finite(node, "fd_step", o.fd_step);
  o.h_max = p.finite(node, "h_max", o.h_max);
  o.gradient_tolerance = p.finite(node, "gradient_tolerance", o.gradient_tolerance);
  o.random_amplitude = p.finite(node, "random_amplitude", o.random_amplitude);
  o.constant_seed = p.finite(node, "constant_seed", o.constant_seed);
  o.include_zero_seed = p.get_or<bool>(node, "include_zero_seed", o.include_zero_seed);
  o.include_constant_seed = p.get_or<bool>(node, "include_constant_seed", o.include_constant_seed);
  if (o.max_iterations < 0) p.fail(node["max_iterations"], "max_iterations must be >= 0");
  if (o.n_random_starts < 0) p.fail(node["random_starts"], "random_starts must be >= 0");
  if (!(o.fd_step > 0.0)) p.fail(node["fd_step"], "fd_step must be > 0");
  if (!(o.h_max > 0.0)) p.fail(node["h_max"], "h_max must be > 0");
  if (o.random_amplitude < 0.0) p.fail(node["random_amplitude"], "random_amplitude must be >= 0");
}

std::vector<double> positive_list(const Parser& p, const YAML::Node& node, const std::string& what,
                                  bool allow_zero) {
  std::vector<double> out = p.get_list<double>(node, what);
  if (out.empty()) p.fail(node, "'" + what + "' must not be empty");
  for (double v : out) {
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
      p.fail(node, "'" + what + "' entries must be " + (allow_zero ? ">= 0" : "> 0"));
    }
  }
  return out;
}

}  // namespace

void set_seed(ExperimentConfig& config, std::uint64_t seed, const std::string& text) {
  config.seed = seed;
  config.optimizer.seed = seed;
  config.config_hash = sha256_hex(text + "\nseed=" + std::to_string(seed));
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  std::filesystem::path base = std::filesystem::path(origin).parent_path();
  const Parser p(origin, base);
  if (!root.IsMap()) p.fail(root, "top level must be a mapping");
  p.allow_keys(root, "top level",
               {"schema_version", "mode", "seed", "output", "lattice", "field", "noise", "time_grid",
                "optimizer", "husimi", "tat_benchmark", "oracle_validate", "dephasing_sweep"});

  if (!root["schema_version"]) p.fail(root, "missing schema_version");
  if (p.get<int>(root["schema_version"], "schema_version") != kSchemaVersion) {
    p.fail(root["schema_version"], "unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  if (!root["mode"]) p.fail(root, "missing mode");

  ExperimentConfig cfg;
  cfg.mode = parse_mode(p, root["mode"]);
  const YAML::Node seed = root["seed"];
  if (seed) {
    const std::string s = p.get<std::string>(seed, "seed");
    if (s.empty() || s[0] == '-') p.fail(seed, "seed must be a non-negative integer");
    cfg.seed = p.get<std::uint64_t>(seed, "seed");
  }
  cfg.output = p.get_or<std::string>(root, "output", "out");

  const bool needs_lattice = cfg.mode != RunMode::TatBenchmark;
  if (needs_lattice) {
    if (!root["lattice"]) p.fail(root, "mode '" + std::string(mode_name(cfg.mode)) + "' needs 'lattice'");
    cfg.lattice = parse_lattice(p, root["lattice"]);
  }
  if (root["optimizer"]) parse_optimizer(p, root["optimizer"], cfg.optimizer);
  if (root["field"]) {
    parse_field(p, root["field"], cfg);
  } else if (cfg.mode == RunMode::Simulate || cfg.mode == RunMode::Optimize ||
             cfg.mode == RunMode::OracleValidate || cfg.mode == RunMode::DephasingSweep) {
    p.fail(root, "mode '" + std::string(mode_name(cfg.mode)) + "' needs 'field'");
  }
  if (root["field"]) {
    for (double h : cfg.field.segments) {
      if (std::abs(h) > cfg.optimizer.h_max) {
        p.fail(root["field"], "field value exceeds h_max = " + std::to_string(cfg.optimizer.h_max));
      }
    }
  }
  if (root["noise"]) cfg.noise = parse_noise(p, root["noise"]);

  if (const YAML::Node tg = root["time_grid"]) {
    p.expect_map(tg, "time_grid");
    p.allow_keys(tg, "time_grid", {"samples"});
    cfg.time_samples = p.get_or<int>(tg, "samples", cfg.time_samples);
    if (cfg.time_samples < 2) p.fail(tg, "time_grid.samples must be >= 2");
  }

  if (const YAML::Node hz = root["husimi"]) {
    p.expect_map(hz, "husimi");
    p.allow_keys(hz, "husimi", {"theta", "phi", "times"});
    cfg.husimi.n_theta = p.get_or<int>(hz, "theta", cfg.husimi.n_theta);
    cfg.husimi.n_phi = p.get_or<int>(hz, "phi", cfg.husimi.n_phi);
    if (cfg.husimi.n_theta < 2 || cfg.husimi.n_phi < 2) p.fail(hz, "husimi grids need at least 2 points");
    if (hz["times"]) cfg.husimi.times = positive_list(p, hz["times"], "husimi.times", true);
    for (double t : cfg.husimi.times) {
      if (t > cfg.field.total_time) p.fail(hz["times"], "husimi time beyond total_time");
    }
  }

  if (cfg.mode == RunMode::TatBenchmark) {
    const YAML::Node tb = root["tat_benchmark"];
    if (!tb) p.fail(root, "mode 'tat_benchmark' needs 'tat_benchmark'");
    p.expect_map(tb, "tat_benchmark");
    p.allow_keys(tb, "tat_benchmark", {"sizes", "t_max", "samples"});
    if (!tb["sizes"]) p.fail(tb, "'tat_benchmark' needs sizes");
    cfg.tat.sizes = p.get_list<int>(tb["sizes"], "sizes");
    if (cfg.tat.sizes.empty()) p.fail(tb["sizes"], "'sizes' must not be empty");
    for (int n : cfg.tat.sizes) {
      if (n < 2 || n > 4096) p.fail(tb["sizes"], "sizes must lie in [2, 4096]");
    }
    cfg.tat.t_max = p.finite(tb, "t_max", cfg.tat.t_max);
    cfg.tat.samples = p.get_or<int>(tb, "samples", cfg.tat.samples);
    if (!(cfg.tat.t_max > 0.0)) p.fail(tb["t_max"], "t_max must be > 0");
    if (cfg.tat.samples < 2) p.fail(tb["samples"], "samples must be >= 2");
  }

  if (const YAML::Node ov = root["oracle_validate"]) {
    p.expect_map(ov, "oracle_validate");
    p.allow_keys(ov, "oracle_validate", {"trajectories", "optimize_first"});
    cfg.oracle.trajectories = p.get_or<int>(ov, "trajectories", cfg.oracle.trajectories);
    cfg.oracle.optimize_first = p.get_or<bool>(ov, "optimize_first", cfg.oracle.optimize_first);
    if (cfg.oracle.trajectories < 1) p.fail(ov["trajectories"], "trajectories must be >= 1");
  }

  if (cfg.mode == RunMode::DephasingSweep) {
    const YAML::Node ds = root["dephasing_sweep"];
    if (!ds) p.fail(root, "mode 'dephasing_sweep' needs 'dephasing_sweep'");
    p.expect_map(ds, "dephasing_sweep");
    p.allow_keys(ds, "dephasing_sweep", {"rates", "total_times"});
    if (!ds["rates"]) p.fail(ds, "'dephasing_sweep' needs rates");
    cfg.sweep.rates = positive_list(p, ds["rates"], "rates", true);
    cfg.sweep.total_times = ds["total_times"] ? positive_list(p, ds["total_times"], "total_times", false)
                                              : std::vector<double>{cfg.field.total_time};
  }

  // Cross-field checks.
  const YAML::Node where = root["noise"] ? root["noise"] : root;
  const bool rsw_mode = cfg.mode == RunMode::Simulate || cfg.mode == RunMode::Optimize ||
                        cfg.mode == RunMode::DephasingSweep;
  if (rsw_mode && cfg.noise.kind == NoiseKind::Individual) {
    p.fail(where, "individual dephasing is only available in oracle_validate mode");
  }
  if (cfg.mode == RunMode::DephasingSweep && cfg.noise.kind == NoiseKind::None && root["noise"]) {
    p.fail(where, "dephasing_sweep sweeps collective dephasing; drop 'noise' or set kind: collective");
  }
  if (cfg.mode == RunMode::OracleValidate) {
    const int n = cfg.lattice.n_sites();
    if (n > 16) p.fail(root["lattice"], "oracle_validate supports at most 16 spins");
    if (cfg.noise.kind != NoiseKind::None && n > 10) {
      p.fail(root["lattice"], "oracle_validate with dephasing supports at most 10 spins");
    }
  }
  if (rsw_mode || cfg.mode == RunMode::OracleValidate) {
    const int n = cfg.lattice.n_sites();
    if (n < 2) p.fail(root["lattice"], "the lattice needs at least two sites");
    if (n > 4096) p.fail(root["lattice"], "lattice too large (at most 4096 sites)");
  }

  set_seed(cfg, cfg.seed, text);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace rsw
