// Copyright 2026 The spacestate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Experiment configuration and the end-to-end pipeline: dynamics, branch
 * tracking, counting and sampling, with every artifact hashed into a
 * manifest.
 *
 * Configuration is a JSON object; unknown keys are rejected. Relative paths
 * resolve against the directory of the configuration file.
 *
 *     rules_file         RUL1 file                          required
 *     initial_state      SSG1/WFN1 path or {"degenerate": {vertices, topology,
 *                        species, matter, phase}}           required
 *     partition          {"name": ..., "params": {...}}     required
 *     k_min              >= 1                               2
 *     min_overlap        rational in [0, 1], "p/q"          "0"
 *     dt                 finite, non-zero                   0.1
 *     steps              steps per epoch, 1..100000         1
 *     epochs             1..10000                           10
 *     depth_max          0..24                              12
 *     samples            1..10^9                            100000
 *     seed               unsigned 64-bit                    1
 *     output_dir         directory                          "out"
 *     max_dim            1..4096                            256
 *     accept_truncation  bool                               false
 *     horizon            >= 0                               3
 *     threads            >= 1                               (runtime default)
 *     asymmetry          {"seeds": 1..10000, "coupling_jitter": [0, 1)}
 *     verify_corpus      list of SSG1 files or directories
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spacestate/branching.hpp"
#include "spacestate/errors.hpp"
#include "spacestate/macrostates.hpp"

namespace spacestate {

inline constexpr const char *kToolVersion = "0.1.0";
/// Largest tolerated |norm^2 - 1| after any epoch.
inline constexpr double kNormTolerance = 1e-10;

class ConfigError : public Error {
 public:
  using Error::Error;
};

class RuleFileError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

struct AsymmetryConfig {
  int seeds = 100;
  double coupling_jitter = 0.0;
};

struct ExperimentConfig {
  std::filesystem::path base_dir;
  std::string rules_file;
  std::optional<std::string> initial_state_file;
  std::optional<DegenerateSpec> degenerate;
  std::string partition_name;
  PartitionParams partition_params;
  int k_min = 2;
  Rational min_overlap{0};
  double dt = 0.1;
  int steps = 1;
  int epochs = 10;
  int depth_max = 12;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::size_t max_dim = 256;
  bool accept_truncation = false;
  int horizon = 3;
  std::optional<int> threads;
  std::optional<AsymmetryConfig> asymmetry;
  std::optional<std::vector<std::string>> verify_corpus;

  std::filesystem::path resolve(const std::string &path) const;
  AssociabilityOptions association() const;
};

/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path &base_dir = {});
ExperimentConfig load_config(const std::filesystem::path &path);

/// Normalized JSON of every field except output_dir and threads.
std::string canonical_config_json(const ExperimentConfig &config);
std::string sha256_hex(std::string_view data);

/// Inputs shared by run and verify.
struct ExperimentSetup {
  std::vector<RewriteRule> rules;
  Wavefunctional initial;
  MacroPartition partition;
  Generator generator;
};

/// Loads rules (RuleFileError), the initial state and partition (ConfigError)
/// and expands the generator (TruncationExceeded).
ExperimentSetup prepare(const ExperimentConfig &config);

/// psi_0 .. psi_epochs; throws NumericalFailure when the norm drifts beyond
/// kNormTolerance. perturb_norm scales psi_1 by 1 + 1e-6 as a fault hook.
std::vector<Wavefunctional> evolve_series(const ExperimentConfig &config, const ExperimentSetup &setup,
                                          bool perturb_norm = false);

struct RunOptions {
  bool inject_norm_fault = false;
};

struct ArtifactRecord {
  std::string name;
  std::string sha256;
};

struct RunResult {
  std::filesystem::path output_dir;
  std::vector<ArtifactRecord> artifacts;  ///< sorted by name, manifest excluded
};

RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

}  // namespace spacestate
