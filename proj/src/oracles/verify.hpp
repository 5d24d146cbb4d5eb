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

#pragma once

#include <string>
#include <vector>

#include "spacestate/experiment.hpp"

namespace spacestate::oracles {

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct VerifyOptions {
  bool inject_norm_fault = false;
  /// Pair checks against the brute-force oracles stop after this many pairs.
  std::size_t max_pairs = 2000;
};

/**
 * Invariant suite on the configured experiment: projector algebra,
 * unitarity, gauge round trip, refinement weights, sampler fit and the
 * isomorphism, associability and propagator oracles.
 */
std::vector<CheckResult> verify_experiment(const ExperimentConfig &config, const VerifyOptions &options = {});

std::string format_check(const CheckResult &r);
bool all_passed(const std::vector<CheckResult> &results);

}  // namespace spacestate::oracles
