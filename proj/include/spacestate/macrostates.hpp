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
 * Macrostates as basis-compatible indicator partitions. Each label alpha
 * induces the projector onto the span of the basis states classified as
 * alpha, so the projector algebra reduces to properties of the classifier.
 */

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spacestate/space_state.hpp"

namespace spacestate {

using MacroLabel = std::string;

class MacroPartition {
 public:
  /// Returns nullopt where the classifier is undefined; builtins are total.
  using Classifier = std::function<std::optional<MacroLabel>(const SpaceState &)>;

  MacroPartition(std::string name, std::string description, std::vector<MacroLabel> labels,
                 Classifier classifier);

  const std::string &name() const { return name_; }
  const std::string &description() const { return description_; }
  /// Sorted, unique.
  const std::vector<MacroLabel> &labels() const { return labels_; }
  bool has_label(const MacroLabel &label) const;
  /// Position in labels() or -1.
  int label_index(const MacroLabel &label) const;

  std::optional<MacroLabel> try_classify(const SpaceState &s) const { return classifier_(s); }
  /// Throws InvalidState if the classifier yields nothing or a label outside labels().
  MacroLabel classify(const SpaceState &s) const;

 private:
  std::string name_;
  std::string description_;
  std::vector<MacroLabel> labels_;
  Classifier classifier_;
};

/// Parameter values as written in the configuration ("4", "1/2", ...).
using PartitionParams = std::map<std::string, std::string>;

/**
 * Builtin partitions, all insensitive to vertex relabeling, cell_index and
 * phases:
 *
 *  - vertex_count     width=4 max_vertices=64   labels "lo-hi", ">=N"
 *  - total_matter     grid=1 buckets=16         labels "matter:k", "matter:>=K"
 *  - total_length     grid=1 buckets=16         labels "length:k", "length:>=K"
 *  - degree_histogram buckets=8                 labels "deg:h" (FNV-1a of the
 *                                               sorted degree sequence mod buckets)
 *
 * Throws InvalidState for unknown names, unknown parameters or values out of
 * range.
 */
MacroPartition make_partition(const std::string &name, const PartitionParams &params = {});

/// Every builtin with default parameters.
std::vector<MacroPartition> builtin_classifiers();

struct ProjectorReport {
  std::size_t basis_size = 0;
  std::size_t label_count = 0;
  bool idempotent = true;
  bool orthogonal = true;
  bool complete = true;
  bool commuting = true;
  std::vector<std::string> violations;

  bool ok() const { return idempotent && orthogonal && complete && commuting; }
};

/**
 * Checks the basis-diagonal projectors induced by partition on basis:
 * P_a^2 = P_a, P_a P_b = 0 for a != b, sum_a P_a = 1 and [P_a, P_b] = 0.
 * Each diagonal entry is formed from an independent classifier evaluation, so
 * a non-deterministic or non-total classifier shows up as a violation.
 */
ProjectorReport verify_projector_algebra(const MacroPartition &partition,
                                         const std::vector<SpaceState> &basis);

}  // namespace spacestate
