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

#include <string_view>
#include <utility>
#include <vector>

#include "spacestate/space_state.hpp"

namespace spacestate {

enum class AssociabilityKind { GloballyAssociable, PartiallyDissociated, CompletelyDissociated };

std::string_view to_string(AssociabilityKind kind);

struct Associability {
  AssociabilityKind kind = AssociabilityKind::CompletelyDissociated;
  /// Common region size over the larger vertex count; 1 exactly when globally
  /// associable.
  Rational overlap_fraction{0};
  int common_vertices = 0;
  /// Set when the common region came from the greedy search and is only a
  /// lower bound.
  bool overlap_is_lower_bound = false;

  bool operator==(const Associability &) const = default;
};

struct AssociabilityOptions {
  /// Smallest connected shared region that counts as a local match.
  int k_min = 2;
  /// Partial association also requires overlap_fraction >= min_overlap.
  Rational min_overlap{0};
  /// Exact search when both graphs have at most this many vertices.
  int exact_vertex_limit = 8;
};

struct CommonSubgraph {
  int size = 0;
  bool exact = true;
  std::vector<std::pair<int, int>> mapping;  ///< (vertex of a, vertex of b)
};

/**
 * Largest connected common induced labeled subgraph. Vertex labels, edge
 * presence and edge lengths must match exactly; charged phases may differ by
 * one global offset that is fixed by the first charged pair mapped.
 */
CommonSubgraph max_common_connected_subgraph(const SpaceState &a, const SpaceState &b,
                                             int exact_vertex_limit = 8);

/// Discrete dissociation classification; symmetric in a and b. cell_index is
/// ignored.
Associability classify_associability(const SpaceState &a, const SpaceState &b,
                                     const AssociabilityOptions &options = {});

}  // namespace spacestate
