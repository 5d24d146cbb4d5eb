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

#include <compare>
#include <string>
#include <vector>

#include "spacestate/space_state.hpp"

namespace spacestate {

/// Opaque byte string identifying a labeled graph up to vertex relabeling.
/// Byte layout is fixed-width little-endian, so keys are platform independent.
class CanonicalKey {
 public:
  CanonicalKey() = default;
  explicit CanonicalKey(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string &bytes() const { return bytes_; }
  std::string hex() const;
  static CanonicalKey from_hex(const std::string &hex);

  auto operator<=>(const CanonicalKey &) const = default;

 private:
  std::string bytes_;
};

struct CanonicalForm {
  SpaceState state;            ///< relabeled so vertex i sits at canonical position i
  CanonicalKey key;
  std::vector<int> labeling;   ///< labeling[v] = canonical position of input vertex v
};

/**
 * Canonical labeling by iterated color refinement and a search over
 * individualizations of the smallest non-singleton color class. Leaves are
 * compared by their full encoding; automorphisms discovered between equal
 * leaves prune sibling branches. cell_index is carried over untouched and is
 * not part of the key.
 */
CanonicalForm canonical_form(const SpaceState &s);
CanonicalKey canonicalize(const SpaceState &s);

/// Key invariant under a constant shift of every charged phase: the minimum
/// canonical key over the shifts that bring some charged vertex to phase 0.
CanonicalKey gauge_invariant_key(const SpaceState &s);

/// Vertex bijection preserving edges, edge lengths and every field label.
bool is_isomorphic(const SpaceState &a, const SpaceState &b);

/// is_isomorphic after some global shift of the charged phases of b.
bool is_gauge_equivalent(const SpaceState &a, const SpaceState &b);

}  // namespace spacestate
