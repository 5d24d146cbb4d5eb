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

#include <vector>

#include "spacestate/associability.hpp"

namespace spacestate {

/// Pairwise classification over a fixed list of states, computed once.
class AssociabilityTable {
 public:
  AssociabilityTable() = default;
  AssociabilityTable(const std::vector<SpaceState> &states, const AssociabilityOptions &options = {});

  std::size_t size() const { return n_; }
  const Associability &at(std::size_t i, std::size_t j) const;
  /// Anything other than CompletelyDissociated; a state is associable with itself.
  bool associable(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_ = 0;
  std::vector<Associability> upper_;  ///< row-major upper triangle including the diagonal
};

}  // namespace spacestate
