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

#include "spacestate/associability_table.hpp"

#include <utility>

#include "spacestate/errors.hpp"
#include "spacestate/kernels.hpp"

namespace spacestate {

namespace {

std::size_t slot(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

}  // namespace

AssociabilityTable::AssociabilityTable(const std::vector<SpaceState> &states, const AssociabilityOptions &options)
    : n_(states.size()), upper_(n_ * (n_ + 1) / 2) {
  for (std::size_t i = 0; i < n_; ++i) {
    auto &self = upper_[slot(n_, i, i)];
    self.kind = AssociabilityKind::GloballyAssociable;
    self.overlap_fraction = Rational(1);
    self.common_vertices = states[i].vertex_count();
  }
  kernels::for_each_pair(n_, [&](std::size_t i, std::size_t j) {
    upper_[slot(n_, i, j)] = classify_associability(states[i], states[j], options);
  });
}

const Associability &AssociabilityTable::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw InvalidState("associability table index out of range");
  return upper_[slot(n_, i, j)];
}

bool AssociabilityTable::associable(std::size_t i, std::size_t j) const {
  return at(i, j).kind != AssociabilityKind::CompletelyDissociated;
}

}  // namespace spacestate
