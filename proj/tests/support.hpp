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

#include <numbers>
#include <vector>

#include "spacestate/space_state.hpp"

namespace spacestate::testing {

inline VertexField vf(int species, std::int64_t matter = 0, std::uint64_t phase = 0) {
  return VertexField{species, Rational(matter), Phase(phase)};
}

inline Edge edge(int u, int v, std::int64_t num = 0, std::int64_t den = 1) { return Edge{u, v, Rational(num, den)}; }

/// Path 0-1-...-(n-1) with the given edge lengths; all vertices species s.
inline SpaceState path(const std::vector<std::int64_t> &lengths, int species = 1) {
  FieldConfig f(lengths.size() + 1, vf(species));
  std::vector<Edge> e;
  for (std::size_t i = 0; i < lengths.size(); ++i) e.push_back(edge(static_cast<int>(i), static_cast<int>(i) + 1, lengths[i]));
  return make_state(f, e);
}

inline Phase quarter_turns(int k) { return Phase(static_cast<std::uint64_t>(k) << 62); }

}  // namespace spacestate::testing
