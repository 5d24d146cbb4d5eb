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
 * SSG1 text format for space-state graphs:
 *
 *     SSG1
 *     v <index> <species_tag> <matter_amplitude> <u1_phase>
 *     e <i> <j> <edge_length>
 *     end
 *
 * Vertex records are sorted by index, edge records by (i, j) with i < j.
 * Rationals are written as "p" or "p/q"; the phase is the unsigned 64-bit
 * fixed-point turn code (see Phase). The canonical serialization writes the
 * canonical relabeling, so isomorphic states serialize identically.
 */

#pragma once

#include <string>
#include <string_view>

#include "spacestate/space_state.hpp"

namespace spacestate {

namespace detail {
class LineReader;
}

std::string write_ssg1(const SpaceState &s);
std::string write_canonical_ssg1(const SpaceState &s);

/// Parses exactly one SSG1 block. cell_index of the result is empty.
SpaceState read_ssg1(std::string_view text);
SpaceState read_ssg1_block(detail::LineReader &in);

}  // namespace spacestate
