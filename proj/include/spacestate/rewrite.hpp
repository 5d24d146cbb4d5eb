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
 * Local graph-rewrite rules. A rule matches its pattern as an induced labeled
 * subgraph of a host state and rewrites the matched region into its
 * replacement; the Hermitian generator couples host and result.
 *
 * Matching compares species, matter amplitude and edge lengths; phases are
 * wildcards. Replacement vertices 0..k-1 stand for the matched pattern
 * vertices (their species and matter are overwritten, phases kept); vertices
 * k.. are created, and a created charged vertex takes the phase of the first
 * charged matched vertex plus its own phase from the replacement, so rule
 * application commutes with global gauge shifts. Edges among matched vertices
 * are replaced wholesale by the replacement's edges.
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spacestate/space_state.hpp"

namespace spacestate {

struct RewriteRule {
  int rule_id = 0;
  SpaceState pattern;
  SpaceState replacement;
  double coupling = 0.0;

  /// Throws InvalidState unless both fragments are connected, the replacement
  /// keeps every pattern vertex and the coupling is finite.
  void validate() const;
};

bool is_connected(const SpaceState &s);

/// Injective induced matches, image[i] = host vertex of pattern vertex i, in
/// lexicographic order of the image tuple.
std::vector<std::vector<int>> find_matches(const SpaceState &host, const SpaceState &pattern);

SpaceState apply_rule(const SpaceState &host, const RewriteRule &rule, const std::vector<int> &match);

/**
 * RUL1 rule file:
 *
 *     RUL1
 *     rule <id>
 *     <SSG1 block: pattern>
 *     <SSG1 block: replacement>
 *     coupling <decimal>
 *     ...
 */
std::string write_rul1(const std::vector<RewriteRule> &rules);
std::vector<RewriteRule> read_rul1(std::string_view text);

}  // namespace spacestate
