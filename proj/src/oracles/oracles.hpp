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
 * Slow, direct reference implementations used to cross-check the library.
 * Nothing here shares code with the routines it checks.
 */

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spacestate/associability.hpp"
#include "spacestate/macrostates.hpp"
#include "spacestate/rewrite.hpp"
#include "spacestate/wavefunctional.hpp"

namespace spacestate::oracles {

/// Tries every vertex permutation.
bool brute_isomorphic(const SpaceState &a, const SpaceState &b);

/// brute_isomorphic after each shift that maps the first charged vertex of a
/// onto some charged vertex of b.
bool brute_gauge_equivalent(const SpaceState &a, const SpaceState &b);

/// Largest k such that some connected k-subset of a embeds in b as an induced
/// labeled subgraph under one common charged-phase offset. Enumerates vertex
/// subsets of a from the largest size down.
int brute_common_connected(const SpaceState &a, const SpaceState &b);

Associability brute_classify(const SpaceState &a, const SpaceState &b, const AssociabilityOptions &options = {});

struct RandomStateOptions {
  int min_vertices = 1;
  int max_vertices = 8;
  int species = 3;            ///< tags 0..species-1
  int matter_values = 2;      ///< matter in {0, ..., matter_values-1}
  int length_values = 2;      ///< lengths in {0, ..., length_values-1}
  double edge_probability = 0.4;
  int phase_values = 4;       ///< charged phases are multiples of 2^64 / phase_values
};

SpaceState random_state(std::mt19937_64 &rng, const RandomStateOptions &options = {});
SpaceState random_relabel(std::mt19937_64 &rng, const SpaceState &s);
/// Small local edit: flips one edge, one label or one phase.
SpaceState random_mutation(std::mt19937_64 &rng, const SpaceState &s, const RandomStateOptions &options = {});

/// Normalized state with random complex amplitudes on distinct basis states.
Wavefunctional random_wavefunctional(std::mt19937_64 &rng, const std::vector<SpaceState> &basis);

struct NaiveGenerator {
  std::vector<SpaceState> states;  ///< discovery order
  Eigen::MatrixXcd matrix;
};

/// Closure of the seed states under the rules with duplicates detected by
/// brute_isomorphic, and the same coupling convention as the generator.
NaiveGenerator naive_generator(const std::vector<SpaceState> &seed, const std::vector<RewriteRule> &rules,
                               std::size_t max_states);

/// exp(-i H dt) through the eigendecomposition of the Hermitian H.
Eigen::MatrixXcd eigen_propagator(const Eigen::MatrixXcd &h, double dt);

/// Diagonal 0/1 matrix of P_alpha over basis, from one classifier call per state.
Eigen::MatrixXd dense_projector(const MacroPartition &partition, const std::vector<SpaceState> &basis,
                                const MacroLabel &alpha);

}  // namespace spacestate::oracles
