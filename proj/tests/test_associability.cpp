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

#include <gtest/gtest.h>

#include <random>

#include "oracles/oracles.hpp"
#include "spacestate/associability.hpp"
#include "spacestate/associability_table.hpp"
#include "spacestate/ssg1.hpp"
#include "support.hpp"

namespace spacestate {
namespace {

using testing::edge;
using testing::vf;

TEST(Associability, SelfIsGlobal) {
  const SpaceState a = testing::path({1, 2, 3});
  for (int k = 1; k <= a.vertex_count(); ++k) {
    AssociabilityOptions o;
    o.k_min = k;
    const Associability r = classify_associability(a, a, o);
    EXPECT_EQ(r.kind, AssociabilityKind::GloballyAssociable);
    EXPECT_EQ(r.overlap_fraction, Rational(1));
  }
}

TEST(Associability, GlobalModuloGaugeAndCell) {
  SpaceState a = make_state({vf(1, 0, 3), vf(2, 1, 7), vf(0)}, {edge(0, 1, 1), edge(1, 2, 1)});
  SpaceState b = shift_gauge(a, Phase(1000));
  b.cell_index = CellPath("1");
  EXPECT_EQ(classify_associability(a, b).kind, AssociabilityKind::GloballyAssociable);
}

TEST(Associability, SharedFourVertexRegion) {
  // Two 6-vertex graphs agreeing on the induced path 0-1-2-3 only.
  FieldConfig f(6, vf(1));
  const SpaceState a = make_state(f, {edge(0, 1, 1), edge(1, 2, 1), edge(2, 3, 1), edge(3, 4, 2), edge(4, 5, 2)});
  FieldConfig g = f;
  g[4] = vf(2);
  g[5] = vf(2);
  const SpaceState b = make_state(g, {edge(0, 1, 1), edge(1, 2, 1), edge(2, 3, 1), edge(3, 4, 3), edge(4, 5, 3)});
  AssociabilityOptions o;
  o.k_min = 3;
  const Associability r = classify_associability(a, b, o);
  EXPECT_EQ(r.kind, AssociabilityKind::PartiallyDissociated);
  EXPECT_EQ(r.common_vertices, 4);
  EXPECT_EQ(r.overlap_fraction, Rational(4, 6));
  EXPECT_EQ(oracles::brute_common_connected(a, b), 4);
}

TEST(Associability, DisjointSpeciesAreCompletelyDissociated) {
  const SpaceState a = make_state({vf(1), vf(1), vf(2)}, {edge(0, 1), edge(1, 2)});
  const SpaceState b = make_state({vf(3), vf(4), vf(4), vf(3)}, {edge(0, 1), edge(1, 2), edge(2, 3)});
  const Associability r = classify_associability(a, b);
  EXPECT_EQ(r.kind, AssociabilityKind::CompletelyDissociated);
  EXPECT_EQ(r.common_vertices, 0);
  EXPECT_LE(r.overlap_fraction, Rational(1, 3));
}

TEST(Associability, OverlapThreshold) {
  const SpaceState a = testing::path({1, 1, 1});
  const SpaceState b = testing::path({1, 1, 2});
  AssociabilityOptions o;
  EXPECT_EQ(classify_associability(a, b, o).kind, AssociabilityKind::PartiallyDissociated);
  o.min_overlap = Rational(4, 5);
  EXPECT_EQ(classify_associability(a, b, o).kind, AssociabilityKind::CompletelyDissociated);
}

TEST(Associability, PartialRegionNeedsOneGaugeOffset) {
  // Charged pair with phases (0, 1) against (5, 7): no single offset maps both.
  const SpaceState a = make_state({vf(1, 0, 0), vf(1, 0, 1)}, {edge(0, 1)});
  const SpaceState b = make_state({vf(1, 0, 5), vf(1, 0, 7)}, {edge(0, 1)});
  EXPECT_EQ(max_common_connected_subgraph(a, b).size, 1);
  const SpaceState c = make_state({vf(1, 0, 5), vf(1, 0, 6), vf(2)}, {edge(0, 1), edge(1, 2)});
  EXPECT_EQ(max_common_connected_subgraph(a, c).size, 2);
}

TEST(Associability, SymmetricAndGloballyIffOverlapOne) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const SpaceState a = oracles::random_state(rng);
    const SpaceState b = trial % 2 ? oracles::random_mutation(rng, a) : oracles::random_state(rng);
    const Associability ab = classify_associability(a, b);
    const Associability ba = classify_associability(b, a);
    ASSERT_EQ(ab, ba);
    ASSERT_EQ(ab.kind == AssociabilityKind::GloballyAssociable, ab.overlap_fraction == Rational(1));
  }
}

TEST(Associability, AgreesWithSubgraphOracle) {
  std::mt19937_64 rng(77);
  oracles::RandomStateOptions o;
  o.species = 2;
  o.phase_values = 2;
  AssociabilityOptions opts;
  opts.k_min = 3;
  int partial = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const SpaceState a = oracles::random_state(rng, o);
    SpaceState b = oracles::random_mutation(rng, oracles::random_relabel(rng, a), o);
    if (trial % 3 == 0) b = oracles::random_state(rng, o);
    const Associability fast = classify_associability(a, b, opts);
    ASSERT_EQ(fast, oracles::brute_classify(a, b, opts)) << write_ssg1(a) << write_ssg1(b);
    partial += fast.kind == AssociabilityKind::PartiallyDissociated;
  }
  EXPECT_GT(partial, 50);
}

TEST(Associability, GreedyAboveLimitIsLowerBound) {
  std::mt19937_64 rng(5);
  oracles::RandomStateOptions o;
  o.min_vertices = 7;
  o.max_vertices = 8;
  for (int trial = 0; trial < 40; ++trial) {
    const SpaceState a = oracles::random_state(rng, o);
    const SpaceState b = oracles::random_mutation(rng, a, o);
    const CommonSubgraph greedy = max_common_connected_subgraph(a, b, 4);
    const CommonSubgraph exact = max_common_connected_subgraph(a, b, 8);
    EXPECT_FALSE(greedy.exact);
    EXPECT_TRUE(exact.exact);
    EXPECT_LE(greedy.size, exact.size);
    EXPECT_EQ(max_common_connected_subgraph(b, a, 4).size, greedy.size);
  }
  AssociabilityOptions lim;
  lim.exact_vertex_limit = 2;
  EXPECT_TRUE(classify_associability(testing::path({1, 1, 1}), testing::path({1, 1, 2}), lim).overlap_is_lower_bound);
}

TEST(Associability, MappingIsAValidEmbedding) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const SpaceState a = oracles::random_state(rng);
    const SpaceState b = oracles::random_mutation(rng, a);
    const CommonSubgraph c = max_common_connected_subgraph(a, b);
    ASSERT_EQ(static_cast<int>(c.mapping.size()), c.size);
    for (const auto &[x, y] : c.mapping) {
      EXPECT_EQ(a.fields[x].species_tag, b.fields[y].species_tag);
      for (const auto &[x2, y2] : c.mapping) {
        if (x2 <= x) continue;
        const int ea = a.geometry.find_edge(x, x2), eb = b.geometry.find_edge(y, y2);
        ASSERT_EQ(ea < 0, eb < 0);
        if (ea >= 0) {
          EXPECT_EQ(a.geometry.edges()[ea].length, b.geometry.edges()[eb].length);
        }
      }
    }
  }
}

TEST(AssociabilityTable, MatchesDirectClassification) {
  std::mt19937_64 rng(12);
  std::vector<SpaceState> states;
  for (int i = 0; i < 15; ++i) states.push_back(oracles::random_state(rng));
  states.push_back(states[3]);
  const AssociabilityTable table(states);
  ASSERT_EQ(table.size(), states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    EXPECT_TRUE(table.associable(i, i));
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      EXPECT_EQ(table.at(i, j), classify_associability(states[i], states[j]));
      EXPECT_EQ(table.at(j, i), table.at(i, j));
    }
  }
  EXPECT_EQ(table.at(3, 15).kind, AssociabilityKind::GloballyAssociable);
}

}  // namespace
}  // namespace spacestate
