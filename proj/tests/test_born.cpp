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

#include <cmath>
#include <random>

#include "spacestate/born.hpp"
#include "spacestate/errors.hpp"
#include "support.hpp"

namespace spacestate {
namespace {

using testing::vf;

SpaceState item_state(std::int64_t matter) { return make_state({vf(1, matter)}, {}); }

/// Normalized view with r_k^2 = weights[k] on item_state(matter[k]).
DensitizedView view_of(const std::vector<double> &weights, const std::vector<std::int64_t> &matter) {
  Wavefunctional psi;
  for (std::size_t k = 0; k < weights.size(); ++k) psi.add(item_state(matter[k]), std::sqrt(weights[k]));
  return gauge_absorb(psi);
}

std::vector<std::int64_t> iota(std::size_t n) {
  std::vector<std::int64_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::int64_t>(i);
  return v;
}

TEST(SplitCell, HalvesWeight) {
  const CellItem item{basis_key(item_state(0)), 0.8};
  const auto [a, b] = split_cell(item);
  EXPECT_EQ(a.key.graph, item.key.graph);
  EXPECT_EQ(a.key.cell.bits(), "0");
  EXPECT_EQ(b.key.cell.bits(), "1");
  EXPECT_DOUBLE_EQ(a.density, 0.8 / std::sqrt(2.0));
  EXPECT_EQ(a.density, b.density);
  EXPECT_NEAR(a.density * a.density + b.density * b.density, 0.64, 1e-15);
  const auto [c, d] = split_cell(a);
  EXPECT_EQ(d.key.cell.bits(), "01");
  EXPECT_NEAR(c.density * c.density, 0.16, 1e-15);
  EXPECT_THROW(split_cell(CellItem{item.key, 0.0}), ZeroDensity);
}

TEST(Refinement, HalfQuarterQuarter) {
  const RefinementTree tree = build_refinement(view_of({0.5, 0.25, 0.25}, {0, 1, 2}), 2);
  ASSERT_EQ(tree.depth(), 2);
  std::size_t big = 0;
  for (std::size_t i = 0; i < tree.items.size(); ++i) {
    if (tree.items[i].density > tree.items[big].density) big = i;
  }
  auto weight_of = [&](int depth, std::size_t cell, bool of_big) {
    const RefinementLevel &level = tree.levels[depth];
    double w = 0;
    for (std::size_t p = level.cell_begin[cell]; p < level.cell_begin[cell + 1]; ++p) {
      if ((level.pieces[p].item == big) == of_big) w += level.pieces[p].weight.get_d();
    }
    return w;
  };
  const bool big_first = tree.levels[1].pieces[0].item == big;
  const std::size_t a = big_first ? 0 : 1;
  EXPECT_NEAR(weight_of(1, a, true), 0.5, 1e-15);
  EXPECT_NEAR(weight_of(1, a, false), 0.0, 1e-15);
  EXPECT_NEAR(weight_of(1, 1 - a, false), 0.5, 1e-15);
  EXPECT_NEAR(weight_of(1, 1 - a, true), 0.0, 1e-15);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(tree.cell_weight(2, c).get_d(), 0.25, 1e-15);
}

TEST(Refinement, DyadicWeightsAreExact) {
  // r = 3/4, 1/2, 1/4, 1/4, 1/4: squares 9/16 + 4/16 + 3 * 1/16 = 1.
  const RefinementTree tree = build_refinement(view_of({0.5625, 0.25, 0.0625, 0.0625, 0.0625}, iota(5)), 4);
  EXPECT_EQ(tree.total, mpq_class(1));
  const RefinementLevel &four = tree.levels[4];
  ASSERT_EQ(four.cell_count(), 16u);
  std::size_t pieces = 0;
  for (std::size_t c = 0; c < 16; ++c) {
    EXPECT_EQ(tree.cell_weight(4, c), mpq_class(1, 16));
    EXPECT_EQ(four.cell_begin[c + 1] - four.cell_begin[c], 1u);
    pieces += four.cell_begin[c + 1] - four.cell_begin[c];
  }
  EXPECT_EQ(pieces, 16u);
  for (const CellPiece &piece : four.pieces) EXPECT_EQ(piece.weight, mpq_class(1, 16));
}

TEST(Refinement, CellsAreExactlyEqualAndNested) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> w(50);
  double sum = 0;
  for (double &x : w) sum += (x = u(rng));
  for (double &x : w) x /= sum;
  const RefinementTree tree = build_refinement(view_of(w, iota(50)), 10);
  mpq_class total = 0;
  for (const RefinementItem &item : tree.items) total += item.weight;
  EXPECT_EQ(total, tree.total);
  for (int n = 0; n <= 10; ++n) {
    const RefinementLevel &level = tree.levels[n];
    ASSERT_EQ(level.cell_count(), std::size_t{1} << n);
    std::vector<mpq_class> per_item(tree.items.size(), 0);
    for (std::size_t c = 0; c < level.cell_count(); ++c) {
      mpq_class cell = 0;
      for (std::size_t p = level.cell_begin[c]; p < level.cell_begin[c + 1]; ++p) {
        ASSERT_GT(level.pieces[p].weight, 0);
        cell += level.pieces[p].weight;
        per_item[level.pieces[p].item] += level.pieces[p].weight;
      }
      ASSERT_EQ(cell, tree.total / mpq_class(1 << n));
      ASSERT_EQ(cell, tree.cell_weight(n, c));
    }
    for (std::size_t i = 0; i < tree.items.size(); ++i) ASSERT_EQ(per_item[i], tree.items[i].weight);
    if (n > 0) {
      for (std::size_t c = 0; c < level.cell_count(); ++c) {
        const RefinementLevel &up = tree.levels[n - 1];
        const std::size_t pc = RefinementTree::parent(c);
        for (std::size_t p = level.cell_begin[c]; p < level.cell_begin[c + 1]; ++p) {
          bool found = false;
          for (std::size_t q = up.cell_begin[pc]; q < up.cell_begin[pc + 1]; ++q) {
            found = found || up.pieces[q].item == level.pieces[p].item;
          }
          ASSERT_TRUE(found);
        }
      }
    }
  }
}

TEST(Refinement, Guards) {
  EXPECT_THROW(build_refinement(view_of({1.0}, {0}), kMaxRefinementDepth + 1), DepthExceeded);
  EXPECT_THROW(build_refinement(view_of({0.5, 0.4}, {0, 1}), 3), InvalidState);
  EXPECT_NO_THROW(build_refinement(view_of({1.0}, {0}), 12));
}

TEST(Counting, ThreeQuartersExample) {
  const MacroPartition p = make_partition("total_matter", {{"buckets", "2"}});
  Wavefunctional psi;
  psi.add(item_state(0), 0.5);
  for (int species = 1; species <= 3; ++species) psi.add(make_state({vf(species, 1)}, {}), 0.5);
  const DensitizedView view = gauge_absorb(psi);
  const RefinementTree tree = build_refinement(view, 2, &p);
  const CountReport r = count_estimate(tree, p, 2);
  EXPECT_EQ(r.straddlers, 0u);
  ASSERT_EQ(r.labels.size(), 3u);
  EXPECT_EQ(r.labels[p.label_index("matter:1")].n_alpha, 3u);
  EXPECT_EQ(r.labels[p.label_index("matter:1")].estimate, 0.75);
  EXPECT_EQ(r.labels[p.label_index("matter:1")].exact, 0.75);
  EXPECT_EQ(r.labels[p.label_index("matter:0")].estimate, 0.25);
  EXPECT_THROW(count_estimate(tree, p, 3), DepthExceeded);
  const CountReport r1 = count_estimate(tree, p, 1);
  EXPECT_EQ(r1.straddlers, 1u);
  EXPECT_EQ(r1.bound(), 0.5);
}

TEST(Counting, EstimateWithinStraddlerBound) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<std::int64_t> m(0, 9);
  const MacroPartition p = make_partition("total_matter", {{"grid", "2"}, {"buckets", "4"}});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> w(30);
    double sum = 0;
    for (double &x : w) sum += (x = u(rng));
    for (double &x : w) x /= sum;
    std::vector<std::int64_t> matter(30);
    for (std::size_t i = 0; i < 30; ++i) matter[i] = static_cast<std::int64_t>(i) * 10 + m(rng);
    for (auto &x : matter) x %= 10;
    Wavefunctional psi;
    for (std::size_t k = 0; k < 30; ++k) {
      SpaceState s = item_state(matter[k]);
      s.cell_index = CellPath(std::string(1 + k % 5, k % 2 ? '1' : '0'));
      psi.add(s, std::sqrt(w[k]));
    }
    psi = normalize(psi);
    const RefinementTree tree = build_refinement(gauge_absorb(psi), 14, &p);
    double prev = 2;
    for (int n = 0; n <= 14; ++n) {
      const CountReport r = count_estimate(tree, p, n);
      std::size_t present = 0;
      for (const LabelCount &l : r.labels) present += l.exact > 0;
      EXPECT_LE(r.straddlers, present - 1);
      EXPECT_LE(r.bound(), prev + 1e-300);
      prev = r.bound();
      for (const LabelCount &l : r.labels) {
        EXPECT_LE(l.estimate, l.exact + 1e-15);
        EXPECT_LE(l.exact - l.estimate, r.bound() + 1e-15);
      }
    }
  }
}

TEST(Sampler, FrequencyMatchesWeight) {
  const MacroPartition p = make_partition("total_matter", {{"buckets", "2"}});
  const DensitizedView view = view_of({0.64, 0.36}, {0, 1});
  const SampleReport r = sample_selflocation(view, p, 1000000, 12345);
  const std::size_t a = static_cast<std::size_t>(p.label_index("matter:0"));
  EXPECT_NEAR(r.frequency(a), 0.64, 0.002);
  EXPECT_DOUBLE_EQ(r.exact[a], 0.64);
  EXPECT_EQ(r.counts[a] + r.counts[1 - a] + r.counts[2], r.samples);
  const SampleReport again = sample_selflocation(view, p, 1000000, 12345);
  EXPECT_EQ(again.counts, r.counts);
  const ChiSquared chi = chi_squared_test(r.counts, r.exact);
  EXPECT_EQ(chi.dof, 1);
  EXPECT_GT(chi.p_value, 1e-3);
}

TEST(ChiSquaredTest, KnownValues) {
  // (60-50)^2/50 + (40-50)^2/50 = 4 on one degree of freedom.
  const ChiSquared c = chi_squared_test({60, 40}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(c.statistic, 4.0);
  EXPECT_EQ(c.dof, 1);
  EXPECT_NEAR(c.p_value, 0.04550026389635842, 1e-12);
  const ChiSquared skip = chi_squared_test({30, 0, 70}, {0.3, 0.0, 0.7});
  EXPECT_EQ(skip.dof, 1);
  EXPECT_DOUBLE_EQ(skip.statistic, 0.0);
  EXPECT_DOUBLE_EQ(skip.p_value, 1.0);
}

}  // namespace
}  // namespace spacestate
