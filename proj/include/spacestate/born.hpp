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
 * Probabilities by counting: dyadic refinement of a densitized state into
 * equal-weight cells, the counting estimator over a macro partition, and a
 * self-location sampler.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "spacestate/macrostates.hpp"
#include "spacestate/wavefunctional.hpp"

namespace spacestate {

inline constexpr int kMaxRefinementDepth = 24;

struct CellItem {
  BasisKey key;       ///< graph key; cell is the sub-cell path
  double density = 0; ///< r
};

/// Splits an item into its two sub-cells, each with density r / sqrt(2).
std::pair<CellItem, CellItem> split_cell(const CellItem &item);

/// A piece of a support item inside one refinement cell.
struct CellPiece {
  std::size_t item = 0;  ///< index into RefinementTree::items
  CellPath cell;         ///< sub-cell path below the item's own cell_index
  mpq_class weight;      ///< exact squared weight
};

struct RefinementLevel {
  std::vector<CellPiece> pieces;
  /// Cell c holds pieces [cell_begin[c], cell_begin[c + 1]); 2^depth cells.
  std::vector<std::size_t> cell_begin;

  std::size_t cell_count() const { return cell_begin.size() - 1; }
};

struct RefinementItem {
  BasisKey key;
  SpaceState state;
  double density = 0;
  mpq_class weight;  ///< density^2, exact
  int label = -1;    ///< index into the ordering partition's labels, -1 without one
};

/**
 * Every depth n splits the support line into 2^n cells of squared weight
 * exactly total / 2^n. Depth n+1 halves each depth-n cell; the one item that
 * straddles the midpoint is cut at the exact fraction needed.
 */
struct RefinementTree {
  std::vector<RefinementItem> items;  ///< support in line order
  std::vector<RefinementLevel> levels;
  mpq_class total;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  mpq_class cell_weight(int depth, std::size_t cell) const;
  /// Index at depth n of the cell containing a depth n+1 cell.
  static std::size_t parent(std::size_t cell) { return cell / 2; }
};

/**
 * Items with r > 0 ordered by macro label (when a partition is given) then
 * key. Throws DepthExceeded beyond kMaxRefinementDepth and InvalidState when
 * the view is not normalized within 1e-12.
 */
RefinementTree build_refinement(const DensitizedView &view, int depth_max,
                                const MacroPartition *order_by = nullptr);

struct LabelCount {
  MacroLabel label;
  std::uint64_t n_alpha = 0;
  double estimate = 0;
  double exact = 0;
};

struct CountReport {
  int depth = 0;
  std::uint64_t straddlers = 0;
  std::vector<LabelCount> labels;  ///< in partition label order

  double bound() const;
};

CountReport count_estimate(const RefinementTree &tree, const MacroPartition &partition, int depth);

/// Header plus one row per (depth, label).
std::string count_reports_csv(const std::vector<CountReport> &reports);

struct SampleReport {
  std::uint64_t samples = 0;
  std::vector<MacroLabel> labels;
  std::vector<std::uint64_t> counts;
  std::vector<double> exact;

  double frequency(std::size_t i) const;
};

/**
 * Draws micro-states with probability r^2 by inverse CDF over the support in
 * key order. Draw k depends only on (seed, k).
 */
SampleReport sample_selflocation(const DensitizedView &view, const MacroPartition &partition,
                                 std::uint64_t samples, std::uint64_t seed);

std::string samples_csv(const SampleReport &report);

struct ChiSquared {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

/// Pearson goodness of fit of counts against probabilities; zero-probability
/// labels must have zero counts and are left out of the degrees of freedom.
ChiSquared chi_squared_test(const std::vector<std::uint64_t> &counts, const std::vector<double> &probabilities);

}  // namespace spacestate
