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
 * Macro-branch tracking over an evolved series, horizon-bounded
 * irreversibility, and the forward/backward branching asymmetry run.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spacestate/associability_table.hpp"
#include "spacestate/dynamics.hpp"
#include "spacestate/macrostates.hpp"
#include "spacestate/wavefunctional.hpp"

namespace spacestate {

struct BranchNode {
  int id = 0;
  std::int64_t epoch = 0;  ///< position in the series
  MacroLabel label;
  std::vector<BasisKey> members;  ///< sorted
  std::vector<SpaceState> member_states;
  double weight = 0;
  int parent = -1;
  std::vector<int> children;
};

enum class BranchEventKind { Branch, Merge };

struct BranchEvent {
  std::int64_t epoch = 0;  ///< epoch of the children
  BranchEventKind kind = BranchEventKind::Branch;
  int parent_id = -1;
  std::vector<int> child_ids;
  std::vector<double> weights;  ///< child weights
  /// Squared norm of the union of the children's members, summed directly
  /// from the state at the event epoch.
  double parent_weight = 0;
  /// Weight of the parent node one epoch earlier.
  double parent_prior_weight = 0;
  /// Merge only: every previous node sharing a key with the merged node.
  std::vector<int> sources;
  std::optional<bool> irreversible;
  int horizon = 0;
};

struct BranchTree {
  std::vector<BranchNode> nodes;
  std::vector<std::vector<int>> epoch_nodes;  ///< node ids per epoch, by smallest member key
  std::vector<BranchEvent> events;

  std::vector<int> roots() const;
  /// Ids of the descendants of node (itself included) living at epoch.
  std::vector<int> descendants_at(int node, std::int64_t epoch) const;
};

struct TrackOptions {
  AssociabilityOptions association;
  /// Basis and rule graph; enables the table and the distance fallback.
  const Generator *generator = nullptr;
  /// Classification over generator->basis, reused across calls.
  const AssociabilityTable *table = nullptr;
};

/**
 * Per epoch, nodes are connected components of the associability graph on
 * the support, split by macro label. A node's parent is the previous-epoch
 * node sharing the most keys; without a shared key, the previous node
 * nearest in the rule graph of the generator; ties go to the node with the
 * smallest key. Throws EmptySupport on an empty series or state.
 */
BranchTree track(const std::vector<Wavefunctional> &series, const MacroPartition &partition,
                 const TrackOptions &options = {});

/**
 * A branch event is reversible when keys from the subtrees of two different
 * children are associable at some epoch in (e, e + horizon]. Merge events are
 * left unmarked.
 */
void irreversibility_scan(BranchTree &tree, int horizon, const TrackOptions &options = {});

/// Natural-log entropy of the normalized node weights at one epoch.
double branch_entropy(const BranchTree &tree, std::size_t epoch);

std::string branch_events_jsonl(const BranchTree &tree);
/// epoch,branch_count,entropy,branch_events,merge_events,weight
std::string branch_summary_csv(const BranchTree &tree);

struct DegenerateSpec {
  int vertices = 1;
  /// "path", "cycle" or "complete".
  std::string topology = "path";
  int species = 1;
  Rational matter{0};
  Phase phase{};
};

/// All edge lengths 0 and identical vertex records.
SpaceState degenerate_state(const DegenerateSpec &spec);
bool is_degenerate(const SpaceState &s);

struct AsymmetryOptions {
  int epochs = 10;
  double dt = 0.1;
  int steps = 1;
  /// Each coupling is scaled by 1 + jitter (2u - 1), u uniform per (seed, rule).
  double coupling_jitter = 0.0;
  TrackOptions track;
  EvolveOptions evolve;
};

struct EpochStats {
  std::int64_t epoch = 0;
  std::size_t branch_count = 0;
  double entropy = 0;
  std::size_t branch_events = 0;
  std::size_t merge_events = 0;
};

struct AsymmetryRun {
  std::uint64_t seed = 0;
  std::vector<EpochStats> forward;
  std::vector<EpochStats> backward;  ///< backward[k] is k epochs back from the final state
  std::size_t roots = 0;
  /// Largest |sum of child weights - parent_weight| over forward branch events.
  double max_conservation_error = 0;

  bool forward_monotone() const;
};

std::vector<EpochStats> epoch_stats(const BranchTree &tree);

/// Evolves the initial state forward, then from the final state with -dt,
/// tracking branches in both directions. gen must contain initial.
AsymmetryRun asymmetry_experiment(const Generator &gen, const Wavefunctional &initial,
                                  const std::vector<RewriteRule> &rules, const MacroPartition &partition,
                                  std::uint64_t seed, const AsymmetryOptions &options);

std::string asymmetry_csv(const std::vector<AsymmetryRun> &runs);
std::string asymmetry_seeds_csv(const std::vector<AsymmetryRun> &runs);

}  // namespace spacestate
