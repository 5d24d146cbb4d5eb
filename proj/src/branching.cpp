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

#include "spacestate/branching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "spacestate/decimal.hpp"
#include "spacestate/errors.hpp"
#include "spacestate/kernels.hpp"
#include "spacestate/rng.hpp"

namespace spacestate {

std::vector<int> BranchTree::roots() const {
  std::vector<int> out;
  for (const auto &n : nodes) {
    if (n.parent < 0) out.push_back(n.id);
  }
  return out;
}

std::vector<int> BranchTree::descendants_at(int node, std::int64_t epoch) const {
  std::vector<int> out;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const auto &n = nodes.at(id);
    if (n.epoch == epoch) {
      out.push_back(id);
    } else if (n.epoch < epoch) {
      stack.insert(stack.end(), n.children.rbegin(), n.children.rend());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class Associations {
 public:
  explicit Associations(const TrackOptions &options) : options_(options) {}

  bool operator()(const BasisKey &ka, const SpaceState &a, const BasisKey &kb, const SpaceState &b) const {
    if (options_.table && options_.generator) {
      const int i = options_.generator->index_of(ka);
      const int j = options_.generator->index_of(kb);
      if (i >= 0 && j >= 0) return options_.table->associable(i, j);
    }
    return classify_associability(a, b, options_.association).kind != AssociabilityKind::CompletelyDissociated;
  }

 private:
  const TrackOptions &options_;
};

int find_root(std::vector<int> &parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

std::vector<std::vector<int>> rule_graph(const Generator &gen) {
  std::vector<std::vector<int>> adj(gen.dimension());
  for (std::size_t i = 0; i < gen.dimension(); ++i) {
    for (const auto &t : gen.transitions[i]) {
      if (t.target == static_cast<int>(i)) continue;
      adj[i].push_back(t.target);
      adj[t.target].push_back(static_cast<int>(i));
    }
  }
  for (auto &list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

std::vector<int> bfs_distance(const std::vector<std::vector<int>> &adj, const std::vector<int> &sources) {
  std::vector<int> dist(adj.size(), std::numeric_limits<int>::max());
  std::deque<int> queue;
  for (int s : sources) {
    if (s >= 0 && dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : adj[v]) {
      if (dist[w] == std::numeric_limits<int>::max()) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

double weight_of(const Wavefunctional &psi, const std::vector<BasisKey> &keys) {
  double sum = 0;
  for (const auto &k : keys) sum += std::norm(psi.amplitude(k));
  return sum;
}

}  // namespace

BranchTree track(const std::vector<Wavefunctional> &series, const MacroPartition &partition,
                 const TrackOptions &options) {
  if (series.empty()) throw EmptySupport("empty series");
  const Associations associable(options);
  std::vector<std::vector<int>> adj;
  if (options.generator) adj = rule_graph(*options.generator);

  BranchTree tree;
  for (std::size_t t = 0; t < series.size(); ++t) {
    const Wavefunctional &psi = series[t];
    if (psi.empty()) throw EmptySupport("empty support at epoch " + std::to_string(t));
    std::vector<const BasisKey *> keys;
    std::vector<const WaveEntry *> entries;
    for (const auto &[k, e] : psi.entries()) {
      keys.push_back(&k);
      entries.push_back(&e);
    }
    const std::size_t n = keys.size();
    std::vector<char> linked(n * n, 0);
    kernels::for_each_pair(n, [&](std::size_t i, std::size_t j) {
      linked[i * n + j] = associable(*keys[i], entries[i]->state, *keys[j], entries[j]->state);
    });
    std::vector<int> uf(n);
    std::iota(uf.begin(), uf.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!linked[i * n + j]) continue;
        int a = find_root(uf, static_cast<int>(i)), b = find_root(uf, static_cast<int>(j));
        if (a != b) uf[std::max(a, b)] = std::min(a, b);
      }
    }
    // Group by (component, label); groups are ordered by their first member.
    std::map<std::pair<int, MacroLabel>, std::size_t> group_of;
    std::vector<std::vector<int>> groups;
    std::vector<MacroLabel> group_label;
    for (std::size_t i = 0; i < n; ++i) {
      auto label = partition.classify(entries[i]->state);
      auto [it, fresh] = group_of.try_emplace({find_root(uf, static_cast<int>(i)), label}, groups.size());
      if (fresh) {
        groups.emplace_back();
        group_label.push_back(label);
      }
      groups[it->second].push_back(static_cast<int>(i));
    }
    std::vector<int> ids;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      BranchNode node;
      node.id = static_cast<int>(tree.nodes.size());
      node.epoch = static_cast<std::int64_t>(t);
      node.label = group_label[g];
      for (int i : groups[g]) {
        node.members.push_back(*keys[i]);
        node.member_states.push_back(entries[i]->state);
        node.weight += std::norm(entries[i]->amplitude);
      }
      ids.push_back(node.id);
      tree.nodes.push_back(std::move(node));
    }
    tree.epoch_nodes.push_back(ids);
    if (t == 0) continue;

    const auto &prev = tree.epoch_nodes[t - 1];
    std::map<BasisKey, std::size_t> prev_position;
    for (std::size_t p = 0; p < prev.size(); ++p) {
      for (const auto &k : tree.nodes[prev[p]].members) prev_position.emplace(k, p);
    }
    std::vector<std::vector<int>> distances;
    std::vector<BranchEvent> merges;
    for (int id : ids) {
      BranchNode &node = tree.nodes[id];
      std::map<std::size_t, int> shared;
      for (const auto &k : node.members) {
        auto it = prev_position.find(k);
        if (it != prev_position.end()) ++shared[it->second];
      }
      std::optional<std::size_t> best;
      if (!shared.empty()) {
        int most = 0;
        for (const auto &[p, count] : shared) {
          if (count > most) {
            most = count;
            best = p;
          }
        }
        if (shared.size() >= 2) {
          BranchEvent ev;
          ev.epoch = node.epoch;
          ev.kind = BranchEventKind::Merge;
          ev.child_ids = {id};
          ev.weights = {node.weight};
          ev.parent_weight = weight_of(psi, node.members);
          for (const auto &[p, count] : shared) ev.sources.push_back(prev[p]);
          merges.push_back(std::move(ev));
        }
      } else if (options.generator) {
        if (distances.empty()) {
          for (int p : prev) {
            std::vector<int> sources;
            for (const auto &k : tree.nodes[p].members) sources.push_back(options.generator->index_of(k));
            distances.push_back(bfs_distance(adj, sources));
          }
        }
        int nearest = std::numeric_limits<int>::max();
        for (std::size_t p = 0; p < prev.size(); ++p) {
          for (const auto &k : node.members) {
            const int v = options.generator->index_of(k);
            if (v >= 0 && distances[p][v] < nearest) {
              nearest = distances[p][v];
              best = p;
            }
          }
        }
      }
      if (best) {
        node.parent = prev[*best];
        tree.nodes[node.parent].children.push_back(id);
      }
    }
    for (int p : prev) {
      const BranchNode &parent = tree.nodes[p];
      if (parent.children.size() < 2) continue;
      BranchEvent ev;
      ev.epoch = static_cast<std::int64_t>(t);
      ev.kind = BranchEventKind::Branch;
      ev.parent_id = p;
      ev.child_ids = parent.children;
      std::vector<BasisKey> all;
      for (int c : parent.children) {
        ev.weights.push_back(tree.nodes[c].weight);
        all.insert(all.end(), tree.nodes[c].members.begin(), tree.nodes[c].members.end());
      }
      std::sort(all.begin(), all.end());
      ev.parent_weight = weight_of(psi, all);
      ev.parent_prior_weight = parent.weight;
      tree.events.push_back(std::move(ev));
    }
    for (auto &ev : merges) {
      ev.parent_id = tree.nodes[ev.child_ids[0]].parent;
      ev.parent_prior_weight = ev.parent_id >= 0 ? tree.nodes[ev.parent_id].weight : 0.0;
      tree.events.push_back(std::move(ev));
    }
  }
  return tree;
}

void irreversibility_scan(BranchTree &tree, int horizon, const TrackOptions &options) {
  if (horizon < 0) throw InvalidState("negative horizon");
  const Associations associable(options);
  const auto last = static_cast<std::int64_t>(tree.epoch_nodes.size()) - 1;
  for (auto &ev : tree.events) {
    if (ev.kind != BranchEventKind::Branch) continue;
    ev.horizon = horizon;
    bool reversible = false;
    for (std::int64_t e = ev.epoch + 1; e <= std::min(ev.epoch + horizon, last) && !reversible; ++e) {
      std::vector<std::vector<std::pair<const BasisKey *, const SpaceState *>>> sides;
      for (int c : ev.child_ids) {
        auto &side = sides.emplace_back();
        for (int d : tree.descendants_at(c, e)) {
          const auto &node = tree.nodes[d];
          for (std::size_t m = 0; m < node.members.size(); ++m) side.emplace_back(&node.members[m], &node.member_states[m]);
        }
      }
      for (std::size_t a = 0; a < sides.size() && !reversible; ++a) {
        for (std::size_t b = a + 1; b < sides.size() && !reversible; ++b) {
          for (const auto &x : sides[a]) {
            for (const auto &y : sides[b]) {
              if (associable(*x.first, *x.second, *y.first, *y.second)) {
                reversible = true;
                break;
              }
            }
            if (reversible) break;
          }
        }
      }
    }
    ev.irreversible = !reversible;
  }
}

double branch_entropy(const BranchTree &tree, std::size_t epoch) {
  const auto &ids = tree.epoch_nodes.at(epoch);
  double total = 0;
  for (int id : ids) total += tree.nodes[id].weight;
  double h = 0;
  for (int id : ids) {
    const double p = tree.nodes[id].weight / total;
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

std::vector<EpochStats> epoch_stats(const BranchTree &tree) {
  std::vector<EpochStats> out;
  for (std::size_t t = 0; t < tree.epoch_nodes.size(); ++t) {
    EpochStats s;
    s.epoch = static_cast<std::int64_t>(t);
    s.branch_count = tree.epoch_nodes[t].size();
    s.entropy = branch_entropy(tree, t);
    out.push_back(s);
  }
  for (const auto &ev : tree.events) {
    auto &s = out.at(ev.epoch);
    (ev.kind == BranchEventKind::Branch ? s.branch_events : s.merge_events) += 1;
  }
  return out;
}

std::string branch_events_jsonl(const BranchTree &tree) {
  std::string out;
  for (const auto &ev : tree.events) {
    nlohmann::ordered_json j;
    j["epoch"] = ev.epoch;
    j["event"] = ev.kind == BranchEventKind::Branch ? "branch" : "merge";
    j["parent_id"] = ev.parent_id;
    j["child_ids"] = ev.child_ids;
    j["weights"] = ev.weights;
    if (ev.irreversible) {
      j["irreversible"] = *ev.irreversible;
    } else {
      j["irreversible"] = nullptr;
    }
    j["horizon"] = ev.horizon;
    j["parent_weight"] = ev.parent_weight;
    j["parent_prior_weight"] = ev.parent_prior_weight;
    if (ev.kind == BranchEventKind::Merge) j["sources"] = ev.sources;
    out += j.dump() + "\n";
  }
  return out;
}

std::string branch_summary_csv(const BranchTree &tree) {
  std::string out = "epoch,branch_count,entropy,branch_events,merge_events,weight\n";
  for (const auto &s : epoch_stats(tree)) {
    double weight = 0;
    for (int id : tree.epoch_nodes[s.epoch]) weight += tree.nodes[id].weight;
    out += std::to_string(s.epoch) + "," + std::to_string(s.branch_count) + "," + format_double(s.entropy) + "," +
           std::to_string(s.branch_events) + "," + std::to_string(s.merge_events) + "," + format_double(weight) + "\n";
  }
  return out;
}

SpaceState degenerate_state(const DegenerateSpec &spec) {
  if (spec.vertices < 1) throw InvalidState("degenerate state needs at least one vertex");
  std::vector<Edge> edges;
  const int n = spec.vertices;
  if (spec.topology == "path" || spec.topology == "cycle") {
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, Rational(0)});
    if (spec.topology == "cycle" && n >= 3) edges.push_back({0, n - 1, Rational(0)});
  } else if (spec.topology == "complete") {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) edges.push_back({i, j, Rational(0)});
    }
  } else {
    throw InvalidState("unknown topology '" + spec.topology + "'");
  }
  FieldConfig fields(n, VertexField{spec.species, spec.matter, spec.phase});
  return make_state(std::move(fields), std::move(edges));
}

bool is_degenerate(const SpaceState &s) {
  for (const auto &e : s.geometry.edges()) {
    if (e.length != Rational(0)) return false;
  }
  return std::all_of(s.fields.begin(), s.fields.end(), [&](const VertexField &f) { return f == s.fields.front(); });
}

bool AsymmetryRun::forward_monotone() const {
  for (std::size_t k = 1; k < forward.size(); ++k) {
    if (forward[k].branch_count < forward[k - 1].branch_count) return false;
  }
  return true;
}

namespace {

std::vector<Wavefunctional> run_series(const Stepper &step, const Wavefunctional &start, int epochs) {
  std::vector<Wavefunctional> series{start};
  series.front().set_epoch(0);
  for (int e = 1; e <= epochs; ++e) {
    series.push_back(step(series.back()));
    series.back().set_epoch(e);
  }
  return series;
}

}  // namespace

AsymmetryRun asymmetry_experiment(const Generator &gen, const Wavefunctional &initial,
                                  const std::vector<RewriteRule> &rules, const MacroPartition &partition,
                                  std::uint64_t seed, const AsymmetryOptions &options) {
  if (options.epochs < 0) throw InvalidState("negative epoch count");
  std::map<int, double> couplings;
  const RandomStream jitter(seed, 0x6a17);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    couplings[rules[r].rule_id] = rules[r].coupling * (1.0 + options.coupling_jitter * (2.0 * jitter.uniform(r) - 1.0));
  }
  const Generator jittered = with_couplings(gen, couplings);
  TrackOptions track_options = options.track;
  track_options.generator = &jittered;

  AsymmetryRun run;
  run.seed = seed;
  const auto forward = run_series(Stepper(jittered, options.dt, options.steps, options.evolve), initial, options.epochs);
  const BranchTree fwd = track(forward, partition, track_options);
  run.forward = epoch_stats(fwd);
  run.roots = fwd.roots().size();
  for (const auto &ev : fwd.events) {
    if (ev.kind != BranchEventKind::Branch) continue;
    const double sum = std::accumulate(ev.weights.begin(), ev.weights.end(), 0.0);
    run.max_conservation_error = std::max(run.max_conservation_error, std::abs(sum - ev.parent_weight));
  }
  const auto backward =
      run_series(Stepper(jittered, -options.dt, options.steps, options.evolve), forward.back(), options.epochs);
  run.backward = epoch_stats(track(backward, partition, track_options));
  return run;
}

std::string asymmetry_csv(const std::vector<AsymmetryRun> &runs) {
  std::string out = "seed,direction,epoch,branch_count,entropy,branch_events,merge_events\n";
  for (const auto &run : runs) {
    for (const auto *dir : {&run.forward, &run.backward}) {
      const char *name = dir == &run.forward ? "forward" : "backward";
      for (const auto &s : *dir) {
        out += std::to_string(run.seed) + "," + name + "," + std::to_string(s.epoch) + "," +
               std::to_string(s.branch_count) + "," + format_double(s.entropy) + "," +
               std::to_string(s.branch_events) + "," + std::to_string(s.merge_events) + "\n";
      }
    }
  }
  return out;
}

std::string asymmetry_seeds_csv(const std::vector<AsymmetryRun> &runs) {
  std::string out =
      "seed,roots,forward_monotone,forward_final_count,forward_final_entropy,backward_final_count,"
      "backward_final_entropy,forward_merges,backward_merges,max_conservation_error\n";
  for (const auto &run : runs) {
    std::size_t fm = 0, bm = 0;
    for (const auto &s : run.forward) fm += s.merge_events;
    for (const auto &s : run.backward) bm += s.merge_events;
    out += std::to_string(run.seed) + "," + std::to_string(run.roots) + "," + (run.forward_monotone() ? "1" : "0") +
           "," + std::to_string(run.forward.back().branch_count) + "," + format_double(run.forward.back().entropy) +
           "," + std::to_string(run.backward.back().branch_count) + "," + format_double(run.backward.back().entropy) +
           "," + std::to_string(fm) + "," + std::to_string(bm) + "," + format_double(run.max_conservation_error) +
           "\n";
  }
  return out;
}

}  // namespace spacestate
