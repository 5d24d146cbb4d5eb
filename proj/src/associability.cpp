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

#include "spacestate/associability.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

#include "spacestate/canonical.hpp"

namespace spacestate {

std::string_view to_string(AssociabilityKind kind) {
  switch (kind) {
    case AssociabilityKind::GloballyAssociable:
      return "globally_associable";
    case AssociabilityKind::PartiallyDissociated:
      return "partially_dissociated";
    case AssociabilityKind::CompletelyDissociated:
      return "completely_dissociated";
  }
  return "?";
}

namespace {

class CommonSubgraphSearch {
 public:
  CommonSubgraphSearch(const SpaceState &a, const SpaceState &b)
      : a_(a), b_(b), na_(a.vertex_count()), nb_(b.vertex_count()) {
    std::vector<Rational> lengths;
    for (const auto &e : a.geometry.edges()) lengths.push_back(e.length);
    for (const auto &e : b.geometry.edges()) lengths.push_back(e.length);
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    auto id_of = [&](const Rational &q) {
      return static_cast<int>(std::lower_bound(lengths.begin(), lengths.end(), q) -
                              lengths.begin() + 1);
    };
    adj_a_.assign(static_cast<std::size_t>(na_) * na_, 0);
    adj_b_.assign(static_cast<std::size_t>(nb_) * nb_, 0);
    for (const auto &e : a.geometry.edges()) adj_a_[e.u * na_ + e.v] = adj_a_[e.v * na_ + e.u] = id_of(e.length);
    for (const auto &e : b.geometry.edges()) adj_b_[e.u * nb_ + e.v] = adj_b_[e.v * nb_ + e.u] = id_of(e.length);
    map_a_.assign(na_, -1);
    used_b_.assign(nb_, 0);
    excluded_.assign(na_, 0);
  }

  CommonSubgraph exact() {
    upper_ = std::min(na_, nb_);
    for (int u = 0; u < na_ && best_ < upper_; ++u) {
      seed_ = u;
      for (int v = 0; v < nb_ && best_ < upper_; ++v) {
        if (!try_map(u, v)) continue;
        extend();
        unmap(u, v);
      }
    }
    return {best_, true, best_mapping_};
  }

  CommonSubgraph greedy() {
    for (int u = 0; u < na_; ++u) {
      seed_ = u;
      for (int v = 0; v < nb_; ++v) {
        if (!try_map(u, v)) continue;
        std::vector<std::pair<int, int>> added;
        while (true) {
          auto next = first_extension();
          if (!next) break;
          try_map(next->first, next->second);
          added.push_back(*next);
        }
        record();
        for (auto it = added.rbegin(); it != added.rend(); ++it) unmap(it->first, it->second);
        unmap(u, v);
      }
    }
    return {best_, false, best_mapping_};
  }

 private:
  bool labels_match(int x, int y) const {
    const auto &fa = a_.fields[x];
    const auto &fb = b_.fields[y];
    if (fa.species_tag != fb.species_tag || fa.matter_amplitude != fb.matter_amplitude) return false;
    if (!fa.charged()) return fa.u1_phase == fb.u1_phase;
    if (offset_) return fa.u1_phase + *offset_ == fb.u1_phase;
    return true;
  }

  bool consistent(int x, int y) const {
    if (used_b_[y] || map_a_[x] >= 0 || !labels_match(x, y)) return false;
    for (int u : mapped_) {
      if (adj_a_[x * na_ + u] != adj_b_[y * nb_ + map_a_[u]]) return false;
    }
    return true;
  }

  bool try_map(int x, int y) {
    if (!consistent(x, y)) return false;
    map_a_[x] = y;
    used_b_[y] = 1;
    mapped_.push_back(x);
    if (a_.fields[x].charged()) {
      if (!offset_) offset_ = b_.fields[y].u1_phase - a_.fields[x].u1_phase;
      ++charged_mapped_;
    }
    return true;
  }

  void unmap(int x, int y) {
    map_a_[x] = -1;
    used_b_[y] = 0;
    mapped_.pop_back();
    if (a_.fields[x].charged() && --charged_mapped_ == 0) offset_.reset();
  }

  // Smallest unmapped, unexcluded vertex of a above the seed with a mapped neighbour.
  int frontier() const {
    for (int x = seed_ + 1; x < na_; ++x) {
      if (map_a_[x] >= 0 || excluded_[x]) continue;
      for (int u : mapped_) {
        if (adj_a_[x * na_ + u]) return x;
      }
    }
    return -1;
  }

  std::optional<std::pair<int, int>> first_extension() const {
    for (int x = 0; x < na_; ++x) {
      if (map_a_[x] >= 0) continue;
      bool touches = std::any_of(mapped_.begin(), mapped_.end(),
                                 [&](int u) { return adj_a_[x * na_ + u] != 0; });
      if (!touches) continue;
      for (int y = 0; y < nb_; ++y) {
        if (consistent(x, y)) return std::pair{x, y};
      }
    }
    return std::nullopt;
  }

  void record() {
    int size = static_cast<int>(mapped_.size());
    if (size > best_) {
      best_ = size;
      best_mapping_.clear();
      for (int u : mapped_) best_mapping_.emplace_back(u, map_a_[u]);
    }
  }

  void extend() {
    record();
    if (best_ >= upper_) return;
    int x = frontier();
    if (x < 0) return;
    int open = 0;
    for (int u = seed_ + 1; u < na_; ++u) open += (map_a_[u] < 0 && !excluded_[u]);
    int size = static_cast<int>(mapped_.size());
    if (size + std::min(open, nb_ - size) <= best_) return;
    for (int y = 0; y < nb_; ++y) {
      if (!try_map(x, y)) continue;
      extend();
      unmap(x, y);
      if (best_ >= upper_) return;
    }
    excluded_[x] = 1;
    extend();
    excluded_[x] = 0;
  }

  const SpaceState &a_;
  const SpaceState &b_;
  int na_, nb_;
  std::vector<int> adj_a_, adj_b_;
  std::vector<int> map_a_;
  std::vector<char> used_b_, excluded_;
  std::vector<int> mapped_;
  std::optional<Phase> offset_;
  int charged_mapped_ = 0;
  int seed_ = 0;
  int upper_ = 0;
  int best_ = 0;
  std::vector<std::pair<int, int>> best_mapping_;
};

}  // namespace

CommonSubgraph max_common_connected_subgraph(const SpaceState &a, const SpaceState &b,
                                             int exact_vertex_limit) {
  if (a.vertex_count() <= exact_vertex_limit && b.vertex_count() <= exact_vertex_limit) {
    return CommonSubgraphSearch(a, b).exact();
  }
  // Greedy from both sides keeps the bound symmetric.
  CommonSubgraph ab = CommonSubgraphSearch(a, b).greedy();
  CommonSubgraph ba = CommonSubgraphSearch(b, a).greedy();
  if (ba.size > ab.size) {
    for (auto &p : ba.mapping) std::swap(p.first, p.second);
    return ba;
  }
  return ab;
}

Associability classify_associability(const SpaceState &a, const SpaceState &b,
                                     const AssociabilityOptions &options) {
  Associability out;
  if (is_gauge_equivalent(a, b)) {
    out.kind = AssociabilityKind::GloballyAssociable;
    out.overlap_fraction = Rational(1);
    out.common_vertices = a.vertex_count();
    return out;
  }
  CommonSubgraph common = max_common_connected_subgraph(a, b, options.exact_vertex_limit);
  const int larger = std::max(a.vertex_count(), b.vertex_count());
  out.common_vertices = common.size;
  out.overlap_fraction = Rational(common.size, larger);
  out.overlap_is_lower_bound = !common.exact;
  out.kind = (common.size >= options.k_min && out.overlap_fraction >= options.min_overlap)
                 ? AssociabilityKind::PartiallyDissociated
                 : AssociabilityKind::CompletelyDissociated;
  return out;
}

}  // namespace spacestate
