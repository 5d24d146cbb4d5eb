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

#include "spacestate/canonical.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>

#include "spacestate/errors.hpp"

namespace spacestate {

std::string CanonicalKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char c : bytes_) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

CanonicalKey CanonicalKey::from_hex(const std::string &hex) {
  if (hex.size() % 2 != 0) throw FormatError("odd-length hex key");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw FormatError("bad hex digit in key");
  };
  std::string bytes(hex.size() / 2, '\0');
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<char>(nibble(hex[2 * i]) * 16 + nibble(hex[2 * i + 1]));
  }
  return CanonicalKey(std::move(bytes));
}

namespace {

void put_u32(std::string &out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_u64(std::string &out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

auto vertex_tuple(const VertexField &f) {
  return std::tuple(f.species_tag, f.matter_amplitude, f.u1_phase.code());
}

// Color refinement with "start position" colors: a class occupying positions
// [c, c + size) of the ordered partition has color c.
class Canonicalizer {
 public:
  explicit Canonicalizer(const SpaceState &s) : n_(s.vertex_count()) {
    std::vector<VertexField> vlabels = s.fields;
    std::sort(vlabels.begin(), vlabels.end(),
              [](const auto &a, const auto &b) { return vertex_tuple(a) < vertex_tuple(b); });
    vlabels.erase(std::unique(vlabels.begin(), vlabels.end()), vlabels.end());
    vertex_table_ = vlabels;
    vlabel_.resize(n_);
    for (int v = 0; v < n_; ++v) {
      auto it = std::lower_bound(
          vlabels.begin(), vlabels.end(), s.fields[v],
          [](const auto &a, const auto &b) { return vertex_tuple(a) < vertex_tuple(b); });
      vlabel_[v] = static_cast<std::uint32_t>(it - vlabels.begin());
    }

    std::vector<Rational> lengths;
    for (const auto &e : s.geometry.edges()) lengths.push_back(e.length);
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    edge_table_ = lengths;
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
    neighbours_.resize(n_);
    for (const auto &e : s.geometry.edges()) {
      auto id = static_cast<std::uint32_t>(
          std::lower_bound(lengths.begin(), lengths.end(), e.length) - lengths.begin() + 1);
      adj_[e.u * n_ + e.v] = id;
      adj_[e.v * n_ + e.u] = id;
      neighbours_[e.u].push_back(e.v);
      neighbours_[e.v].push_back(e.u);
    }
  }

  void run() {
    std::vector<int> colors(n_);
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vlabel_[a] < vlabel_[b]; });
    for (int i = 0; i < n_; ++i) {
      int v = order[i];
      colors[v] = (i > 0 && vlabel_[order[i - 1]] == vlabel_[v]) ? colors[order[i - 1]] : i;
    }
    std::vector<int> prefix;
    search(colors, prefix);
  }

  std::vector<int> labeling() const { return best_lab_; }

  std::string key_bytes() const {
    std::string out;
    out.reserve(16 + vertex_table_.size() * 28 + edge_table_.size() * 16 + best_.size() * 4);
    put_u32(out, static_cast<std::uint32_t>(n_));
    put_u32(out, static_cast<std::uint32_t>(vertex_table_.size()));
    for (const auto &f : vertex_table_) {
      put_u32(out, static_cast<std::uint32_t>(f.species_tag));
      put_u64(out, static_cast<std::uint64_t>(f.matter_amplitude.numerator()));
      put_u64(out, static_cast<std::uint64_t>(f.matter_amplitude.denominator()));
      put_u64(out, f.u1_phase.code());
    }
    put_u32(out, static_cast<std::uint32_t>(edge_table_.size()));
    for (const auto &q : edge_table_) {
      put_u64(out, static_cast<std::uint64_t>(q.numerator()));
      put_u64(out, static_cast<std::uint64_t>(q.denominator()));
    }
    for (std::uint32_t x : best_) put_u32(out, x);
    return out;
  }

 private:
  // Refines colors to the coarsest equitable partition finer than the input.
  void refine(std::vector<int> &colors) const {
    int classes = count_classes(colors);
    std::vector<std::vector<std::uint64_t>> sig(n_);
    std::vector<int> order(n_);
    while (true) {
      for (int v = 0; v < n_; ++v) {
        auto &s = sig[v];
        s.clear();
        for (int u : neighbours_[v]) {
          s.push_back((static_cast<std::uint64_t>(adj_[v * n_ + u]) << 32) |
                      static_cast<std::uint32_t>(colors[u]));
        }
        std::sort(s.begin(), s.end());
        s.insert(s.begin(), static_cast<std::uint64_t>(colors[v]));
      }
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return sig[a] != sig[b] ? sig[a] < sig[b] : a < b;
      });
      std::vector<int> next(n_);
      for (int i = 0; i < n_; ++i) {
        int v = order[i];
        next[v] = (i > 0 && sig[order[i - 1]] == sig[v]) ? next[order[i - 1]] : i;
      }
      colors.swap(next);
      int now = count_classes(colors);
      if (now == classes) break;
      classes = now;
    }
  }

  int count_classes(const std::vector<int> &colors) const {
    std::vector<char> seen(n_, 0);
    int k = 0;
    for (int c : colors) {
      if (!seen[c]) {
        seen[c] = 1;
        ++k;
      }
    }
    return k;
  }

  std::vector<std::uint32_t> encode(const std::vector<int> &pos_of) const {
    std::vector<int> vertex_at(n_);
    for (int v = 0; v < n_; ++v) vertex_at[pos_of[v]] = v;
    std::vector<std::uint32_t> enc;
    enc.reserve(n_ + n_ * (n_ - 1) / 2);
    for (int p = 0; p < n_; ++p) enc.push_back(vlabel_[vertex_at[p]]);
    for (int p = 0; p < n_; ++p) {
      for (int q = p + 1; q < n_; ++q) enc.push_back(adj_[vertex_at[p] * n_ + vertex_at[q]]);
    }
    return enc;
  }

  int find(std::vector<int> &parent, int x) const {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  // Orbits of the group generated by known automorphisms fixing prefix pointwise.
  std::vector<int> orbits_fixing(const std::vector<int> &prefix) const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto &sigma : automorphisms_) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](int v) { return sigma[v] == v; });
      if (!fixes) continue;
      for (int v = 0; v < n_; ++v) {
        int a = find(parent, v), b = find(parent, sigma[v]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (int v = 0; v < n_; ++v) parent[v] = find(parent, v);
    return parent;
  }

  void search(std::vector<int> colors, std::vector<int> &prefix) {
    refine(colors);
    std::vector<int> size(n_, 0);
    for (int c : colors) ++size[c];
    int target = -1;
    for (int c = 0; c < n_; ++c) {
      if (size[c] > 1 && (target < 0 || size[c] < size[target])) target = c;
    }
    if (target < 0) {
      leaf(colors);
      return;
    }
    std::vector<int> members;
    for (int v = 0; v < n_; ++v) {
      if (colors[v] == target) members.push_back(v);
    }
    std::vector<int> explored;
    for (int w : members) {
      if (!explored.empty()) {
        auto orbit = orbits_fixing(prefix);
        bool redundant = std::any_of(explored.begin(), explored.end(),
                                     [&](int e) { return orbit[e] == orbit[w]; });
        if (redundant) continue;
      }
      std::vector<int> child = colors;
      for (int v : members) child[v] = (v == w) ? target : target + 1;
      prefix.push_back(w);
      search(std::move(child), prefix);
      prefix.pop_back();
      explored.push_back(w);
    }
  }

  void leaf(const std::vector<int> &pos_of) {
    auto enc = encode(pos_of);
    if (best_.empty() || enc < best_) {
      best_ = std::move(enc);
      best_lab_ = pos_of;
      return;
    }
    if (enc == best_) {
      std::vector<int> best_vertex_at(n_);
      for (int v = 0; v < n_; ++v) best_vertex_at[best_lab_[v]] = v;
      std::vector<int> sigma(n_);
      bool identity = true;
      for (int v = 0; v < n_; ++v) {
        sigma[v] = best_vertex_at[pos_of[v]];
        identity = identity && sigma[v] == v;
      }
      if (!identity) automorphisms_.push_back(std::move(sigma));
    }
  }

  int n_;
  std::vector<std::uint32_t> vlabel_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::vector<int>> neighbours_;
  std::vector<VertexField> vertex_table_;
  std::vector<Rational> edge_table_;
  std::vector<std::uint32_t> best_;
  std::vector<int> best_lab_;
  std::vector<std::vector<int>> automorphisms_;
};

}  // namespace

CanonicalForm canonical_form(const SpaceState &s) {
  s.validate();
  Canonicalizer c(s);
  c.run();
  CanonicalForm out;
  out.labeling = c.labeling();
  out.key = CanonicalKey(c.key_bytes());
  out.state = relabel(s, out.labeling);
  return out;
}

CanonicalKey canonicalize(const SpaceState &s) {
  s.validate();
  Canonicalizer c(s);
  c.run();
  return CanonicalKey(c.key_bytes());
}

CanonicalKey gauge_invariant_key(const SpaceState &s) {
  std::vector<Phase> shifts;
  for (const auto &f : s.fields) {
    if (f.charged()) shifts.push_back(-f.u1_phase);
  }
  if (shifts.empty()) return canonicalize(s);
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());
  CanonicalKey best;
  bool first = true;
  for (Phase delta : shifts) {
    CanonicalKey k = canonicalize(shift_gauge(s, delta));
    if (first || k < best) {
      best = std::move(k);
      first = false;
    }
  }
  return best;
}

bool is_isomorphic(const SpaceState &a, const SpaceState &b) {
  if (a.vertex_count() != b.vertex_count()) return false;
  if (a.geometry.edges().size() != b.geometry.edges().size()) return false;
  return canonicalize(a) == canonicalize(b);
}

bool is_gauge_equivalent(const SpaceState &a, const SpaceState &b) {
  if (a.vertex_count() != b.vertex_count()) return false;
  if (a.geometry.edges().size() != b.geometry.edges().size()) return false;
  return gauge_invariant_key(a) == gauge_invariant_key(b);
}

}  // namespace spacestate
