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

#include "oracles/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace spacestate::oracles {

namespace {

// Length of edge (u, v); present tells whether the edge exists.
Rational edge_length(const SpaceState &s, int u, int v, bool &present) {
  const int idx = s.geometry.find_edge(u, v);
  present = idx >= 0;
  return present ? s.geometry.edges()[idx].length : Rational(0);
}

bool same_edge(const SpaceState &a, int u, int v, const SpaceState &b, int x, int y) {
  bool pa = false, pb = false;
  Rational la = edge_length(a, u, v, pa);
  Rational lb = edge_length(b, x, y, pb);
  return pa == pb && (!pa || la == lb);
}

bool same_record(const VertexField &fa, const VertexField &fb) {
  return fa.species_tag == fb.species_tag && fa.matter_amplitude == fb.matter_amplitude && fa.u1_phase == fb.u1_phase;
}

}  // namespace

bool brute_isomorphic(const SpaceState &a, const SpaceState &b) {
  const int n = a.vertex_count();
  if (n != b.vertex_count() || a.geometry.edges().size() != b.geometry.edges().size()) return false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) ok = same_record(a.fields[v], b.fields[perm[v]]);
    for (int u = 0; u < n && ok; ++u) {
      for (int v = u + 1; v < n && ok; ++v) ok = same_edge(a, u, v, b, perm[u], perm[v]);
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

bool brute_gauge_equivalent(const SpaceState &a, const SpaceState &b) {
  int first = -1;
  for (int v = 0; v < a.vertex_count(); ++v) {
    if (a.fields[v].charged()) {
      first = v;
      break;
    }
  }
  if (first < 0) return brute_isomorphic(a, b);
  for (const auto &f : b.fields) {
    if (f.charged() && brute_isomorphic(shift_gauge(a, f.u1_phase - a.fields[first].u1_phase), b)) return true;
  }
  return false;
}

namespace {

bool connected_subset(const SpaceState &s, const std::vector<int> &subset) {
  std::vector<char> in(s.vertex_count(), 0), seen(s.vertex_count(), 0);
  for (int v : subset) in[v] = 1;
  std::vector<int> stack{subset.front()};
  seen[subset.front()] = 1;
  int count = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++count;
    for (int w : subset) {
      if (!seen[w] && s.geometry.find_edge(v, w) >= 0) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return count == static_cast<int>(subset.size());
}

// Embeds subset[i..] of a into b given the images chosen so far.
bool embed(const SpaceState &a, const SpaceState &b, const std::vector<int> &subset, std::vector<int> &image,
           std::vector<char> &used, std::optional<Phase> offset) {
  const std::size_t i = image.size();
  if (i == subset.size()) return true;
  const int x = subset[i];
  const auto &fa = a.fields[x];
  for (int y = 0; y < b.vertex_count(); ++y) {
    if (used[y]) continue;
    const auto &fb = b.fields[y];
    if (fa.species_tag != fb.species_tag || fa.matter_amplitude != fb.matter_amplitude) continue;
    std::optional<Phase> next = offset;
    if (fa.charged()) {
      const Phase d = fb.u1_phase - fa.u1_phase;
      if (next && *next != d) continue;
      next = d;
    } else if (fa.u1_phase != fb.u1_phase) {
      continue;
    }
    bool ok = true;
    for (std::size_t j = 0; j < i && ok; ++j) ok = same_edge(a, subset[j], x, b, image[j], y);
    if (!ok) continue;
    image.push_back(y);
    used[y] = 1;
    if (embed(a, b, subset, image, used, next)) return true;
    image.pop_back();
    used[y] = 0;
  }
  return false;
}

}  // namespace

int brute_common_connected(const SpaceState &a, const SpaceState &b) {
  const int na = a.vertex_count();
  const int nb = b.vertex_count();
  for (int k = std::min(na, nb); k >= 1; --k) {
    std::vector<char> choose(na, 0);
    std::fill(choose.begin(), choose.begin() + k, 1);
    do {
      std::vector<int> subset;
      for (int v = 0; v < na; ++v) {
        if (choose[v]) subset.push_back(v);
      }
      if (!connected_subset(a, subset)) continue;
      std::vector<int> image;
      std::vector<char> used(nb, 0);
      if (embed(a, b, subset, image, used, std::nullopt)) return k;
    } while (std::prev_permutation(choose.begin(), choose.end()));
  }
  return 0;
}

Associability brute_classify(const SpaceState &a, const SpaceState &b, const AssociabilityOptions &options) {
  Associability out;
  if (brute_gauge_equivalent(a, b)) {
    out.kind = AssociabilityKind::GloballyAssociable;
    out.overlap_fraction = Rational(1);
    out.common_vertices = a.vertex_count();
    return out;
  }
  out.common_vertices = brute_common_connected(a, b);
  out.overlap_fraction = Rational(out.common_vertices, std::max(a.vertex_count(), b.vertex_count()));
  out.kind = out.common_vertices >= options.k_min && out.overlap_fraction >= options.min_overlap
                 ? AssociabilityKind::PartiallyDissociated
                 : AssociabilityKind::CompletelyDissociated;
  return out;
}

namespace {

Phase phase_value(std::mt19937_64 &rng, int values) {
  const std::uint64_t step = values > 0 ? (~std::uint64_t{0} / static_cast<std::uint64_t>(values)) + 1 : 0;
  return Phase(step * std::uniform_int_distribution<std::uint64_t>(0, values - 1)(rng));
}

VertexField random_field(std::mt19937_64 &rng, const RandomStateOptions &o) {
  VertexField f;
  f.species_tag = std::uniform_int_distribution<int>(0, o.species - 1)(rng);
  f.matter_amplitude = Rational(std::uniform_int_distribution<int>(0, o.matter_values - 1)(rng));
  f.u1_phase = f.charged() ? phase_value(rng, o.phase_values) : Phase(0);
  return f;
}

Rational random_length(std::mt19937_64 &rng, const RandomStateOptions &o) {
  return Rational(std::uniform_int_distribution<int>(0, o.length_values - 1)(rng));
}

}  // namespace

SpaceState random_state(std::mt19937_64 &rng, const RandomStateOptions &o) {
  const int n = std::uniform_int_distribution<int>(o.min_vertices, o.max_vertices)(rng);
  FieldConfig fields;
  for (int v = 0; v < n; ++v) fields.push_back(random_field(rng, o));
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(o.edge_probability);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v, random_length(rng, o)});
    }
  }
  return make_state(std::move(fields), std::move(edges));
}

SpaceState random_relabel(std::mt19937_64 &rng, const SpaceState &s) {
  std::vector<int> perm(s.vertex_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return relabel(s, perm);
}

SpaceState random_mutation(std::mt19937_64 &rng, const SpaceState &s, const RandomStateOptions &o) {
  SpaceState out = s;
  const int n = s.vertex_count();
  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 0 && n >= 2) {
    int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int v = std::uniform_int_distribution<int>(0, n - 2)(rng);
    if (v >= u) ++v;
    if (out.geometry.find_edge(u, v) >= 0) {
      out.geometry.remove_edge(u, v);
    } else {
      out.geometry.add_edge(u, v, random_length(rng, o));
    }
  } else {
    const int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (kind == 1) {
      out.fields[v] = random_field(rng, o);
    } else if (out.fields[v].charged()) {
      out.fields[v].u1_phase = phase_value(rng, o.phase_values);
    }
  }
  return out;
}

Wavefunctional random_wavefunctional(std::mt19937_64 &rng, const std::vector<SpaceState> &basis) {
  std::normal_distribution<double> normal;
  Wavefunctional psi;
  for (const auto &s : basis) psi.add(s, Complex(normal(rng), normal(rng)));
  return normalize(psi);
}

namespace {

void all_embeddings(const SpaceState &host, const SpaceState &pattern, std::vector<int> &image,
                    std::vector<std::vector<int>> &out) {
  const int i = static_cast<int>(image.size());
  if (i == pattern.vertex_count()) {
    out.push_back(image);
    return;
  }
  for (int h = 0; h < host.vertex_count(); ++h) {
    if (std::find(image.begin(), image.end(), h) != image.end()) continue;
    const auto &pf = pattern.fields[i];
    const auto &hf = host.fields[h];
    if (pf.species_tag != hf.species_tag || pf.matter_amplitude != hf.matter_amplitude) continue;
    bool ok = true;
    for (int j = 0; j < i && ok; ++j) ok = same_edge(pattern, j, i, host, image[j], h);
    if (!ok) continue;
    image.push_back(h);
    all_embeddings(host, pattern, image, out);
    image.pop_back();
  }
}

SpaceState rewrite(const SpaceState &host, const RewriteRule &rule, const std::vector<int> &image) {
  const int k = rule.pattern.vertex_count();
  FieldConfig fields = host.fields;
  std::optional<Phase> anchor;
  for (int i = 0; i < k; ++i) {
    if (!anchor && host.fields[image[i]].charged()) anchor = host.fields[image[i]].u1_phase;
    fields[image[i]].species_tag = rule.replacement.fields[i].species_tag;
    fields[image[i]].matter_amplitude = rule.replacement.fields[i].matter_amplitude;
  }
  std::vector<int> where = image;
  for (int i = k; i < rule.replacement.vertex_count(); ++i) {
    VertexField f = rule.replacement.fields[i];
    if (f.charged() && anchor) f.u1_phase = *anchor + f.u1_phase;
    where.push_back(static_cast<int>(fields.size()));
    fields.push_back(f);
  }
  std::vector<Edge> edges;
  for (const auto &e : host.geometry.edges()) {
    const bool inside = std::find(image.begin(), image.end(), e.u) != image.end() &&
                        std::find(image.begin(), image.end(), e.v) != image.end();
    if (!inside) edges.push_back(e);
  }
  for (const auto &e : rule.replacement.geometry.edges()) {
    edges.push_back({std::min(where[e.u], where[e.v]), std::max(where[e.u], where[e.v]), e.length});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge &a, const Edge &b) {
    return std::pair{a.u, a.v} < std::pair{b.u, b.v};
  });
  return make_state(std::move(fields), std::move(edges), host.cell_index);
}

}  // namespace

NaiveGenerator naive_generator(const std::vector<SpaceState> &seed, const std::vector<RewriteRule> &rules,
                               std::size_t max_states) {
  std::vector<SpaceState> states;
  auto find = [&](const SpaceState &s) -> int {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].cell_index == s.cell_index && brute_isomorphic(states[i], s)) return static_cast<int>(i);
    }
    return -1;
  };
  for (const auto &s : seed) {
    if (find(s) < 0) states.push_back(s);
  }
  std::vector<std::tuple<int, int, double>> couplings;
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    for (const auto &rule : rules) {
      std::vector<std::vector<int>> embeddings;
      std::vector<int> image;
      const SpaceState host = states[cur];
      all_embeddings(host, rule.pattern, image, embeddings);
      for (const auto &emb : embeddings) {
        SpaceState t = rewrite(host, rule, emb);
        int j = find(t);
        if (j < 0) {
          if (states.size() >= max_states) continue;
          j = static_cast<int>(states.size());
          states.push_back(std::move(t));
        }
        couplings.emplace_back(static_cast<int>(cur), j, rule.coupling);
      }
    }
  }
  NaiveGenerator out;
  out.states = std::move(states);
  const auto n = static_cast<Eigen::Index>(out.states.size());
  out.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (const auto &[i, j, g] : couplings) {
    if (i == j) {
      out.matrix(i, i) += g;
    } else {
      out.matrix(i, j) += g;
      out.matrix(j, i) += g;
    }
  }
  return out;
}

Eigen::MatrixXcd eigen_propagator(const Eigen::MatrixXcd &h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXd &lambda = solver.eigenvalues();
  Eigen::VectorXcd phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, -lambda(i) * dt);
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Eigen::MatrixXd dense_projector(const MacroPartition &partition, const std::vector<SpaceState> &basis,
                                const MacroLabel &alpha) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (partition.try_classify(basis[i]) == alpha) p(i, i) = 1.0;
  }
  return p;
}

}  // namespace spacestate::oracles
