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

#include "spacestate/space_state.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "spacestate/errors.hpp"

namespace spacestate {

std::string to_string(const Rational &q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("bad integer '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t num = parse_int(text.substr(0, slash));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den <= 0) throw FormatError("bad denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

Phase Phase::from_radians(double theta) {
  double turns = theta / (2.0 * std::numbers::pi);
  turns -= std::floor(turns);
  long double scaled = std::round(std::ldexp(static_cast<long double>(turns), 64));
  if (scaled >= std::ldexp(1.0L, 64)) return Phase(0);
  return Phase(static_cast<std::uint64_t>(scaled));
}

double Phase::radians() const {
  const auto theta = static_cast<double>(std::ldexp(static_cast<long double>(code_), -64) * 2.0L *
                                         std::numbers::pi_v<long double>);
  constexpr double full = 2.0 * std::numbers::pi;
  return theta < full ? theta : std::nextafter(full, 0.0);
}

SpaceGraph::SpaceGraph(int vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count) {
  if (vertex_count < 0) throw InvalidState("negative vertex count");
  for (auto &e : edges) add_edge(e.u, e.v, e.length);
}

int SpaceGraph::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b},
                             [](const Edge &e, const std::pair<int, int> &key) {
                               return std::pair{e.u, e.v} < key;
                             });
  if (it != edges_.end() && it->u == a && it->v == b) return static_cast<int>(it - edges_.begin());
  return -1;
}

void SpaceGraph::add_edge(int a, int b, Rational length) {
  if (a == b) throw InvalidState("self-loop on vertex " + std::to_string(a));
  if (a < 0 || b < 0 || a >= vertex_count_ || b >= vertex_count_) {
    throw InvalidState("edge endpoint out of range");
  }
  if (length < 0) throw InvalidState("negative edge length");
  if (a > b) std::swap(a, b);
  if (find_edge(a, b) >= 0) {
    throw InvalidState("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  Edge e{a, b, length};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e, [](const Edge &x, const Edge &y) {
    return std::pair{x.u, x.v} < std::pair{y.u, y.v};
  });
  edges_.insert(it, e);
}

void SpaceGraph::remove_edge(int a, int b) {
  int idx = find_edge(a, b);
  if (idx >= 0) edges_.erase(edges_.begin() + idx);
}

CellPath::CellPath(std::string bits) : bits_(std::move(bits)) {
  for (char c : bits_) {
    if (c != '0' && c != '1') throw FormatError("cell path must be a bit string");
  }
}

CellPath CellPath::child(bool bit) const { return CellPath(bits_ + (bit ? '1' : '0')); }

CellPath CellPath::parse(std::string_view text) {
  if (text == "-") return CellPath();
  return CellPath(std::string(text));
}

void SpaceState::validate() const {
  if (geometry.vertex_count() < 1) throw InvalidState("space-state needs at least one vertex");
  if (static_cast<int>(fields.size()) != geometry.vertex_count()) {
    throw InvalidState("field configuration does not match the vertex set");
  }
  for (const auto &f : fields) {
    if (f.matter_amplitude < 0) throw InvalidState("negative matter amplitude");
  }
  const auto &edges = geometry.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto &e = edges[i];
    if (e.u >= e.v || e.v >= geometry.vertex_count()) throw InvalidState("malformed edge");
    if (e.length < 0) throw InvalidState("negative edge length");
    if (i > 0 && std::pair{edges[i - 1].u, edges[i - 1].v} >= std::pair{e.u, e.v}) {
      throw InvalidState("edges not sorted or duplicated");
    }
  }
}

bool SpaceState::has_charged_vertex() const {
  return std::any_of(fields.begin(), fields.end(), [](const VertexField &f) { return f.charged(); });
}

SpaceState make_state(FieldConfig fields, std::vector<Edge> edges, CellPath cell) {
  SpaceState s;
  s.geometry = SpaceGraph(static_cast<int>(fields.size()), std::move(edges));
  s.fields = std::move(fields);
  s.cell_index = std::move(cell);
  s.validate();
  return s;
}

SpaceState relabel(const SpaceState &s, const std::vector<int> &perm) {
  const int n = s.vertex_count();
  if (static_cast<int>(perm.size()) != n) throw InvalidState("permutation size mismatch");
  SpaceState out;
  out.cell_index = s.cell_index;
  out.fields.resize(n);
  for (int v = 0; v < n; ++v) out.fields[perm[v]] = s.fields[v];
  std::vector<Edge> edges;
  edges.reserve(s.geometry.edges().size());
  for (const auto &e : s.geometry.edges()) edges.push_back({perm[e.u], perm[e.v], e.length});
  out.geometry = SpaceGraph(n, std::move(edges));
  return out;
}

SpaceState shift_gauge(const SpaceState &s, Phase theta) {
  SpaceState out = s;
  for (auto &f : out.fields) {
    if (f.charged()) f.u1_phase = f.u1_phase + theta;
  }
  return out;
}

}  // namespace spacestate
