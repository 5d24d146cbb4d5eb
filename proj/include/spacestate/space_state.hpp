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
 * Discrete space-states: a labeled graph carrying a classical field on its
 * vertices, plus an optional dyadic path naming a virtual sub-cell.
 */

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace spacestate {

/// Exact label arithmetic for edge lengths and matter amplitudes.
using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational &q);
Rational parse_rational(std::string_view text);

/**
 * A U(1) phase held as a fixed-point fraction of a full turn.
 *
 * The code c stands for the angle 2*pi*c/2^64, so group addition is plain
 * unsigned wrap-around and stays exact. Conversion from radians rounds to the
 * nearest code (resolution ~3.4e-19 rad).
 */
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(std::uint64_t code) : code_(code) {}

  static Phase from_radians(double theta);

  /// Angle in [0, 2*pi).
  double radians() const;
  constexpr std::uint64_t code() const { return code_; }

  constexpr Phase operator+(Phase other) const { return Phase(code_ + other.code_); }
  constexpr Phase operator-(Phase other) const { return Phase(code_ - other.code_); }
  constexpr Phase operator-() const { return Phase(0 - code_); }
  constexpr auto operator<=>(const Phase &) const = default;

 private:
  std::uint64_t code_ = 0;
};

/// Per-vertex classical field record. Species 0 is neutral; every other species
/// carries U(1) charge and takes part in global gauge rotations.
struct VertexField {
  int species_tag = 0;
  Rational matter_amplitude{0};
  Phase u1_phase{};

  bool charged() const { return species_tag != 0; }
  bool operator==(const VertexField &) const = default;
};

struct Edge {
  int u = 0;  ///< always u < v
  int v = 0;
  Rational length{0};

  bool operator==(const Edge &) const = default;
};

/// Geometry: vertices 0..n-1 and undirected labeled edges.
class SpaceGraph {
 public:
  SpaceGraph() = default;
  SpaceGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge> &edges() const { return edges_; }

  /// Adds an edge, keeping the sorted order. Throws InvalidState for self-loops,
  /// duplicates, negative lengths or out-of-range endpoints.
  void add_edge(int a, int b, Rational length);
  void remove_edge(int a, int b);
  /// Index into edges() or -1.
  int find_edge(int a, int b) const;
  int add_vertex() { return vertex_count_++; }

  bool operator==(const SpaceGraph &) const = default;

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
};

using FieldConfig = std::vector<VertexField>;

/// Dyadic refinement path; each bit picks one half of a parent cell.
class CellPath {
 public:
  CellPath() = default;
  explicit CellPath(std::string bits);

  const std::string &bits() const { return bits_; }
  std::size_t depth() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  CellPath child(bool bit) const;

  /// "-" for the empty path, the bit string otherwise.
  std::string to_string() const { return bits_.empty() ? "-" : bits_; }
  static CellPath parse(std::string_view text);

  auto operator<=>(const CellPath &) const = default;

 private:
  std::string bits_;
};

struct SpaceState {
  SpaceGraph geometry;
  FieldConfig fields;
  CellPath cell_index;

  int vertex_count() const { return geometry.vertex_count(); }

  /// Throws InvalidState if the invariants do not hold.
  void validate() const;
  bool has_charged_vertex() const;
};

/// Builds a state from raw parts and validates it.
SpaceState make_state(FieldConfig fields, std::vector<Edge> edges,
                      CellPath cell = {});

/// Image of s under the vertex map v -> perm[v].
SpaceState relabel(const SpaceState &s, const std::vector<int> &perm);

/// Adds theta to the phase of every charged vertex.
SpaceState shift_gauge(const SpaceState &s, Phase theta);

}  // namespace spacestate
