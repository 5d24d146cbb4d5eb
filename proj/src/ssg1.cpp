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

#include "spacestate/ssg1.hpp"

#include <charconv>

#include "line_reader.hpp"
#include "spacestate/canonical.hpp"

namespace spacestate {

std::string write_ssg1(const SpaceState &s) {
  s.validate();
  std::string out = "SSG1\n";
  for (int v = 0; v < s.vertex_count(); ++v) {
    const auto &f = s.fields[v];
    out += "v " + std::to_string(v) + " " + std::to_string(f.species_tag) + " " +
           to_string(f.matter_amplitude) + " " + std::to_string(f.u1_phase.code()) + "\n";
  }
  for (const auto &e : s.geometry.edges()) {
    out += "e " + std::to_string(e.u) + " " + std::to_string(e.v) + " " + to_string(e.length) + "\n";
  }
  out += "end\n";
  return out;
}

std::string write_canonical_ssg1(const SpaceState &s) { return write_ssg1(canonical_form(s).state); }

namespace {

Rational rational_field(const detail::LineReader &in, const std::string &tok) {
  try {
    return parse_rational(tok);
  } catch (const Error &err) {
    in.fail(err.what());
  }
}

int parse_index(const detail::LineReader &in, const std::string &tok) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) in.fail("bad integer '" + tok + "'");
  return value;
}

}  // namespace

SpaceState read_ssg1_block(detail::LineReader &in) {
  if (in.next() != "SSG1") in.fail("expected SSG1 header");
  FieldConfig fields;
  std::vector<Edge> edges;
  while (true) {
    auto tok = detail::LineReader::split(in.next());
    if (tok.size() == 1 && tok[0] == "end") break;
    try {
      if (tok.size() == 5 && tok[0] == "v") {
        if (!edges.empty()) in.fail("vertex record after edge records");
        if (parse_index(in, tok[1]) != static_cast<int>(fields.size())) {
          in.fail("vertex records must be sorted and contiguous");
        }
        VertexField f;
        f.species_tag = parse_index(in, tok[2]);
        f.matter_amplitude = rational_field(in, tok[3]);
        std::uint64_t code = 0;
        auto [ptr, ec] = std::from_chars(tok[4].data(), tok[4].data() + tok[4].size(), code);
        if (ec != std::errc() || ptr != tok[4].data() + tok[4].size()) in.fail("bad phase code");
        f.u1_phase = Phase(code);
        fields.push_back(f);
      } else if (tok.size() == 4 && tok[0] == "e") {
        Edge e{parse_index(in, tok[1]), parse_index(in, tok[2]), rational_field(in, tok[3])};
        if (e.u >= e.v) in.fail("edge records need i < j");
        if (!edges.empty() && std::pair{edges.back().u, edges.back().v} >= std::pair{e.u, e.v}) {
          in.fail("edge records must be sorted and unique");
        }
        edges.push_back(e);
      } else {
        in.fail("unrecognized SSG1 record");
      }
    } catch (const InvalidState &err) {
      in.fail(err.what());
    }
  }
  try {
    return make_state(std::move(fields), std::move(edges));
  } catch (const InvalidState &err) {
    in.fail(err.what());
  }
}

SpaceState read_ssg1(std::string_view text) {
  detail::LineReader in(text);
  SpaceState s = read_ssg1_block(in);
  if (!in.done()) in.fail("trailing content after SSG1 block");
  return s;
}

}  // namespace spacestate
