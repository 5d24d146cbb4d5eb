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

#include "spacestate/rewrite.hpp"

#include <cmath>
#include <functional>
#include <set>

#include "line_reader.hpp"
#include "spacestate/decimal.hpp"
#include "spacestate/errors.hpp"
#include "spacestate/ssg1.hpp"

namespace spacestate {

bool is_connected(const SpaceState &s) {
  const int n = s.vertex_count();
  if (n == 0) return false;
  std::vector<int> parent(n);
  for (int v = 0; v < n; ++v) parent[v] = v;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int components = n;
  for (const auto &e : s.geometry.edges()) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

void RewriteRule::validate() const {
  pattern.validate();
  replacement.validate();
  const std::string who = "rule " + std::to_string(rule_id) + ": ";
  if (!is_connected(pattern)) throw InvalidState(who + "pattern is not connected");
  if (!is_connected(replacement)) throw InvalidState(who + "replacement is not connected");
  if (replacement.vertex_count() < pattern.vertex_count()) {
    throw InvalidState(who + "replacement must keep every pattern vertex");
  }
  if (!std::isfinite(coupling)) throw InvalidState(who + "coupling is not finite");
}

std::vector<std::vector<int>> find_matches(const SpaceState &host, const SpaceState &pattern) {
  const int k = pattern.vertex_count();
  const int n = host.vertex_count();
  std::vector<std::vector<int>> out;
  if (k > n) return out;
  std::vector<int> image(k, -1);
  std::vector<char> used(n, 0);
  auto fits = [&](int i, int h) {
    const auto &pf = pattern.fields[i];
    const auto &hf = host.fields[h];
    if (pf.species_tag != hf.species_tag || pf.matter_amplitude != hf.matter_amplitude) return false;
    for (int j = 0; j < i; ++j) {
      int pe = pattern.geometry.find_edge(i, j);
      int he = host.geometry.find_edge(h, image[j]);
      if ((pe < 0) != (he < 0)) return false;
      if (pe >= 0 && pattern.geometry.edges()[pe].length != host.geometry.edges()[he].length) return false;
    }
    return true;
  };
  std::function<void(int)> extend = [&](int i) {
    if (i == k) {
      out.push_back(image);
      return;
    }
    for (int h = 0; h < n; ++h) {
      if (used[h] || !fits(i, h)) continue;
      used[h] = 1;
      image[i] = h;
      extend(i + 1);
      used[h] = 0;
    }
    image[i] = -1;
  };
  extend(0);
  return out;
}

SpaceState apply_rule(const SpaceState &host, const RewriteRule &rule, const std::vector<int> &match) {
  const auto &rep = rule.replacement;
  const int k = rule.pattern.vertex_count();
  SpaceState out = host;
  Phase anchor{};
  bool has_anchor = false;
  for (int i = 0; i < k; ++i) {
    auto &f = out.fields[match[i]];
    if (!has_anchor && f.charged()) {
      anchor = f.u1_phase;
      has_anchor = true;
    }
    f.species_tag = rep.fields[i].species_tag;
    f.matter_amplitude = rep.fields[i].matter_amplitude;
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) out.geometry.remove_edge(match[i], match[j]);
  }
  std::vector<int> where(match.begin(), match.end());
  for (int i = k; i < rep.vertex_count(); ++i) {
    VertexField f = rep.fields[i];
    if (f.charged() && has_anchor) f.u1_phase = anchor + f.u1_phase;
    where.push_back(out.geometry.add_vertex());
    out.fields.push_back(f);
  }
  for (const auto &e : rep.geometry.edges()) out.geometry.add_edge(where[e.u], where[e.v], e.length);
  out.validate();
  return out;
}

std::string write_rul1(const std::vector<RewriteRule> &rules) {
  std::string out = "RUL1\n";
  for (const auto &r : rules) {
    out += "rule " + std::to_string(r.rule_id) + "\n";
    out += write_ssg1(r.pattern);
    out += write_ssg1(r.replacement);
    out += "coupling " + format_double(r.coupling) + "\n";
  }
  return out;
}

std::vector<RewriteRule> read_rul1(std::string_view text) {
  detail::LineReader in(text);
  if (in.next() != "RUL1") in.fail("expected RUL1 header");
  std::vector<RewriteRule> rules;
  std::set<int> ids;
  while (!in.done()) {
    auto head = detail::LineReader::split(in.next());
    if (head.size() != 2 || head[0] != "rule") in.fail("expected 'rule <id>'");
    RewriteRule r;
    try {
      r.rule_id = std::stoi(head[1]);
    } catch (const std::exception &) {
      in.fail("bad rule id");
    }
    if (!ids.insert(r.rule_id).second) in.fail("duplicate rule id " + head[1]);
    r.pattern = read_ssg1_block(in);
    r.replacement = read_ssg1_block(in);
    auto coupling = detail::LineReader::split(in.next());
    if (coupling.size() != 2 || coupling[0] != "coupling") in.fail("expected 'coupling <decimal>'");
    try {
      r.coupling = parse_double(coupling[1]);
      r.validate();
    } catch (const Error &err) {
      in.fail(err.what());
    }
    rules.push_back(std::move(r));
  }
  return rules;
}

}  // namespace spacestate
