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

#include "spacestate/macrostates.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include "spacestate/errors.hpp"

namespace spacestate {

MacroPartition::MacroPartition(std::string name, std::string description,
                               std::vector<MacroLabel> labels, Classifier classifier)
    : name_(std::move(name)), description_(std::move(description)), labels_(std::move(labels)),
      classifier_(std::move(classifier)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  if (labels_.empty()) throw InvalidState("partition '" + name_ + "' has no labels");
}

bool MacroPartition::has_label(const MacroLabel &label) const { return label_index(label) >= 0; }

int MacroPartition::label_index(const MacroLabel &label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return -1;
  return static_cast<int>(it - labels_.begin());
}

MacroLabel MacroPartition::classify(const SpaceState &s) const {
  auto label = classifier_(s);
  if (!label) throw InvalidState("partition '" + name_ + "' does not classify this state");
  if (!has_label(*label)) {
    throw InvalidState("partition '" + name_ + "' produced undeclared label '" + *label + "'");
  }
  return *label;
}

namespace {

class ParamReader {
 public:
  ParamReader(std::string partition, const PartitionParams &params)
      : partition_(std::move(partition)), params_(params) {}

  std::int64_t integer(const std::string &key, std::int64_t fallback, std::int64_t min_value) {
    seen_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    Rational q = parse(key, it->second);
    if (q.denominator() != 1 || q.numerator() < min_value) {
      throw InvalidState(partition_ + "." + key + " must be an integer >= " + std::to_string(min_value));
    }
    return q.numerator();
  }

  Rational positive(const std::string &key, Rational fallback) {
    seen_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    Rational q = parse(key, it->second);
    if (q <= 0) throw InvalidState(partition_ + "." + key + " must be positive");
    return q;
  }

  void finish() const {
    for (const auto &[key, value] : params_) {
      if (!seen_.count(key)) throw InvalidState("unknown parameter '" + key + "' for partition " + partition_);
    }
  }

 private:
  Rational parse(const std::string &key, const std::string &text) const {
    try {
      return parse_rational(text);
    } catch (const Error &) {
      throw InvalidState(partition_ + "." + key + ": cannot parse '" + text + "'");
    }
  }

  std::string partition_;
  const PartitionParams &params_;
  std::set<std::string> seen_;
};

std::int64_t floor_div(const Rational &x, const Rational &grid) {
  Rational q = x / grid;
  std::int64_t f = q.numerator() / q.denominator();
  if (q.numerator() < 0 && f * q.denominator() != q.numerator()) --f;
  return f;
}

MacroPartition bucketed_sum(const std::string &name, const std::string &prefix, const std::string &what,
                            Rational grid, std::int64_t buckets,
                            std::function<Rational(const SpaceState &)> quantity) {
  std::vector<MacroLabel> labels;
  for (std::int64_t k = 0; k < buckets; ++k) labels.push_back(prefix + std::to_string(k));
  std::string overflow = prefix + ">=" + std::to_string(buckets);
  labels.push_back(overflow);
  return MacroPartition(
      name, what + " bucketed by grid " + to_string(grid), labels,
      [=](const SpaceState &s) -> std::optional<MacroLabel> {
        std::int64_t k = floor_div(quantity(s), grid);
        return k < buckets ? prefix + std::to_string(k) : overflow;
      });
}

}  // namespace

MacroPartition make_partition(const std::string &name, const PartitionParams &params) {
  ParamReader p(name, params);
  if (name == "vertex_count") {
    const std::int64_t width = p.integer("width", 4, 1);
    const std::int64_t max_vertices = p.integer("max_vertices", 64, 1);
    p.finish();
    const std::int64_t buckets = (max_vertices + width - 1) / width;
    const std::int64_t cap = buckets * width;
    std::vector<MacroLabel> labels;
    for (std::int64_t b = 0; b < buckets; ++b) {
      labels.push_back(std::to_string(b * width) + "-" + std::to_string(b * width + width - 1));
    }
    labels.push_back(">=" + std::to_string(cap));
    return MacroPartition(name, "vertex count in buckets of " + std::to_string(width), labels,
                          [=](const SpaceState &s) -> std::optional<MacroLabel> {
                            std::int64_t n = s.vertex_count();
                            if (n >= cap) return ">=" + std::to_string(cap);
                            std::int64_t lo = n / width * width;
                            return std::to_string(lo) + "-" + std::to_string(lo + width - 1);
                          });
  }
  if (name == "total_matter") {
    Rational grid = p.positive("grid", Rational(1));
    std::int64_t buckets = p.integer("buckets", 16, 1);
    p.finish();
    return bucketed_sum(name, "matter:", "total matter amplitude", grid, buckets, [](const SpaceState &s) {
      Rational sum(0);
      for (const auto &f : s.fields) sum += f.matter_amplitude;
      return sum;
    });
  }
  if (name == "total_length") {
    Rational grid = p.positive("grid", Rational(1));
    std::int64_t buckets = p.integer("buckets", 16, 1);
    p.finish();
    return bucketed_sum(name, "length:", "total edge length", grid, buckets, [](const SpaceState &s) {
      Rational sum(0);
      for (const auto &e : s.geometry.edges()) sum += e.length;
      return sum;
    });
  }
  if (name == "degree_histogram") {
    const std::int64_t buckets = p.integer("buckets", 8, 1);
    p.finish();
    std::vector<MacroLabel> labels;
    for (std::int64_t b = 0; b < buckets; ++b) labels.push_back("deg:" + std::to_string(b));
    return MacroPartition(name, "hash of the degree sequence", labels,
                          [=](const SpaceState &s) -> std::optional<MacroLabel> {
                            std::vector<int> degree(s.vertex_count(), 0);
                            for (const auto &e : s.geometry.edges()) {
                              ++degree[e.u];
                              ++degree[e.v];
                            }
                            std::sort(degree.begin(), degree.end());
                            std::uint64_t h = 0xcbf29ce484222325ULL;
                            for (int d : degree) {
                              for (int i = 0; i < 4; ++i) {
                                h ^= static_cast<std::uint8_t>((static_cast<std::uint32_t>(d) >> (8 * i)) & 0xff);
                                h *= 0x100000001b3ULL;
                              }
                            }
                            return "deg:" + std::to_string(h % static_cast<std::uint64_t>(buckets));
                          });
  }
  throw InvalidState("unknown partition '" + name + "'");
}

std::vector<MacroPartition> builtin_classifiers() {
  return {make_partition("vertex_count"), make_partition("total_matter"), make_partition("total_length"),
          make_partition("degree_histogram")};
}

ProjectorReport verify_projector_algebra(const MacroPartition &partition,
                                         const std::vector<SpaceState> &basis) {
  ProjectorReport report;
  report.basis_size = basis.size();
  const auto &labels = partition.labels();
  report.label_count = labels.size();
  auto diag = [&](const SpaceState &s, std::size_t a) -> int {
    auto label = partition.try_classify(s);
    return label && *label == labels[a] ? 1 : 0;
  };
  auto note = [&](bool &flag, const std::string &what) {
    flag = false;
    if (report.violations.size() < 64) report.violations.push_back(what);
  };
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto &s = basis[i];
    const std::string at = " at basis state " + std::to_string(i);
    auto label = partition.try_classify(s);
    if (!label) {
      note(report.complete, "classifier undefined" + at);
    } else if (!partition.has_label(*label)) {
      note(report.complete, "undeclared label '" + *label + "'" + at);
    }
    int total = 0;
    for (std::size_t a = 0; a < labels.size(); ++a) {
      const int p = diag(s, a);
      const int p_again = diag(s, a);
      if (p * p_again != p) note(report.idempotent, "P[" + labels[a] + "]^2 != P[" + labels[a] + "]" + at);
      total += p;
      for (std::size_t b = a + 1; b < labels.size(); ++b) {
        const int q = diag(s, b);
        if (p * q != 0) note(report.orthogonal, "P[" + labels[a] + "] P[" + labels[b] + "] != 0" + at);
        if (p * q != q * diag(s, a)) {
          note(report.commuting, "P[" + labels[a] + "] and P[" + labels[b] + "] do not commute" + at);
        }
      }
    }
    if (total != 1) note(report.complete, "sum of projectors is " + std::to_string(total) + at);
  }
  return report;
}

}  // namespace spacestate
