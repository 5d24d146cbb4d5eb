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

#include "spacestate/born.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "spacestate/decimal.hpp"
#include "spacestate/errors.hpp"
#include "spacestate/kernels.hpp"

namespace spacestate {

std::pair<CellItem, CellItem> split_cell(const CellItem &item) {
  if (!(item.density > 0)) throw ZeroDensity("cannot split a cell of density 0");
  const double r = item.density / std::sqrt(2.0);
  return {CellItem{{item.key.graph, item.key.cell.child(false)}, r},
          CellItem{{item.key.graph, item.key.cell.child(true)}, r}};
}

namespace {

mpq_class exact_square(double r) {
  mpq_class q(r);
  return q * q;
}

}  // namespace

mpq_class RefinementTree::cell_weight(int depth, std::size_t cell) const {
  const auto &level = levels.at(depth);
  mpq_class sum = 0;
  for (std::size_t p = level.cell_begin.at(cell); p < level.cell_begin.at(cell + 1); ++p) sum += level.pieces[p].weight;
  return sum;
}

RefinementTree build_refinement(const DensitizedView &view, int depth_max, const MacroPartition *order_by) {
  if (depth_max < 0 || depth_max > kMaxRefinementDepth) {
    throw DepthExceeded("refinement depth " + std::to_string(depth_max) + " outside [0, " +
                        std::to_string(kMaxRefinementDepth) + "]");
  }
  RefinementTree tree;
  for (const auto &[key, e] : view.entries) {
    if (!(e.density > 0)) continue;
    RefinementItem item{key, e.state, e.density, exact_square(e.density), -1};
    if (order_by) item.label = order_by->label_index(order_by->classify(e.state));
    tree.items.push_back(std::move(item));
  }
  if (tree.items.empty()) throw ZeroDensity("densitized view has no support");
  std::stable_sort(tree.items.begin(), tree.items.end(), [](const RefinementItem &a, const RefinementItem &b) {
    return a.label != b.label ? a.label < b.label : a.key < b.key;
  });
  for (const auto &item : tree.items) tree.total += item.weight;
  if (std::abs(tree.total.get_d() - 1.0) > 1e-12) throw InvalidState("densitized view is not normalized");

  RefinementLevel root;
  for (std::size_t i = 0; i < tree.items.size(); ++i) root.pieces.push_back({i, CellPath(), tree.items[i].weight});
  root.cell_begin = {0, root.pieces.size()};
  tree.levels.push_back(std::move(root));

  mpq_class cell = tree.total;
  for (int depth = 0; depth < depth_max; ++depth) {
    const auto &prev = tree.levels.back();
    RefinementLevel next;
    next.pieces.reserve(prev.pieces.size() + prev.cell_count());
    next.cell_begin.reserve(2 * prev.cell_count() + 1);
    const mpq_class half = cell / 2;
    for (std::size_t c = 0; c < prev.cell_count(); ++c) {
      next.cell_begin.push_back(next.pieces.size());
      mpq_class filled = 0;
      bool right = false;
      for (std::size_t p = prev.cell_begin[c]; p < prev.cell_begin[c + 1]; ++p) {
        const CellPiece &piece = prev.pieces[p];
        if (right) {
          next.pieces.push_back(piece);
          continue;
        }
        mpq_class after = filled + piece.weight;
        if (after <= half) {
          next.pieces.push_back(piece);
          filled = std::move(after);
          if (filled == half) {
            right = true;
            next.cell_begin.push_back(next.pieces.size());
          }
          continue;
        }
        mpq_class left_part = half - filled;
        next.pieces.push_back({piece.item, piece.cell.child(false), left_part});
        next.cell_begin.push_back(next.pieces.size());
        next.pieces.push_back({piece.item, piece.cell.child(true), piece.weight - left_part});
        right = true;
      }
    }
    next.cell_begin.push_back(next.pieces.size());
    tree.levels.push_back(std::move(next));
    cell = half;
  }
  return tree;
}

double CountReport::bound() const { return std::ldexp(static_cast<double>(straddlers), -depth); }

CountReport count_estimate(const RefinementTree &tree, const MacroPartition &partition, int depth) {
  if (depth < 0 || depth > tree.depth()) {
    throw DepthExceeded("depth " + std::to_string(depth) + " not built (tree depth " + std::to_string(tree.depth()) + ")");
  }
  const auto &labels = partition.labels();
  std::vector<int> label_of(tree.items.size());
  std::vector<mpq_class> exact(labels.size(), 0);
  for (std::size_t i = 0; i < tree.items.size(); ++i) {
    label_of[i] = partition.label_index(partition.classify(tree.items[i].state));
    exact[label_of[i]] += tree.items[i].weight;
  }
  CountReport report;
  report.depth = depth;
  std::vector<std::uint64_t> inside(labels.size(), 0);
  const auto &level = tree.levels[depth];
  for (std::size_t c = 0; c < level.cell_count(); ++c) {
    const int first = label_of[level.pieces[level.cell_begin[c]].item];
    bool mixed = false;
    for (std::size_t p = level.cell_begin[c] + 1; p < level.cell_begin[c + 1] && !mixed; ++p) {
      mixed = label_of[level.pieces[p].item] != first;
    }
    if (mixed) {
      ++report.straddlers;
    } else {
      ++inside[first];
    }
  }
  for (std::size_t l = 0; l < labels.size(); ++l) {
    mpq_class fraction = exact[l] / tree.total;
    report.labels.push_back(
        {labels[l], inside[l], std::ldexp(static_cast<double>(inside[l]), -depth), fraction.get_d()});
  }
  return report;
}

std::string count_reports_csv(const std::vector<CountReport> &reports) {
  std::string out = "depth,label,n_alpha,straddlers,estimate,exact,bound\n";
  for (const auto &r : reports) {
    for (const auto &l : r.labels) {
      out += std::to_string(r.depth) + "," + l.label + "," + std::to_string(l.n_alpha) + "," +
             std::to_string(r.straddlers) + "," + format_double(l.estimate) + "," + format_double(l.exact) + "," +
             format_double(r.bound()) + "\n";
    }
  }
  return out;
}

double SampleReport::frequency(std::size_t i) const {
  return samples == 0 ? 0.0 : static_cast<double>(counts.at(i)) / static_cast<double>(samples);
}

SampleReport sample_selflocation(const DensitizedView &view, const MacroPartition &partition,
                                 std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidState("sample count must be positive");
  if (view.entries.empty()) throw ZeroDensity("densitized view has no support");
  SampleReport report;
  report.samples = samples;
  report.labels = partition.labels();
  report.counts.assign(report.labels.size(), 0);
  report.exact.assign(report.labels.size(), 0.0);
  std::vector<double> cdf;
  std::vector<int> label_of;
  double acc = 0;
  for (const auto &[key, e] : view.entries) {
    const double w = e.density * e.density;
    acc += w;
    cdf.push_back(acc);
    label_of.push_back(partition.label_index(partition.classify(e.state)));
    report.exact[label_of.back()] += w;
  }
  if (!(acc > 0)) throw ZeroDensity("densitized view has zero weight");
  for (auto &x : report.exact) x /= acc;
  kernels::sample_histogram(cdf, label_of, samples, seed, 0, report.counts);
  return report;
}

std::string samples_csv(const SampleReport &report) {
  std::string out = "label,count,frequency,exact\n";
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    out += report.labels[i] + "," + std::to_string(report.counts[i]) + "," + format_double(report.frequency(i)) +
           "," + format_double(report.exact[i]) + "\n";
  }
  return out;
}

ChiSquared chi_squared_test(const std::vector<std::uint64_t> &counts, const std::vector<double> &probabilities) {
  if (counts.size() != probabilities.size()) throw InvalidState("chi-squared: size mismatch");
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  ChiSquared out;
  int categories = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probabilities[i] <= 0) {
      if (counts[i] != 0) return {std::numeric_limits<double>::infinity(), 0, 0.0};
      continue;
    }
    const double expected = total * probabilities[i];
    const double d = static_cast<double>(counts[i]) - expected;
    out.statistic += d * d / expected;
    ++categories;
  }
  out.dof = categories - 1;
  if (out.dof > 0) {
    boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

}  // namespace spacestate
