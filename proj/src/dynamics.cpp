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

#include "spacestate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spacestate/errors.hpp"
#include "spacestate/kernels.hpp"

namespace spacestate {

int Generator::index_of(const BasisKey &key) const {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return -1;
  return static_cast<int>(it - keys.begin());
}

namespace {

struct Successor {
  BasisKey key;
  SpaceState state;
  int rule_id;
  double coupling;
};

std::vector<Successor> successors_of(const SpaceState &s, const std::vector<RewriteRule> &rules) {
  std::vector<Successor> out;
  for (const auto &rule : rules) {
    for (const auto &match : find_matches(s, rule.pattern)) {
      SpaceState t = apply_rule(s, rule, match);
      CanonicalForm form = canonical_form(t);
      out.push_back({{form.key, t.cell_index}, std::move(form.state), rule.rule_id, rule.coupling});
    }
  }
  return out;
}

void assemble(Generator &gen) {
  const auto n = static_cast<Eigen::Index>(gen.keys.size());
  gen.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto &t : gen.transitions[i]) {
      if (t.target == i) {
        gen.matrix(i, i) += t.coupling;
      } else {
        gen.matrix(t.target, i) += t.coupling;
        gen.matrix(i, t.target) += t.coupling;
      }
    }
  }
}

}  // namespace

Generator expand_reachable(const Wavefunctional &seed, const std::vector<RewriteRule> &rules,
                           std::size_t max_dim, bool accept_truncation) {
  if (seed.size() > max_dim) throw InvalidState("max_dim is smaller than the seed support");
  for (const auto &r : rules) r.validate();

  std::map<BasisKey, SpaceState> states;
  std::map<BasisKey, std::vector<Successor>> successors;
  std::vector<BasisKey> level;
  for (const auto &[key, e] : seed.entries()) {
    states.emplace(key, e.state);
    level.push_back(key);
  }
  bool truncated = false;
  while (!level.empty()) {
    std::vector<std::vector<Successor>> found(level.size());
    kernels::for_each(level.size(), [&](std::size_t i) { found[i] = successors_of(states.at(level[i]), rules); });

    std::map<BasisKey, const SpaceState *> fresh;
    for (const auto &list : found) {
      for (const auto &s : list) {
        if (!states.count(s.key)) fresh.emplace(s.key, &s.state);
      }
    }
    std::vector<BasisKey> next;
    for (const auto &[key, state] : fresh) {
      if (states.size() >= max_dim) {
        truncated = true;
        break;
      }
      states.emplace(key, *state);
      next.push_back(key);
    }
    if (truncated && !accept_truncation) {
      throw TruncationExceeded("reachable closure exceeds max_dim = " + std::to_string(max_dim));
    }
    for (std::size_t i = 0; i < level.size(); ++i) successors.emplace(level[i], std::move(found[i]));
    level = std::move(next);
  }

  Generator gen;
  gen.truncated = truncated;
  for (auto &[key, state] : states) {
    gen.keys.push_back(key);
    gen.basis.push_back(std::move(state));
  }
  gen.transitions.resize(gen.keys.size());
  gen.boundary.assign(gen.keys.size(), 0);
  for (std::size_t i = 0; i < gen.keys.size(); ++i) {
    for (const auto &s : successors.at(gen.keys[i])) {
      const int j = gen.index_of(s.key);
      if (j < 0) {
        gen.boundary[i] = 1;
      } else {
        gen.transitions[i].push_back({j, s.rule_id, s.coupling});
      }
    }
  }
  assemble(gen);
  return gen;
}

Generator with_couplings(const Generator &gen, const std::map<int, double> &coupling_by_rule) {
  Generator out = gen;
  for (auto &list : out.transitions) {
    for (auto &t : list) {
      auto it = coupling_by_rule.find(t.rule_id);
      if (it != coupling_by_rule.end()) t.coupling = it->second;
    }
  }
  assemble(out);
  return out;
}

namespace {

double one_norm(const Eigen::MatrixXcd &a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

Eigen::MatrixXcd pade(const Eigen::MatrixXcd &a, const std::vector<double> &b) {
  const auto n = a.rows();
  const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd a2 = a * a;
  Eigen::MatrixXcd u, v;
  if (b.size() == 14) {
    const Eigen::MatrixXcd a4 = a2 * a2;
    const Eigen::MatrixXcd a6 = a4 * a2;
    Eigen::MatrixXcd inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    u = a * (a6 * inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    v = a6 * inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  } else {
    // Odd coefficients feed U, even ones V, in powers of a^2.
    Eigen::MatrixXcd power = ident;
    Eigen::MatrixXcd odd = Eigen::MatrixXcd::Zero(n, n);
    v = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k + 1 < b.size(); k += 2) {
      v += b[k] * power;
      odd += b[k + 1] * power;
      power = power * a2;
    }
    u = a * odd;
  }
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd &a) {
  if (a.rows() != a.cols()) throw InvalidState("expm needs a square matrix");
  if (a.rows() == 0) return a;
  static const std::vector<double> b3 = {120, 60, 12, 1};
  static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
  static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
  static const std::vector<double> b9 = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                         2162160.,     110880.,      3960.,        90.,          1.};
  static const std::vector<double> b13 = {64764752532480000., 32382376266240000., 7771770303897600.,
                                          1187353796428800.,  129060195264000.,   10559470521600.,
                                          670442572800.,      33522128640.,       1323241920.,
                                          40840800.,          960960.,            16380.,
                                          182.,               1.};
  const double norm = one_norm(a);
  if (norm <= 1.495585217958292e-2) return pade(a, b3);
  if (norm <= 2.539398330063230e-1) return pade(a, b5);
  if (norm <= 9.504178996162932e-1) return pade(a, b7);
  if (norm <= 2.097847961257068e0) return pade(a, b9);
  constexpr double theta13 = 5.371920351148152;
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
  Eigen::MatrixXcd r = pade(a / std::ldexp(1.0, s), b13);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

Eigen::MatrixXcd propagator(const Generator &gen, double dt) {
  return expm(Complex(0.0, -dt) * gen.matrix);
}

Eigen::VectorXcd to_dense(const Wavefunctional &psi, const Generator &gen) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(gen.dimension()));
  for (const auto &[key, e] : psi.entries()) {
    const int i = gen.index_of(key);
    if (i < 0) throw InvalidState("wavefunctional support is not contained in the generator basis");
    out(i) = e.amplitude;
  }
  return out;
}

Wavefunctional from_dense(const Eigen::VectorXcd &amps, const Generator &gen, std::int64_t epoch) {
  Wavefunctional out(epoch);
  for (Eigen::Index i = 0; i < amps.size(); ++i) out.add_canonical(gen.keys[i], gen.basis[i], amps(i));
  return out;
}

Stepper::Stepper(const Generator &gen, double dt, int steps, const EvolveOptions &options)
    : gen_(&gen), steps_(steps), options_(options) {
  if (steps < 0) throw InvalidState("negative step count");
  const Eigen::MatrixXcd u = propagator(gen, dt);
  const auto n = u.rows();
  rows_.resize(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) rows_[i * n + j] = u(i, j);
  }
}

Wavefunctional Stepper::operator()(const Wavefunctional &psi) const {
  const Generator &gen = *gen_;
  const std::size_t n = gen.dimension();
  Eigen::VectorXcd start = to_dense(psi, gen);
  std::vector<kernels::cplx> cur(start.data(), start.data() + n), nxt(n);
  const bool check_leak = gen.truncated && !options_.accept_leak;
  for (int step = 0; step < steps_; ++step) {
    kernels::matvec(rows_, cur, nxt);
    cur.swap(nxt);
    if (check_leak) {
      double leak = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (gen.boundary[i]) leak += std::norm(cur[i]);
      }
      if (leak > options_.leak_tolerance) {
        throw SupportEscape("weight " + std::to_string(leak) + " reached truncated boundary at step " +
                            std::to_string(step + 1));
      }
    }
  }
  Eigen::VectorXcd out = Eigen::Map<Eigen::VectorXcd>(cur.data(), static_cast<Eigen::Index>(n));
  return from_dense(out, gen, psi.epoch());
}

Wavefunctional evolve(const Wavefunctional &psi, const Generator &gen, double dt, int steps,
                      const EvolveOptions &options) {
  return Stepper(gen, dt, steps, options)(psi);
}

double linear_cross_weight(const Associability &a) {
  switch (a.kind) {
    case AssociabilityKind::GloballyAssociable:
      return 1.0;
    case AssociabilityKind::PartiallyDissociated:
      return boost::rational_cast<double>(a.overlap_fraction);
    case AssociabilityKind::CompletelyDissociated:
      return 0.0;
  }
  return 0.0;
}

InterferenceResult interference_term(const Wavefunctional &psi, const LocalObservable &obs,
                                     const AssociabilityOptions &options, const CrossTermWeight &weight) {
  std::vector<const BasisKey *> keys;
  std::vector<const WaveEntry *> entries;
  for (const auto &[key, e] : psi.entries()) {
    keys.push_back(&key);
    entries.push_back(&e);
  }
  auto index_of = [&](const BasisKey &key) -> int {
    auto it = std::lower_bound(keys.begin(), keys.end(), key,
                               [](const BasisKey *a, const BasisKey &b) { return *a < b; });
    return it != keys.end() && **it == key ? static_cast<int>(it - keys.begin()) : -1;
  };
  const int n = static_cast<int>(keys.size());
  std::vector<double> diag(n, 0.0);
  std::map<std::pair<int, int>, Complex> off;
  if (obs.diagonal) {
    for (int i = 0; i < n; ++i) diag[i] += obs.diagonal(entries[i]->state);
  }
  for (int i = 0; i < n; ++i) {
    for (const auto &s : successors_of(entries[i]->state, obs.hopping)) {
      const int j = index_of(s.key);
      if (j < 0) continue;
      if (j == i) {
        diag[i] += s.coupling;
      } else {
        off[{j, i}] += s.coupling;
        off[{i, j}] += s.coupling;
      }
    }
  }
  for (const auto &el : obs.elements) {
    const int a = index_of(el.a);
    const int b = index_of(el.b);
    if (a < 0 || b < 0) continue;
    if (a == b) {
      diag[a] += el.value.real();
    } else {
      off[{a, b}] += el.value;
      off[{b, a}] += std::conj(el.value);
    }
  }

  std::vector<std::pair<int, int>> pairs;
  for (const auto &[ij, value] : off) {
    if (ij.first < ij.second) pairs.push_back(ij);
  }
  std::vector<double> w(pairs.size());
  kernels::for_each(pairs.size(), [&](std::size_t p) {
    w[p] = weight(classify_associability(entries[pairs[p].first]->state, entries[pairs[p].second]->state, options));
  });
  std::map<std::pair<int, int>, double> pair_weight;
  for (std::size_t p = 0; p < pairs.size(); ++p) pair_weight[pairs[p]] = w[p];

  InterferenceResult r;
  for (int i = 0; i < n; ++i) r.diagonal += diag[i] * std::norm(entries[i]->amplitude);
  Complex cross_full{}, cross_masked{};
  for (const auto &[ij, value] : off) {
    const Complex term = std::conj(entries[ij.first]->amplitude) * value * entries[ij.second]->amplitude;
    cross_full += term;
    cross_masked += term * pair_weight.at({std::min(ij.first, ij.second), std::max(ij.first, ij.second)});
  }
  r.full = r.diagonal + cross_full.real();
  r.masked = r.diagonal + cross_masked.real();
  return r;
}

}  // namespace spacestate
