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
 * Local Hamiltonian dynamics on the rule-reachable basis: generator assembly,
 * unitary evolution and dissociation-masked expectation values.
 */

#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "spacestate/associability.hpp"
#include "spacestate/rewrite.hpp"
#include "spacestate/wavefunctional.hpp"

namespace spacestate {

struct Transition {
  int target = 0;  ///< basis index
  int rule_id = 0;
  double coupling = 0.0;
};

/**
 * Hermitian generator on a finite basis. Each application of a rule at one
 * match site sending s to t != s contributes g(|t><s| + |s><t|); an
 * application with t == s contributes g|s><s|.
 */
struct Generator {
  std::vector<BasisKey> keys;      ///< sorted
  std::vector<SpaceState> basis;   ///< canonical states, same order as keys
  Eigen::MatrixXcd matrix;
  /// Transitions out of each basis state that land inside the basis.
  std::vector<std::vector<Transition>> transitions;
  /// boundary[i]: some rule application on state i leaves the basis.
  std::vector<char> boundary;
  bool truncated = false;

  std::size_t dimension() const { return keys.size(); }
  /// Index of key in the basis or -1.
  int index_of(const BasisKey &key) const;
};

/**
 * Breadth-first closure of the seed support under single rule applications.
 * Each level is processed in key order and new states are admitted in key
 * order until max_dim is reached. Throws TruncationExceeded when the closure
 * is larger than max_dim and accept_truncation is false.
 */
Generator expand_reachable(const Wavefunctional &seed, const std::vector<RewriteRule> &rules,
                           std::size_t max_dim, bool accept_truncation = false);

/// Matrix exponential by scaling and squaring with diagonal Pade
/// approximants of degree 3, 5, 7, 9 or 13 chosen from the 1-norm.
/// Same basis and transitions with the coupling of every transition replaced
/// by coupling_by_rule[rule_id]; rules missing from the map keep theirs.
Generator with_couplings(const Generator &gen, const std::map<int, double> &coupling_by_rule);

/// Pade scaling-and-squaring matrix exponential.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd &a);

/// exp(-i H dt)
Eigen::MatrixXcd propagator(const Generator &gen, double dt);

struct EvolveOptions {
  /// Permit amplitude on states whose successors were truncated away.
  bool accept_leak = false;
  double leak_tolerance = 1e-8;
};

/**
 * Applies exp(-i H dt) steps times. The support of psi must lie in the
 * generator basis (InvalidState otherwise). On a truncated generator, throws
 * SupportEscape when the weight on boundary states exceeds leak_tolerance
 * unless accept_leak is set.
 */
Wavefunctional evolve(const Wavefunctional &psi, const Generator &gen, double dt, int steps,
                      const EvolveOptions &options = {});

/// Dense amplitudes of psi in basis order.
/// exp(-i H dt)^steps precomputed for repeated application.
class Stepper {
 public:
  Stepper(const Generator &gen, double dt, int steps, const EvolveOptions &options = {});

  Wavefunctional operator()(const Wavefunctional &psi) const;
  const Generator &generator() const { return *gen_; }

 private:
  const Generator *gen_;
  int steps_;
  EvolveOptions options_;
  std::vector<std::complex<double>> rows_;  ///< one-step propagator, row-major
};

Eigen::VectorXcd to_dense(const Wavefunctional &psi, const Generator &gen);
Wavefunctional from_dense(const Eigen::VectorXcd &amps, const Generator &gen, std::int64_t epoch = 0);

/// Observable made of a diagonal function, rule-generated hopping terms and
/// explicit matrix elements (Hermitian completion is implied).
struct LocalObservable {
  struct Element {
    BasisKey a;
    BasisKey b;
    Complex value;  ///< <a|O|b>; <b|O|a> = conj(value)
  };

  std::function<double(const SpaceState &)> diagonal;
  std::vector<RewriteRule> hopping;
  std::vector<Element> elements;
};

/// Weight applied to the cross term between two basis states.
using CrossTermWeight = std::function<double(const Associability &)>;

/// 1 for globally associable, overlap_fraction for partial, 0 for complete.
double linear_cross_weight(const Associability &a);

struct InterferenceResult {
  double full = 0.0;      ///< <psi|O|psi>
  double masked = 0.0;    ///< cross terms scaled by the associability weight
  double diagonal = 0.0;  ///< cross terms dropped
};

InterferenceResult interference_term(const Wavefunctional &psi, const LocalObservable &obs,
                                     const AssociabilityOptions &options = {},
                                     const CrossTermWeight &weight = linear_cross_weight);

}  // namespace spacestate
