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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles/oracles.hpp"
#include "spacestate/dynamics.hpp"
#include "spacestate/errors.hpp"
#include "support.hpp"

namespace spacestate {
namespace {

using testing::edge;
using testing::vf;

RewriteRule rule(int id, SpaceState pattern, SpaceState replacement, double g) {
  RewriteRule r{id, std::move(pattern), std::move(replacement), g};
  r.validate();
  return r;
}

SpaceState single(int species, std::int64_t matter = 0) { return make_state({vf(species, matter)}, {}); }

Wavefunctional ket(const SpaceState &s, Complex a = 1.0) {
  Wavefunctional psi;
  psi.add(s, a);
  return psi;
}

/// Basis of n single-vertex states told apart by matter, with H given.
Generator dense_generator(const Eigen::MatrixXcd &h) {
  Generator gen;
  const auto n = h.rows();
  std::map<BasisKey, SpaceState> states;
  for (Eigen::Index k = 0; k < n; ++k) {
    const SpaceState s = canonical_form(single(1, k)).state;
    states.emplace(basis_key(s), s);
  }
  for (const auto &[key, s] : states) {
    gen.keys.push_back(key);
    gen.basis.push_back(s);
  }
  gen.matrix = h;
  gen.transitions.resize(n);
  gen.boundary.assign(n, 0);
  return gen;
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64 &rng, int n, double scale) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return scale * (m + m.adjoint()) / 2.0;
}

TEST(Generator, NoRulesGivesZeroMatrix) {
  Wavefunctional psi = ket(single(1));
  psi.add(testing::path({1}), 1.0);
  const Generator gen = expand_reachable(psi, {}, 10);
  EXPECT_EQ(gen.dimension(), 2u);
  EXPECT_TRUE(gen.matrix.isZero());
  EXPECT_FALSE(gen.truncated);
  const Wavefunctional unit = normalize(psi);
  const Wavefunctional out = evolve(unit, gen, 0.3, 5);
  for (const auto &[key, e] : unit.entries()) EXPECT_EQ(out.amplitude(key), e.amplitude);
}

TEST(Generator, TwoStateRule) {
  const double g = 0.7;
  const Generator gen = expand_reachable(ket(single(1)), {rule(1, single(1), single(2), g)}, 10);
  ASSERT_EQ(gen.dimension(), 2u);
  EXPECT_EQ(gen.matrix(0, 0), Complex(0));
  EXPECT_EQ(gen.matrix(1, 1), Complex(0));
  EXPECT_EQ(gen.matrix(0, 1), Complex(g));
  EXPECT_EQ(gen.matrix(1, 0), Complex(g));
  EXPECT_TRUE(gen.matrix.isApprox(gen.matrix.adjoint()));
}

TEST(Generator, SelfMapIsDiagonal) {
  const Generator gen = expand_reachable(ket(single(3)), {rule(4, single(3), single(3), 0.25)}, 10);
  ASSERT_EQ(gen.dimension(), 1u);
  EXPECT_EQ(gen.matrix(0, 0), Complex(0.25));
}

std::vector<RewriteRule> three_rules() {
  return {rule(1, single(1), single(2), 1.0),
          rule(2, make_state({vf(2), vf(2)}, {edge(0, 1, 0)}), make_state({vf(2), vf(2)}, {edge(0, 1, 1)}), 0.5),
          rule(3, single(3), make_state({vf(3, 1), vf(1)}, {edge(0, 1, 0)}), 0.3)};
}

TEST(Generator, AgreesWithNaiveClosure) {
  const SpaceState seed = make_state({vf(1), vf(1), vf(3), vf(1)}, {edge(0, 1), edge(1, 2), edge(2, 3)});
  const auto rules = three_rules();
  const std::size_t cap = 10;
  const Generator gen = expand_reachable(ket(seed), rules, 400);
  const oracles::NaiveGenerator naive = oracles::naive_generator({seed}, rules, 400);
  ASSERT_EQ(gen.dimension(), naive.states.size());
  ASSERT_GT(gen.dimension(), cap);
  std::vector<int> perm;
  for (const SpaceState &s : naive.states) {
    const int i = gen.index_of(basis_key(s));
    ASSERT_GE(i, 0);
    perm.push_back(i);
  }
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = 0; b < perm.size(); ++b)
      ASSERT_EQ(gen.matrix(perm[a], perm[b]), naive.matrix(a, b)) << a << " " << b;
}

TEST(Generator, TruncationIsReported) {
  const SpaceState seed = make_state({vf(1), vf(1), vf(3), vf(1)}, {edge(0, 1), edge(1, 2), edge(2, 3)});
  EXPECT_THROW(expand_reachable(ket(seed), three_rules(), 5), TruncationExceeded);
  const Generator gen = expand_reachable(ket(seed), three_rules(), 5, true);
  EXPECT_TRUE(gen.truncated);
  EXPECT_EQ(gen.dimension(), 5u);
  EXPECT_TRUE(std::any_of(gen.boundary.begin(), gen.boundary.end(), [](char b) { return b != 0; }));
  EXPECT_TRUE(gen.matrix.isApprox(gen.matrix.adjoint()));
}

TEST(Generator, WithCouplingsRescalesByRule) {
  const Generator gen = expand_reachable(ket(single(1)), {rule(1, single(1), single(2), 0.7)}, 10);
  const Generator re = with_couplings(gen, {{1, 2.0}});
  EXPECT_EQ(re.matrix(0, 1), Complex(2.0));
  EXPECT_EQ(re.keys, gen.keys);
}

TEST(Evolve, RabiHalfPeriod) {
  const double g = 1.3;
  const Generator gen = expand_reachable(ket(single(1)), {rule(1, single(1), single(2), g)}, 10);
  const double t = std::numbers::pi / (2 * g);
  const Wavefunctional out = evolve(ket(single(1)), gen, t / 100, 100);
  EXPECT_LT(std::abs(out.amplitude(basis_key(single(1)))), 1e-12);
  EXPECT_LT(std::abs(out.amplitude(basis_key(single(2))) - Complex(0, -1)), 1e-12);
  for (double s : {0.1, 0.5, 0.9}) {
    const Wavefunctional mid = evolve(ket(single(1)), gen, s * t, 1);
    EXPECT_NEAR(std::abs(mid.amplitude(basis_key(single(1))) - std::cos(g * s * t)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(mid.amplitude(basis_key(single(2))) - Complex(0, -std::sin(g * s * t))), 0.0, 1e-13);
  }
}

TEST(Evolve, ZeroCouplingIsIdentity) {
  const Generator gen = expand_reachable(ket(single(1)), {rule(1, single(1), single(2), 0.0)}, 10);
  const Wavefunctional out = evolve(ket(single(1), Complex(0.6, 0.8)), gen, 1.0, 10);
  EXPECT_EQ(out.amplitude(basis_key(single(1))), Complex(0.6, 0.8));
  EXPECT_EQ(out.size(), 1u);
}

TEST(Evolve, NormDriftOverManySteps) {
  std::mt19937_64 rng(64);
  const Generator gen = dense_generator(random_hermitian(rng, 64, 1.0));
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(64);
  v.normalize();
  const Wavefunctional psi = from_dense(v, gen);
  const Wavefunctional out = evolve(psi, gen, 0.01, 1000);
  EXPECT_LT(std::abs(out.norm() - 1.0), 1e-10);
  const Wavefunctional back = evolve(out, gen, -0.01, 1000);
  EXPECT_LT((to_dense(back, gen) - v).norm(), 1e-9);
}

TEST(Evolve, StepperMatchesEvolve) {
  std::mt19937_64 rng(3);
  const Generator gen = dense_generator(random_hermitian(rng, 10, 2.0));
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(10).normalized();
  const Stepper step(gen, 0.05, 7);
  const Wavefunctional a = step(from_dense(v, gen));
  const Wavefunctional b = evolve(from_dense(v, gen), gen, 0.05, 7);
  EXPECT_EQ(to_dense(a, gen), to_dense(b, gen));
  const Eigen::VectorXcd ref = oracles::eigen_propagator(gen.matrix, 0.35) * v;
  EXPECT_LT((to_dense(a, gen) - ref).norm(), 1e-12);
}

TEST(Evolve, RejectsSupportOutsideBasis) {
  const Generator gen = expand_reachable(ket(single(1)), {}, 10);
  EXPECT_THROW(evolve(ket(single(5)), gen, 0.1, 1), InvalidState);
}

TEST(Evolve, SupportEscapeOnTruncatedGenerator) {
  const SpaceState seed = make_state({vf(1), vf(1), vf(3), vf(1)}, {edge(0, 1), edge(1, 2), edge(2, 3)});
  const Generator gen = expand_reachable(ket(seed), three_rules(), 5, true);
  EXPECT_THROW(evolve(ket(seed), gen, 0.1, 3), SupportEscape);
  EvolveOptions leak;
  leak.accept_leak = true;
  EXPECT_NO_THROW(evolve(ket(seed), gen, 0.1, 3, leak));
}

TEST(Expm, MatchesEigenDecomposition) {
  std::mt19937_64 rng(11);
  for (double scale : {1e-6, 0.01, 0.3, 1.0, 5.0, 40.0}) {
    for (int n : {1, 2, 7, 20}) {
      const Eigen::MatrixXcd h = random_hermitian(rng, n, scale);
      const Eigen::MatrixXcd u = expm(Complex(0, -1) * h);
      const Eigen::MatrixXcd ref = oracles::eigen_propagator(h, 1.0);
      EXPECT_LT((u - ref).norm(), 1e-12 * std::max(1.0, n * scale)) << n << " " << scale;
      EXPECT_LT((u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-12 * std::max(1.0, n * scale));
    }
  }
  EXPECT_TRUE(expm(Eigen::MatrixXcd::Zero(3, 3)).isIdentity());
}

TEST(Interference, MaskedCrossTerm) {
  const SpaceState a = testing::path({1, 1});
  const SpaceState b = testing::path({1, 2});
  Wavefunctional psi;
  psi.add(a, 1 / std::sqrt(2.0));
  psi.add(b, 1 / std::sqrt(2.0));
  LocalObservable obs;
  obs.elements.push_back({basis_key(a), basis_key(b), 1.0});
  const InterferenceResult r = interference_term(psi, obs);
  EXPECT_NEAR(r.full, 1.0, 1e-15);
  EXPECT_NEAR(r.masked, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.diagonal, 0.0, 1e-15);
}

TEST(Interference, DissociatedCrossTermVanishes) {
  Wavefunctional psi;
  psi.add(single(1), 0.6);
  psi.add(single(2), Complex(0, 0.8));
  LocalObservable obs;
  obs.diagonal = [](const SpaceState &s) { return static_cast<double>(s.fields[0].species_tag); };
  obs.elements.push_back({basis_key(single(1)), basis_key(single(2)), Complex(0, 1)});
  const InterferenceResult r = interference_term(psi, obs);
  EXPECT_NEAR(r.diagonal, 0.36 + 2 * 0.64, 1e-15);
  EXPECT_NEAR(r.masked, r.diagonal, 1e-15);
  // conj(0.6) * i * 0.8i + conj(0.8i) * (-i) * 0.6
  EXPECT_NEAR(r.full, r.diagonal - 0.96, 1e-15);
}

TEST(Interference, HoppingMatchesGeneratorExpectation) {
  std::mt19937_64 rng(5);
  const SpaceState seed = make_state({vf(1), vf(1), vf(3), vf(1)}, {edge(0, 1), edge(1, 2), edge(2, 3)});
  const Generator gen = expand_reachable(ket(seed), three_rules(), 400);
  const auto n = static_cast<Eigen::Index>(gen.dimension());
  Eigen::VectorXcd v(n);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  v.normalize();
  LocalObservable obs;
  obs.hopping = three_rules();
  const InterferenceResult r = interference_term(from_dense(v, gen), obs);
  EXPECT_NEAR(r.full, (v.adjoint() * gen.matrix * v)(0).real(), 1e-12);
  const InterferenceResult all = interference_term(from_dense(v, gen), obs, {}, [](const Associability &) { return 1.0; });
  EXPECT_NEAR(all.masked, all.full, 1e-12);
  const InterferenceResult none = interference_term(from_dense(v, gen), obs, {}, [](const Associability &) { return 0.0; });
  EXPECT_NEAR(none.masked, none.diagonal, 1e-12);
}

}  // namespace
}  // namespace spacestate
