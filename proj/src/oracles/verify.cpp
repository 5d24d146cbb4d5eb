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

#include "oracles/verify.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles/oracles.hpp"
#include "spacestate/born.hpp"
#include "spacestate/canonical.hpp"
#include "spacestate/decimal.hpp"
#include "spacestate/ssg1.hpp"

namespace spacestate::oracles {

namespace {

constexpr int kOracleVertexLimit = 8;

CheckResult pass(std::string name, std::string detail = {}) {
  return {std::move(name), CheckStatus::Pass, std::move(detail)};
}
CheckResult fail(std::string name, std::string detail) { return {std::move(name), CheckStatus::Fail, std::move(detail)}; }
CheckResult skip(std::string name, std::string detail) { return {std::move(name), CheckStatus::Skip, std::move(detail)}; }

std::vector<SpaceState> load_corpus(const ExperimentConfig &config, const Generator &gen) {
  if (!config.verify_corpus) return gen.basis;
  std::vector<std::filesystem::path> files;
  for (const auto &entry : *config.verify_corpus) {
    const auto path = config.resolve(entry);
    if (std::filesystem::is_directory(path)) {
      for (const auto &f : std::filesystem::directory_iterator(path)) {
        if (f.path().extension() == ".ssg") files.push_back(f.path());
      }
    } else {
      files.push_back(path);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<SpaceState> out;
  for (const auto &f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw ConfigError("cannot read corpus file '" + f.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      out.push_back(read_ssg1(buf.str()));
    } catch (const Error &e) {
      throw ConfigError(f.string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> small_pairs(const std::vector<SpaceState> &corpus, std::size_t cap) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < corpus.size() && out.size() < cap; ++i) {
    if (corpus[i].vertex_count() > kOracleVertexLimit) continue;
    for (std::size_t j = i + 1; j < corpus.size() && out.size() < cap; ++j) {
      if (corpus[j].vertex_count() <= kOracleVertexLimit) out.emplace_back(i, j);
    }
  }
  return out;
}

CheckResult check_projectors(const MacroPartition &configured, const std::vector<SpaceState> &corpus) {
  std::vector<MacroPartition> partitions{configured};
  for (auto &p : builtin_classifiers()) partitions.push_back(std::move(p));
  for (const auto &p : partitions) {
    ProjectorReport report = verify_projector_algebra(p, corpus);
    if (!report.ok()) return fail("projector_algebra", p.name() + ": " + report.violations.front());
    const auto n = static_cast<Eigen::Index>(corpus.size());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::MatrixXd> proj;
    for (const auto &label : p.labels()) proj.push_back(dense_projector(p, corpus, label));
    for (std::size_t a = 0; a < proj.size(); ++a) {
      sum += proj[a];
      if (proj[a] * proj[a] != proj[a]) return fail("projector_algebra", p.name() + ": dense idempotence");
      for (std::size_t b = a + 1; b < proj.size(); ++b) {
        if (!(proj[a] * proj[b]).isZero(0.0)) return fail("projector_algebra", p.name() + ": dense orthogonality");
      }
    }
    if (n > 0 && sum != Eigen::MatrixXd::Identity(n, n)) return fail("projector_algebra", p.name() + ": completeness");
  }
  return pass("projector_algebra", std::to_string(partitions.size()) + " partitions over " +
                                       std::to_string(corpus.size()) + " states");
}

}  // namespace

std::vector<CheckResult> verify_experiment(const ExperimentConfig &config, const VerifyOptions &options) {
  std::vector<CheckResult> out;
  const ExperimentSetup setup = prepare(config);
  const Generator &gen = setup.generator;
  const std::vector<SpaceState> corpus = load_corpus(config, gen);

  out.push_back(check_projectors(setup.partition, gen.basis));

  std::vector<Wavefunctional> series;
  try {
    series = evolve_series(config, setup, options.inject_norm_fault);
    double drift = 0;
    for (const auto &psi : series) drift = std::max(drift, std::abs(psi.norm_squared() - 1.0));
    out.push_back(pass("unitarity", "max norm drift " + format_double(drift)));
  } catch (const NumericalFailure &e) {
    out.push_back(fail("unitarity", e.what()));
  }

  if (gen.dimension() > 512) {
    out.push_back(skip("propagator_oracle", "basis larger than 512"));
  } else {
    const Eigen::MatrixXcd u = propagator(gen, config.dt);
    const double err = (u - eigen_propagator(gen.matrix, config.dt)).cwiseAbs().maxCoeff();
    out.push_back(err <= 1e-10 ? pass("propagator_oracle", "max error " + format_double(err))
                               : fail("propagator_oracle", "max error " + format_double(err)));
  }

  if (series.empty()) {
    out.push_back(skip("gauge_roundtrip", "no evolved state"));
    out.push_back(skip("refinement_weights", "no evolved state"));
    out.push_back(skip("sampler_fit", "no evolved state"));
  } else {
    const Wavefunctional &final_state = series.back();
    const DensitizedView view = gauge_absorb(final_state);
    const Wavefunctional back = view.reconstruct();
    double err = 0;
    bool same_support = back.size() == final_state.size();
    for (const auto &[key, e] : final_state.entries()) {
      same_support = same_support && back.contains(key);
      err = std::max(err, std::abs(back.amplitude(key) - e.amplitude));
    }
    bool nonneg = true;
    for (const auto &[key, d] : view.entries) nonneg = nonneg && d.density >= 0;
    if (same_support && nonneg && err <= 1e-15) {
      out.push_back(pass("gauge_roundtrip", "max error " + format_double(err)));
    } else {
      out.push_back(fail("gauge_roundtrip", "max error " + format_double(err)));
    }

    const RefinementTree tree = build_refinement(view, config.depth_max, &setup.partition);
    std::string problem;
    for (int d = 0; d <= tree.depth() && problem.empty(); ++d) {
      mpq_class expected = tree.total;
      expected /= mpq_class(mpz_class(1) << d);
      for (std::size_t c = 0; c < tree.levels[d].cell_count(); ++c) {
        if (tree.cell_weight(d, c) != expected) {
          problem = "depth " + std::to_string(d) + " cell " + std::to_string(c) + " has unequal weight";
          break;
        }
      }
      const CountReport r = count_estimate(tree, setup.partition, d);
      for (const auto &l : r.labels) {
        if (std::abs(l.estimate - l.exact) > r.bound() + 1e-12) problem = "counting bound violated at depth " + std::to_string(d);
      }
    }
    out.push_back(problem.empty() ? pass("refinement_weights", "depth " + std::to_string(tree.depth()))
                                  : fail("refinement_weights", problem));

    const SampleReport sr = sample_selflocation(view, setup.partition, config.samples, config.seed);
    const ChiSquared chi = chi_squared_test(sr.counts, sr.exact);
    out.push_back(chi.p_value >= 1e-3 ? pass("sampler_fit", "p = " + format_double(chi.p_value))
                                      : fail("sampler_fit", "p = " + format_double(chi.p_value)));
  }

  const auto pairs = small_pairs(corpus, options.max_pairs);
  if (corpus.empty() || pairs.empty()) {
    out.push_back(skip("isomorphism_oracle", "empty corpus"));
    out.push_back(skip("associability_oracle", "empty corpus"));
    return out;
  }
  std::size_t mismatches = 0;
  for (const auto &[i, j] : pairs) {
    const bool fast = canonicalize(corpus[i]) == canonicalize(corpus[j]);
    if (fast != brute_isomorphic(corpus[i], corpus[j])) ++mismatches;
  }
  out.push_back(mismatches == 0 ? pass("isomorphism_oracle", std::to_string(pairs.size()) + " pairs")
                                : fail("isomorphism_oracle", std::to_string(mismatches) + " disagreements"));
  mismatches = 0;
  const auto assoc = config.association();
  for (const auto &[i, j] : pairs) {
    if (classify_associability(corpus[i], corpus[j], assoc) != brute_classify(corpus[i], corpus[j], assoc)) {
      ++mismatches;
    }
  }
  out.push_back(mismatches == 0 ? pass("associability_oracle", std::to_string(pairs.size()) + " pairs")
                                : fail("associability_oracle", std::to_string(mismatches) + " disagreements"));
  return out;
}

std::string format_check(const CheckResult &r) {
  const char *tag = r.status == CheckStatus::Pass ? "PASS" : r.status == CheckStatus::Fail ? "FAIL" : "SKIP";
  std::string line = std::string(tag) + " " + r.name;
  if (!r.detail.empty()) line += ": " + r.detail;
  return line;
}

bool all_passed(const std::vector<CheckResult> &results) {
  for (const auto &r : results) {
    if (r.status == CheckStatus::Fail) return false;
  }
  return true;
}

}  // namespace spacestate::oracles
