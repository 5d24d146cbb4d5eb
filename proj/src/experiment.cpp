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

#include "spacestate/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spacestate/born.hpp"
#include "spacestate/decimal.hpp"
#include "spacestate/ssg1.hpp"

namespace spacestate {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Object {
 public:
  Object(const json &j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(name("") + " must be an object");
  }

  void allow(std::initializer_list<const char *> keys) const {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto &[k, v] : j_.items()) {
      if (!known.count(k)) throw ConfigError("unknown configuration key '" + name(k) + "'");
    }
  }

  bool has(const char *key) const { return j_.contains(key); }
  const json &at(const char *key) const { return j_.at(key); }

  std::string name(const std::string &key) const {
    if (where_.empty()) return key.empty() ? "configuration" : key;
    return key.empty() ? where_ : where_ + "." + key;
  }

  std::string string(const char *key) const {
    const json &v = require(key);
    if (!v.is_string()) throw ConfigError("'" + name(key) + "' must be a string");
    return v.get<std::string>();
  }

  template <typename T>
  T integer(const char *key, T lo, T hi, T fallback) const {
    if (!has(key)) return fallback;
    const json &v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError("'" + name(key) + "' must be an integer");
    if (v.is_number_unsigned()) {
      auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(hi)) throw ConfigError("'" + name(key) + "' out of range");
      return static_cast<T>(u);
    }
    auto s = v.get<std::int64_t>();
    if (s < static_cast<std::int64_t>(lo) || (hi >= 0 && s > static_cast<std::int64_t>(hi))) {
      throw ConfigError("'" + name(key) + "' out of range");
    }
    return static_cast<T>(s);
  }

  double number(const char *key, double fallback) const {
    if (!has(key)) return fallback;
    const json &v = j_.at(key);
    if (!v.is_number()) throw ConfigError("'" + name(key) + "' must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("'" + name(key) + "' must be finite");
    return x;
  }

  bool boolean(const char *key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw ConfigError("'" + name(key) + "' must be true or false");
    return j_.at(key).get<bool>();
  }

  Rational rational(const char *key, Rational fallback) const {
    if (!has(key)) return fallback;
    const json &v = j_.at(key);
    try {
      if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
      if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const Error &) {
    }
    throw ConfigError("'" + name(key) + "' must be an integer or a \"p/q\" string");
  }

 private:
  const json &require(const char *key) const {
    if (!has(key)) throw ConfigError("missing configuration key '" + name(key) + "'");
    return j_.at(key);
  }

  const json &j_;
  std::string where_;
};

DegenerateSpec parse_degenerate(const Object &o) {
  o.allow({"vertices", "topology", "species", "matter", "phase"});
  DegenerateSpec spec;
  spec.vertices = o.integer<int>("vertices", 1, 64, 1);
  spec.topology = o.has("topology") ? o.string("topology") : "path";
  if (spec.topology != "path" && spec.topology != "cycle" && spec.topology != "complete") {
    throw ConfigError("'" + o.name("topology") + "' must be path, cycle or complete");
  }
  spec.species = o.integer<int>("species", std::numeric_limits<int>::min(), std::numeric_limits<int>::max(), 1);
  spec.matter = o.rational("matter", Rational(0));
  if (spec.matter < 0) throw ConfigError("'" + o.name("matter") + "' must be non-negative");
  spec.phase = Phase(o.integer<std::uint64_t>("phase", 0, std::numeric_limits<std::uint64_t>::max(), 0));
  return spec;
}

}  // namespace

std::filesystem::path ExperimentConfig::resolve(const std::string &path) const {
  std::filesystem::path p(path);
  return (p.is_absolute() ? p : base_dir / p).lexically_normal();
}

AssociabilityOptions ExperimentConfig::association() const {
  AssociabilityOptions o;
  o.k_min = k_min;
  o.min_overlap = min_overlap;
  return o;
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path &base_dir) {
  json root;
  std::vector<std::set<std::string>> open_objects;
  std::string duplicate;
  const json::parser_callback_t track_keys = [&](int, json::parse_event_t event, json &parsed) {
    if (event == json::parse_event_t::object_start) {
      open_objects.emplace_back();
    } else if (event == json::parse_event_t::object_end) {
      open_objects.pop_back();
    } else if (event == json::parse_event_t::key && duplicate.empty() &&
               !open_objects.back().insert(parsed.get<std::string>()).second) {
      duplicate = parsed.get<std::string>();
    }
    return true;
  };
  try {
    root = json::parse(json_text, track_keys);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!duplicate.empty()) throw ConfigError("duplicate configuration key '" + duplicate + "'");
  const Object o(root, "");
  o.allow({"rules_file", "initial_state", "partition", "k_min", "min_overlap", "dt", "steps", "epochs", "depth_max",
           "samples", "seed", "output_dir", "max_dim", "accept_truncation", "horizon", "threads", "asymmetry",
           "verify_corpus"});
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.rules_file = o.string("rules_file");
  if (!o.has("initial_state")) throw ConfigError("missing configuration key 'initial_state'");
  if (o.at("initial_state").is_string()) {
    c.initial_state_file = o.string("initial_state");
  } else {
    const Object init(o.at("initial_state"), "initial_state");
    init.allow({"degenerate"});
    if (!init.has("degenerate")) throw ConfigError("missing configuration key 'initial_state.degenerate'");
    c.degenerate = parse_degenerate(Object(init.at("degenerate"), "initial_state.degenerate"));
  }
  if (!o.has("partition")) throw ConfigError("missing configuration key 'partition'");
  const Object part(o.at("partition"), "partition");
  part.allow({"name", "params"});
  c.partition_name = part.string("name");
  if (part.has("params")) {
    const Object params(part.at("params"), "partition.params");
    for (const auto &[k, v] : part.at("params").items()) {
      if (v.is_string()) {
        c.partition_params[k] = v.get<std::string>();
      } else if (v.is_number_integer()) {
        c.partition_params[k] = v.dump();
      } else {
        throw ConfigError("'partition.params." + k + "' must be an integer or a string");
      }
    }
  }
  c.k_min = o.integer<int>("k_min", 1, 64, 2);
  c.min_overlap = o.rational("min_overlap", Rational(0));
  if (c.min_overlap < 0 || c.min_overlap > 1) throw ConfigError("'min_overlap' must lie in [0, 1]");
  c.dt = o.number("dt", 0.1);
  if (c.dt == 0) throw ConfigError("'dt' must be non-zero");
  c.steps = o.integer<int>("steps", 1, 100000, 1);
  c.epochs = o.integer<int>("epochs", 1, 10000, 10);
  c.depth_max = o.integer<int>("depth_max", 0, kMaxRefinementDepth, 12);
  c.samples = o.integer<std::uint64_t>("samples", 1, 1000000000, 100000);
  c.seed = o.integer<std::uint64_t>("seed", 0, std::numeric_limits<std::uint64_t>::max(), 1);
  c.output_dir = o.has("output_dir") ? o.string("output_dir") : "out";
  c.max_dim = o.integer<std::size_t>("max_dim", 1, 4096, 256);
  c.accept_truncation = o.boolean("accept_truncation", false);
  c.horizon = o.integer<int>("horizon", 0, 10000, 3);
  if (o.has("threads")) c.threads = o.integer<int>("threads", 1, 1024, 1);
  if (o.has("asymmetry")) {
    const Object a(o.at("asymmetry"), "asymmetry");
    a.allow({"seeds", "coupling_jitter"});
    AsymmetryConfig ac;
    ac.seeds = a.integer<int>("seeds", 1, 10000, 100);
    ac.coupling_jitter = a.number("coupling_jitter", 0.0);
    if (ac.coupling_jitter < 0 || ac.coupling_jitter >= 1) {
      throw ConfigError("'asymmetry.coupling_jitter' must lie in [0, 1)");
    }
    c.asymmetry = ac;
  }
  if (o.has("verify_corpus")) {
    const json &v = o.at("verify_corpus");
    if (!v.is_array()) throw ConfigError("'verify_corpus' must be a list of paths");
    std::vector<std::string> paths;
    for (const auto &p : v) {
      if (!p.is_string()) throw ConfigError("'verify_corpus' must be a list of paths");
      paths.push_back(p.get<std::string>());
    }
    c.verify_corpus = paths;
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  return parse_config(read_file(path), path.parent_path());
}

std::string canonical_config_json(const ExperimentConfig &c) {
  json j;
  j["rules_file"] = c.rules_file;
  if (c.initial_state_file) {
    j["initial_state"] = *c.initial_state_file;
  } else {
    const auto &d = *c.degenerate;
    j["initial_state"]["degenerate"] = {{"vertices", d.vertices},
                                        {"topology", d.topology},
                                        {"species", d.species},
                                        {"matter", to_string(d.matter)},
                                        {"phase", d.phase.code()}};
  }
  j["partition"]["name"] = c.partition_name;
  j["partition"]["params"] = json::object();
  for (const auto &[k, v] : c.partition_params) j["partition"]["params"][k] = v;
  j["k_min"] = c.k_min;
  j["min_overlap"] = to_string(c.min_overlap);
  j["dt"] = format_double(c.dt);
  j["steps"] = c.steps;
  j["epochs"] = c.epochs;
  j["depth_max"] = c.depth_max;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["max_dim"] = c.max_dim;
  j["accept_truncation"] = c.accept_truncation;
  j["horizon"] = c.horizon;
  if (c.asymmetry) {
    j["asymmetry"] = {{"seeds", c.asymmetry->seeds}, {"coupling_jitter", format_double(c.asymmetry->coupling_jitter)}};
  }
  if (c.verify_corpus) j["verify_corpus"] = *c.verify_corpus;
  return j.dump();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static const char *hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

ExperimentSetup prepare(const ExperimentConfig &config) {
  std::vector<RewriteRule> rules;
  {
    const auto path = config.resolve(config.rules_file);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuleFileError("cannot read rule file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      rules = read_rul1(buf.str());
    } catch (const Error &e) {
      throw RuleFileError(path.string() + ": " + e.what());
    }
  }
  Wavefunctional initial;
  try {
    if (config.initial_state_file) {
      const auto path = config.resolve(*config.initial_state_file);
      std::string text = read_file(path);
      if (text.rfind("WFN1", 0) == 0) {
        initial = read_wfn1(text);
      } else {
        initial.add(read_ssg1(text), 1.0);
      }
    } else {
      initial.add(degenerate_state(*config.degenerate), 1.0);
    }
  } catch (const ConfigError &) {
    throw;
  } catch (const Error &e) {
    throw ConfigError(std::string("initial_state: ") + e.what());
  }
  if (std::abs(initial.norm_squared() - 1.0) > kNormTolerance) throw ConfigError("initial_state is not normalized");
  std::optional<MacroPartition> partition;
  try {
    partition = make_partition(config.partition_name, config.partition_params);
  } catch (const Error &e) {
    throw ConfigError(std::string("partition: ") + e.what());
  }
  Generator gen = expand_reachable(initial, rules, config.max_dim, config.accept_truncation);
  return {std::move(rules), std::move(initial), std::move(*partition), std::move(gen)};
}

std::vector<Wavefunctional> evolve_series(const ExperimentConfig &config, const ExperimentSetup &setup,
                                          bool perturb_norm) {
  EvolveOptions eo;
  eo.accept_leak = config.accept_truncation;
  const Stepper step(setup.generator, config.dt, config.steps, eo);
  std::vector<Wavefunctional> series{setup.initial};
  series.front().set_epoch(0);
  for (int e = 1; e <= config.epochs; ++e) {
    Wavefunctional next = step(series.back());
    if (perturb_norm && e == 1) next = scale(next, 1.0 + 1e-6);
    next.set_epoch(e);
    const double drift = std::abs(next.norm_squared() - 1.0);
    if (!(drift <= kNormTolerance)) {
      throw NumericalFailure("norm drift " + format_double(drift) + " at epoch " + std::to_string(e));
    }
    series.push_back(std::move(next));
  }
  return series;
}

namespace {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string &name, const std::string &content) {
    write_raw(name, content);
    records_.push_back({name, sha256_hex(content)});
  }

  void write_raw(const std::string &name, const std::string &content) const {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
  }

  std::vector<ArtifactRecord> records() const {
    auto r = records_;
    std::sort(r.begin(), r.end(), [](const auto &a, const auto &b) { return a.name < b.name; });
    return r;
  }

 private:
  std::filesystem::path dir_;
  std::vector<ArtifactRecord> records_;
};

std::string evolution_csv(const std::vector<Wavefunctional> &series, const Generator &gen, const ExperimentConfig &c) {
  std::string out = "epoch,time,index,key,cell,re,im,prob\n";
  for (const auto &psi : series) {
    const double time = static_cast<double>(psi.epoch()) * c.steps * c.dt;
    for (const auto &[key, e] : psi.entries()) {
      out += std::to_string(psi.epoch()) + "," + format_double(time) + "," + std::to_string(gen.index_of(key)) + "," +
             key.graph.hex() + "," + key.cell.to_string() + "," + format_double(e.amplitude.real()) + "," +
             format_double(e.amplitude.imag()) + "," + format_double(std::norm(e.amplitude)) + "\n";
    }
  }
  return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options) {
  const ExperimentSetup setup = prepare(config);
  const auto series = evolve_series(config, setup, options.inject_norm_fault);

  RunResult result;
  result.output_dir = config.resolve(config.output_dir);
  ArtifactWriter out(result.output_dir);
  out.write("evolution.csv", evolution_csv(series, setup.generator, config));
  out.write("state_initial.wfn", write_wfn1(series.front()));
  out.write("state_final.wfn", write_wfn1(series.back()));

  const AssociabilityTable table(setup.generator.basis, config.association());
  TrackOptions track_options;
  track_options.association = config.association();
  track_options.generator = &setup.generator;
  track_options.table = &table;
  BranchTree tree = track(series, setup.partition, track_options);
  irreversibility_scan(tree, config.horizon, track_options);
  out.write("branches.jsonl", branch_events_jsonl(tree));
  out.write("branch_summary.csv", branch_summary_csv(tree));

  const DensitizedView view = gauge_absorb(series.back());
  const RefinementTree refinement = build_refinement(view, config.depth_max, &setup.partition);
  std::vector<CountReport> reports;
  for (int d = 0; d <= config.depth_max; ++d) reports.push_back(count_estimate(refinement, setup.partition, d));
  out.write("counts.csv", count_reports_csv(reports));
  out.write("samples.csv", samples_csv(sample_selflocation(view, setup.partition, config.samples, config.seed)));

  if (config.asymmetry) {
    AsymmetryOptions ao;
    ao.epochs = config.epochs;
    ao.dt = config.dt;
    ao.steps = config.steps;
    ao.coupling_jitter = config.asymmetry->coupling_jitter;
    ao.track = track_options;
    ao.evolve.accept_leak = config.accept_truncation;
    std::vector<AsymmetryRun> runs;
    for (int s = 0; s < config.asymmetry->seeds; ++s) {
      runs.push_back(asymmetry_experiment(setup.generator, setup.initial, setup.rules, setup.partition,
                                          config.seed + static_cast<std::uint64_t>(s), ao));
    }
    out.write("asymmetry.csv", asymmetry_csv(runs));
    out.write("asymmetry_seeds.csv", asymmetry_seeds_csv(runs));
  }

  result.artifacts = out.records();
  nlohmann::ordered_json manifest;
  manifest["tool"] = "spacestate";
  manifest["version"] = kToolVersion;
  manifest["config_sha256"] = sha256_hex(canonical_config_json(config));
  manifest["seed"] = config.seed;
  manifest["files"] = nlohmann::ordered_json::array();
  for (const auto &a : result.artifacts) manifest["files"].push_back({{"name", a.name}, {"sha256", a.sha256}});
  out.write_raw("manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace spacestate
