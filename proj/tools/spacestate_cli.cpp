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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "oracles/verify.hpp"
#include "spacestate/experiment.hpp"
#include "spacestate/kernels.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kConfig = 1,
  kRuleFile = 2,
  kTruncation = 3,
  kNumerical = 4,
  kVerify = 5,
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::string inject_fault;
};

template <typename T>
std::optional<T> env_number(const char *name) {
  const char *v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(name);
    return static_cast<T>(x);
  } catch (const std::exception &) {
    throw spacestate::ConfigError(std::string("environment variable ") + name + " is not a number");
  }
}

spacestate::ExperimentConfig configure(const std::string &path, const Overrides &flags) {
  auto config = spacestate::load_config(path);
  if (auto s = env_number<std::uint64_t>("SPACESTATE_SEED")) config.seed = *s;
  if (auto t = env_number<int>("SPACESTATE_THREADS")) config.threads = *t;
  if (const char *o = std::getenv("SPACESTATE_OUT"); o && *o) config.output_dir = o;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.threads) config.threads = *flags.threads;
  if (flags.out) config.output_dir = *flags.out;
  if (!flags.inject_fault.empty() && flags.inject_fault != "norm") {
    throw spacestate::ConfigError("unknown fault '" + flags.inject_fault + "'");
  }
  if (config.threads) {
    if (*config.threads < 1) throw spacestate::ConfigError("thread count must be positive");
    spacestate::kernels::set_threads(*config.threads);
  }
  return config;
}

int run(const std::string &path, const Overrides &flags) {
  const auto config = configure(path, flags);
  spacestate::RunOptions options;
  options.inject_norm_fault = flags.inject_fault == "norm";
  const auto result = spacestate::run_experiment(config, options);
  for (const auto &a : result.artifacts) std::cout << a.sha256 << "  " << (result.output_dir / a.name).string() << "\n";
  std::cout << "wrote " << (result.output_dir / "manifest.json").string() << "\n";
  return kOk;
}

int verify(const std::string &path, const Overrides &flags) {
  const auto config = configure(path, flags);
  spacestate::oracles::VerifyOptions options;
  options.inject_norm_fault = flags.inject_fault == "norm";
  const auto results = spacestate::oracles::verify_experiment(config, options);
  for (const auto &r : results) std::cout << spacestate::oracles::format_check(r) << "\n";
  return spacestate::oracles::all_passed(results) ? kOk : kVerify;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Space-state wavefunctional simulator"};
  app.set_version_flag("--version", std::string(spacestate::kToolVersion));
  app.require_subcommand(1);

  Overrides flags;
  std::string config_path;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("config", config_path, "JSON configuration file")->required();
    sub->add_option("--seed", flags.seed, "Override the configured seed");
    sub->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "Override the output directory");
    sub->add_option("--inject-fault", flags.inject_fault)->group("");
  };
  CLI::App *run_cmd = app.add_subcommand("run", "Run the configured experiment and write its artifacts");
  CLI::App *verify_cmd = app.add_subcommand("verify", "Run the invariant suite on the configured experiment");
  add_common(run_cmd);
  add_common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (run_cmd->parsed()) return run(config_path, flags);
    return verify(config_path, flags);
  } catch (const spacestate::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const spacestate::RuleFileError &e) {
    std::cerr << "rule file error: " << e.what() << "\n";
    return kRuleFile;
  } catch (const spacestate::TruncationExceeded &e) {
    std::cerr << "truncation refused: " << e.what() << "\n";
    return kTruncation;
  } catch (const spacestate::NumericalFailure &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const spacestate::SupportEscape &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}
