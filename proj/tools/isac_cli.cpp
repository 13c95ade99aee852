// SPDX-License-Identifier: Apache-2.0
//
// isac-irs: alternating precoder / IRS phase design for IRS-aided ISAC
// Copyright (C) 2026 isac-irs contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// isac: command-line front end over the C API.
//
//   isac run --config exp.json --out results/ [--seed N] [--trials N] [--threads N]
//   isac bench [--config bench.json] [--out dir] [--reps N]
//   isac validate-config --config exp.json
//   isac plotdata --in results/scaling.csv [--group method]
//
// Exit status: 0 success, 2 configuration error, 3 solver error (including failed trials), 1 other.

#include "isac/isac.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

const char* kDefaultBench = R"({"kind": "bench", "sweep": {"irs_elements": [2, 4, 6, 8]}, "master_seed": 1})";

int exit_code(isac_status s) {
  switch (s) {
    case ISAC_OK: return 0;
    case ISAC_ERR_CONFIG: return kExitConfig;
    case ISAC_ERR_SOLVER: return kExitSolver;
    default: return kExitOther;
  }
}

int report(isac_status s) {
  if (s != ISAC_OK) std::cerr << "isac: " << isac_last_error_message() << "\n";
  return exit_code(s);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_experiment(const std::string& config_text, const std::string& out, const isac_overrides& ov) {
  char* summary = nullptr;
  const isac_status s = isac_experiment_run(config_text.c_str(), out.empty() ? nullptr : out.c_str(), &ov, &summary);
  if (s != ISAC_OK) return report(s);
  const auto j = nlohmann::json::parse(summary);
  isac_string_free(summary);
  std::cout << j.dump(2) << "\n";
  if (j.at("trials_failed").get<int>() > 0) {
    std::cerr << "isac: " << j.at("trials_failed").get<int>() << " trial(s) failed, see failures.csv\n";
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-aided ISAC precoder / phase design experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(isac_version()));

  std::string config, out, in, group;
  std::uint64_t seed = 0;
  int trials = 0, threads = 0, reps = 0;

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("--config", config, "Experiment JSON")->required();
  run->add_option("--out", out, "Output directory (overrides output_dir)");
  auto* seed_opt = run->add_option("--seed", seed, "Master seed");
  auto* trials_opt = run->add_option("--trials", trials, "Trials per sweep point");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads");

  auto* bench = app.add_subcommand("bench", "Kernel micro-benchmarks");
  bench->add_option("--config", config, "Bench JSON (default: L in {2,4,6,8})");
  bench->add_option("--out", out, "Output directory");
  auto* reps_opt = bench->add_option("--reps", reps, "Repetitions per timing");

  auto* validate = app.add_subcommand("validate-config", "Check a config and print its resolved form");
  validate->add_option("--config", config, "Experiment JSON")->required();

  auto* plot = app.add_subcommand("plotdata", "Print a harness CSV as gnuplot data");
  plot->add_option("--in", in, "CSV file")->required();
  plot->add_option("--group", group, "Column that splits the data into gnuplot index blocks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (*run || *validate || (*bench && !config.empty())) {
    if (!read_file(config)) {
      std::cerr << "isac: cannot read config '" << config << "'\n";
      return kExitConfig;
    }
  }

  if (*run) {
    isac_overrides ov{};
    if (*seed_opt) ov.seed_set = 1, ov.seed = seed;
    if (*trials_opt) ov.trials_set = 1, ov.trials = trials;
    if (*threads_opt) ov.threads_set = 1, ov.threads = threads;
    return run_experiment(*read_file(config), out, ov);
  }
  if (*bench) {
    nlohmann::json j = nlohmann::json::parse(config.empty() ? std::string(kDefaultBench) : *read_file(config), nullptr,
                                             false);
    if (j.is_discarded()) {
      std::cerr << "isac: config is not valid JSON\n";
      return kExitConfig;
    }
    if (*reps_opt) j["bench"]["reps"] = reps;
    return run_experiment(j.dump(), out, isac_overrides{});
  }
  if (*validate) {
    char* resolved = nullptr;
    const isac_status s = isac_config_resolve(read_file(config)->c_str(), &resolved);
    if (s != ISAC_OK) return report(s);
    std::cout << resolved << "\n";
    isac_string_free(resolved);
    return 0;
  }
  if (*plot) {
    char* text = nullptr;
    const isac_status s = isac_plot_data(in.c_str(), group.empty() ? nullptr : group.c_str(), &text);
    if (s != ISAC_OK) return report(s);
    std::fputs(text, stdout);
    isac_string_free(text);
    return 0;
  }
  return kExitOther;
}
