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

// JSON configuration. Every object rejects unknown keys. A physical quantity may be given either
// linearly ("sigma2_radar": 0.001) or in decibels ("sigma2_radar_dbm": 0), never both.
//
//   scene:  n_tx n_rx n_users irs_rows irs_cols spacing_over_lambda beta
//           sigma2_radar[_dbm] sigma2_comm[_dbm] power_budget[_dbm] alpha_gain[_db]
//           beampattern_tol[_db] rician_g[_db] rician_h[_db] rician_f[_db]
//           target_azimuth target_elevation desired_beam_weight
//   solver: eps_rel[_db] t_max n_g irs_solver inner_loop inner_tol inner_max safeguard theta_init
//   experiment: kind scene solver sweep{beta irs_elements n_g} trials master_seed output_dir
//               threads bench{reps rounds}

#pragma once

#include "isac/alternating.hpp"
#include "isac/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace isac {

using Json = nlohmann::json;

enum class ExperimentKind { kConvergence, kScaling, kRatio, kBench };

std::string to_string(ExperimentKind k);

struct SweepSpec {
  std::vector<double> beta;
  std::vector<int> irs_elements;
  std::vector<int> n_g;
};

struct BenchSpec {
  int reps = 100;
  int rounds = 3;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kConvergence;
  SceneConfig scene;
  SolverOptions solver;
  SweepSpec sweep;
  BenchSpec bench;
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::string output_dir;
  int threads = 1;

  /// Kind-specific checks: required sweep lists present and non-empty, unused lists absent.
  void validate() const;
};

SceneConfig scene_from_json(const Json& j, SceneConfig base = {});
SolverOptions solver_from_json(const Json& j, SolverOptions base = {});
ExperimentSpec experiment_from_json(const Json& j);

/// Parses text; syntax errors become ConfigError.
Json parse_json(const std::string& text);
ExperimentSpec load_experiment(const std::string& path);

/// Canonical resolved form (linear units, every key present). Round-trips through *_from_json.
Json to_json(const SceneConfig& c);
Json to_json(const SolverOptions& o);
Json to_json(const ExperimentSpec& s);

/// IRS of L elements laid out as rows x cols with rows the largest divisor of L not above sqrt(L).
std::pair<int, int> irs_layout(int l);

}  // namespace isac
