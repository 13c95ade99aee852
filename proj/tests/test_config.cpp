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

#include <doctest.h>

#include "isac/config.hpp"
#include "isac/scene.hpp"

#include <cstdio>
#include <fstream>

using namespace isac;

TEST_SUITE("config") {

TEST_CASE("scene: defaults, linear and decibel keys") {
  const SceneConfig d = scene_from_json(Json::object());
  CHECK(d.n_tx == SceneConfig{}.n_tx);
  const SceneConfig c = scene_from_json(parse_json(R"({
    "power_budget_dbm": 30, "sigma2_radar_dbm": 0, "sigma2_comm": 0.5,
    "alpha_gain_db": -20, "rician_h_db": -10, "irs_rows": 4, "irs_cols": 9})"));
  CHECK(c.power_budget == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.sigma2_radar == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(c.sigma2_comm == 0.5);
  CHECK(c.alpha_gain == doctest::Approx(1e-2).epsilon(1e-15));
  CHECK(c.rician_h == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(c.irs_elements() == 36);
}

TEST_CASE("scene: rejects unknown keys, duplicates and bad types") {
  CHECK_THROWS_AS(scene_from_json(parse_json(R"({"n_txx": 4})")), ConfigError);
  CHECK_THROWS_AS(scene_from_json(parse_json(R"({"power_budget": 1, "power_budget_dbm": 30})")), ConfigError);
  CHECK_THROWS_AS(scene_from_json(parse_json(R"({"n_tx": 2.5})")), ConfigError);
  CHECK_THROWS_AS(scene_from_json(parse_json(R"({"beta": "high"})")), ConfigError);
  CHECK_THROWS_AS(scene_from_json(parse_json(R"({"beta": 1.5})")), ConfigError);
  CHECK_THROWS_AS(scene_from_json(parse_json("[1, 2]")), ConfigError);
}

TEST_CASE("solver keys") {
  const SolverOptions o = solver_from_json(parse_json(R"({
    "eps_rel_db": -20, "t_max": 7, "n_g": 11, "irs_solver": "manifold", "inner_loop": true,
    "inner_tol": 1e-5, "inner_max": 9, "safeguard": false, "theta_init": "random"})"));
  CHECK(o.eps_rel == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(o.t_max == 7);
  CHECK(o.n_g == 11);
  CHECK(o.irs_method == IrsMethod::kManifold);
  CHECK(o.inner_loop);
  CHECK(o.inner.inner_tol == 1e-5);
  CHECK(o.inner.inner_max == 9);
  CHECK_FALSE(o.inner.safeguard);
  CHECK(o.theta_init == ThetaInit::kRandom);
  CHECK_THROWS_AS(solver_from_json(parse_json(R"({"irs_solver": "sdr"})")), ConfigError);
  CHECK_THROWS_AS(solver_from_json(parse_json(R"({"t_max": 0})")), ConfigError);
  CHECK_THROWS_AS(solver_from_json(parse_json(R"({"tmax": 3})")), ConfigError);
}

TEST_CASE("experiment: kinds and sweep rules") {
  const ExperimentSpec s = experiment_from_json(parse_json(R"({
    "kind": "ratio", "sweep": {"irs_elements": [8, 36], "n_g": [10, 100]},
    "trials": 3, "master_seed": 18446744073709551615})"));
  CHECK(s.kind == ExperimentKind::kRatio);
  CHECK(s.sweep.irs_elements == std::vector<int>{8, 36});
  CHECK(s.master_seed == 18446744073709551615ull);
  CHECK(s.trials == 3);

  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"sweep": {"beta": [0.5]}})")), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"kind": "fig2", "sweep": {"beta": [0.5]}})")), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"kind": "convergence"})")), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"kind": "convergence", "sweep": {"beta": []}})")), ConfigError);
  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"kind": "convergence", "sweep": {"beta": [0.5], "n_g": [1]}})")),
                  ConfigError);
  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"kind": "scaling", "sweep": {"irs_elements": [0]}})")),
                  ConfigError);
  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"kind": "ratio", "sweep": {"irs_elements": [4]}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      experiment_from_json(parse_json(R"({"kind": "convergence", "sweep": {"beta": [0.5]}, "trials": 0})")),
      ConfigError);
  CHECK_THROWS_AS(
      experiment_from_json(parse_json(R"({"kind": "convergence", "sweep": {"beta": [0.5]}, "master_seed": -1})")),
      ConfigError);
  CHECK_THROWS_AS(experiment_from_json(parse_json(R"({"kind": "convergence", "sweep": {"beta": [0.5]}, "x": 1})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_json("{\"kind\": "), ConfigError);
}

TEST_CASE("to_json round-trips") {
  const ExperimentSpec s = experiment_from_json(parse_json(R"({
    "kind": "convergence", "scene": {"beta": 0.3, "alpha_gain_db": -17},
    "solver": {"irs_solver": "manifold", "n_g": 5}, "sweep": {"beta": [0.1, 0.9]},
    "trials": 4, "master_seed": 9, "output_dir": "out", "threads": 2})"));
  const Json j = to_json(s);
  const ExperimentSpec again = experiment_from_json(j);
  CHECK(to_json(again) == j);
  CHECK(j["scene"]["alpha_gain"].get<double>() == doctest::Approx(db_to_linear(-17)).epsilon(1e-15));
  CHECK(j["solver"]["irs_solver"] == "manifold");
}

TEST_CASE("load_experiment reads files and reports missing ones") {
  CHECK_THROWS_AS(load_experiment("/nonexistent/config.json"), ConfigError);
  const std::string path = "test_config_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"kind": "bench", "sweep": {"irs_elements": [4]}, "bench": {"reps": 3, "rounds": 2}})";
  }
  const ExperimentSpec s = load_experiment(path);
  CHECK(s.kind == ExperimentKind::kBench);
  CHECK(s.bench.reps == 3);
  CHECK(s.bench.rounds == 2);
  std::remove(path.c_str());
}

TEST_CASE("irs_layout") {
  CHECK(irs_layout(1) == std::pair{1, 1});
  CHECK(irs_layout(8) == std::pair{2, 4});
  CHECK(irs_layout(36) == std::pair{6, 6});
  CHECK(irs_layout(35) == std::pair{5, 7});
  CHECK(irs_layout(13) == std::pair{1, 13});
  CHECK(irs_layout(100) == std::pair{10, 10});
  CHECK_THROWS_AS(irs_layout(0), ConfigError);
}

}  // TEST_SUITE
