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

#include "isac/alternating.hpp"
#include "test_util.hpp"

using namespace isac;
using namespace testutil;

namespace {

// reference scene: 30 dBm budget, 0 dBm noise, |alpha| = -20 dB
SceneConfig reference_scene(double beta) {
  SceneConfig c;
  c.beta = beta;
  c.power_budget = 1.0;
  c.sigma2_radar = c.sigma2_comm = 1e-3;
  c.alpha_gain = 1e-2;
  return c;
}

struct Drawn {
  ChannelSet ch;
  CMatrix r_d;
};

Drawn draw(const SceneConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  Drawn d;
  d.ch = draw_channels(cfg, rng);
  d.r_d = default_desired_covariance(cfg, d.ch);
  return d;
}

}  // namespace

TEST_SUITE("alternating") {

TEST_CASE("TerminationRule: constant objective stops at the first check") {
  TerminationRule rule(0.01, 20);
  CHECK_FALSE(rule.update(7.0).has_value());
  const auto stop = rule.update(7.0);
  REQUIRE(stop.has_value());
  CHECK(*stop == Termination::kTolerance);
  CHECK(rule.iterations() == 2);
}

TEST_CASE("TerminationRule: threshold and t_max") {
  TerminationRule rule(0.01, 3);
  CHECK_FALSE(rule.update(1.0).has_value());
  CHECK_FALSE(rule.update(1.5).has_value());
  CHECK(rule.update(1.5 * 1.005).value() == Termination::kTolerance);

  TerminationRule capped(1e-9, 3);
  capped.update(1.0);
  capped.update(2.0);
  CHECK(capped.update(3.0).value() == Termination::kMaxIterations);

  TerminationRule one(0.01, 1);
  CHECK(one.update(5.0).value() == Termination::kMaxIterations);

  TerminationRule zero(0.01, 10);
  zero.update(0.0);
  CHECK(zero.update(0.0).value() == Termination::kTolerance);
  TerminationRule negative(0.01, 10);
  negative.update(-2.0);
  CHECK_FALSE(negative.update(-2.5).has_value());
}

TEST_CASE("SolverOptions::validate") {
  SolverOptions o;
  CHECK_NOTHROW(o.validate());
  o.eps_rel = 0.0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
  o = SolverOptions{};
  o.t_max = 0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
  o = SolverOptions{};
  o.n_g = 0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
}

TEST_CASE("run_alternating: t_max = 1 records one iteration") {
  const SceneConfig cfg = reference_scene(0.5);
  const Drawn d = draw(cfg, 1);
  SolverOptions o;
  o.t_max = 1;
  const RunResult r = run_alternating(d.ch, cfg, d.r_d, o);
  CHECK(r.trace.outer_iterations() == 1);
  CHECK(r.trace.terminated_by == Termination::kMaxIterations);
  CHECK(r.trace.wall_time_per_stage.size() == 1);
  CHECK(r.trace.irs_inner_iterations == std::vector<int>{1});
}

TEST_CASE("run_alternating: reference scene converges inside 20 iterations") {
  for (double beta : {0.01, 0.5, 0.99}) {
    const SceneConfig cfg = reference_scene(beta);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Drawn d = draw(cfg, 10 + seed);
      SolverOptions o;
      o.seed = seed;
      const RunResult r = run_alternating(d.ch, cfg, d.r_d, o);
      const RunTrace& t = r.trace;
      CHECK(t.outer_iterations() <= 20);
      CHECK(t.terminated_by == Termination::kTolerance);
      CHECK(t.objective_per_outer.back() >= t.objective_per_outer.front() * (1 - 1e-6));
      CHECK(r.theta.is_unit_modulus(1e-12));
      CHECK(std::abs(r.precoder.power() - cfg.power_budget) < 1e-10);
      CHECK((r.precoder.covariance() - d.r_d).squaredNorm() <= cfg.beampattern_tol * (1 + 1e-9));
      for (int i = 0; i < t.outer_iterations(); ++i) {
        CHECK(t.precoder_objective_per_outer[i] <= t.relaxed_objective_per_outer[i] * (1 + 1e-9));
        // the IRS stage starts from the precoder stage's value and never lowers it
        CHECK(t.objective_per_outer[i] >= t.precoder_objective_per_outer[i] * (1 - 1e-9));
        CHECK(rel_err(t.objective_per_outer[i], beta * t.snr_radar_per_outer[i] + (1 - beta) * t.snr_comm_per_outer[i]) <
              1e-12);
      }
    }
  }
}

TEST_CASE("run_alternating: final objective matches the snapshot of the returned design") {
  const SceneConfig cfg = reference_scene(0.9);
  const Drawn d = draw(cfg, 20);
  const RunResult r = run_alternating(d.ch, cfg, d.r_d, SolverOptions{});
  const SnrSnapshot s = objective_snapshot(r.precoder, r.theta, d.ch, cfg);
  CHECK(s.objective == r.trace.objective_per_outer.back());
}

TEST_CASE("run_alternating: deterministic for a fixed seed") {
  const SceneConfig cfg = reference_scene(0.5);
  const Drawn d = draw(cfg, 30);
  SolverOptions o;
  o.seed = 42;
  o.theta_init = ThetaInit::kRandom;
  const RunResult a = run_alternating(d.ch, cfg, d.r_d, o);
  const RunResult b = run_alternating(d.ch, cfg, d.r_d, o);
  CHECK(a.trace.objective_per_outer == b.trace.objective_per_outer);
  CHECK(a.precoder.p == b.precoder.p);
  CHECK(a.theta.theta == b.theta.theta);
}

TEST_CASE("run_alternating: manifold and inner-loop modes") {
  const SceneConfig cfg = reference_scene(0.9);
  const Drawn d = draw(cfg, 40);
  SolverOptions o;
  o.irs_method = IrsMethod::kManifold;
  o.inner_loop = true;
  const RunResult r = run_alternating(d.ch, cfg, d.r_d, o);
  CHECK(r.trace.outer_iterations() >= 1);
  CHECK(r.trace.objective_per_outer.back() >= r.trace.objective_per_outer.front() * (1 - 1e-6));
  for (int n : r.trace.irs_inner_iterations) CHECK(n >= 0);
}

TEST_CASE("run_alternating: errors carry stage context") {
  SceneConfig cfg = reference_scene(0.5);
  const Drawn d = draw(cfg, 50);
  CMatrix bad = d.r_d;
  bad *= 2.0;
  CHECK_THROWS_AS(run_alternating(d.ch, cfg, bad, SolverOptions{}), ConfigError);

  // a ball too small for any rank-K candidate
  cfg.beampattern_tol = 1e-12;
  CMatrix omni = (cfg.power_budget / cfg.n_tx) * CMatrix::Identity(cfg.n_tx, cfg.n_tx);
  try {
    run_alternating(d.ch, cfg, omni, SolverOptions{});
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("precoder stage") != std::string::npos);
  }
}

}  // TEST_SUITE
