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

#include "isac/objective.hpp"
#include "isac/precoder.hpp"
#include "test_util.hpp"

using namespace isac;
using namespace testutil;

namespace {

double min_eig(const CMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

SceneConfig scene_for(int n, double pt, double gamma) {
  SceneConfig c;
  c.n_tx = c.n_rx = n;
  c.power_budget = pt;
  c.beampattern_tol = gamma;
  return c;
}

CMatrix omni(int n, double pt) { return (pt / n) * CMatrix::Identity(n, n); }

}  // namespace

TEST_SUITE("precoder") {

TEST_CASE("project_psd: eigenvalue clamp and idempotence") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK((project_psd(m) - expected).norm() < 1e-15);

  Rng rng(1);
  const CMatrix psd = random_psd(5, 3, rng);
  CHECK((project_psd(psd) - psd).norm() < 1e-12 * psd.norm());
  const CMatrix h = random_hermitian(5, rng);
  const CMatrix once = project_psd(h);
  CHECK((project_psd(once) - once).norm() < 1e-12 * std::max(1.0, once.norm()));
}

TEST_CASE("project_psd rejects non-Hermitian input") {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(project_psd(m), SolverError);
}

TEST_CASE("project_psd: no random PSD neighbour is closer") {
  Rng rng(2);
  const CMatrix in = random_hermitian(4, rng);
  const CMatrix out = project_psd(in);
  const double best = (out - in).norm();
  std::uniform_real_distribution<double> scale(1e-4, 1.0);
  int tested = 0;
  for (int i = 0; i < 100000; ++i) {
    // unrelated PSD matrices, PSD shifts of the projection, and Hermitian shifts that stay PSD
    CMatrix cand;
    switch (i % 3) {
      case 0: cand = random_psd(4, 1 + i % 4, rng); break;
      case 1: cand = out + scale(rng) * random_psd(4, 1 + i % 4, rng); break;
      default: cand = out + scale(rng) * random_hermitian(4, rng); break;
    }
    if (min_eig(cand) < -1e-13) continue;
    ++tested;
    CHECK_MESSAGE((cand - in).norm() >= best - 1e-12, "candidate " << i);
  }
  CHECK(tested > 66000);
}

TEST_CASE("project_trace") {
  Rng rng(3);
  const CMatrix m = random_hermitian(4, rng);
  const double target = 2.5;
  const CMatrix out = project_trace(m, target);
  CHECK(std::abs(out.trace().real() - target) < 1e-12);
  const CMatrix diff = out - m;
  CHECK((diff - diff(0, 0) * CMatrix::Identity(4, 4)).norm() < 1e-14);

  CMatrix on = m;
  on(0, 0) += target - on.trace();
  CHECK((project_trace(on, target) - on).norm() < 1e-14);
  CHECK((project_trace(CMatrix::Zero(4, 4), 1.0) - 0.25 * CMatrix::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("project_ball") {
  Rng rng(4);
  const CMatrix c = random_hermitian(3, rng);
  CHECK(project_ball(c, c, 2.0) == c);
  const CMatrix dir = random_hermitian(3, rng);
  const CMatrix far = c + (2.0 * std::sqrt(2.0) / dir.norm()) * dir;  // squared distance 4 * gamma
  const CMatrix out = project_ball(far, c, 2.0);
  CHECK(std::abs((out - c).norm() - std::sqrt(2.0)) < 1e-14);
  CHECK((out - (c + 0.5 * (far - c))).norm() < 1e-14);
}

TEST_CASE("project_ball: no random ball point is closer") {
  Rng rng(5);
  const CMatrix c = random_hermitian(3, rng);
  const CMatrix in = c + 5.0 * random_hermitian(3, rng);
  const double r2 = 1.3;
  const CMatrix out = project_ball(in, c, r2);
  const double best = (out - in).norm();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    CMatrix d = random_hermitian(3, rng);
    d *= std::sqrt(r2) * std::pow(u(rng), 1.0 / 9.0) / d.norm();
    const CMatrix cand = (i % 2) ? CMatrix(c + d) : project_ball(out + 0.01 * d, c, r2);
    CHECK((cand - in).norm() >= best - 1e-12);
  }
}

TEST_CASE("projections are non-expansive and idempotent") {
  Rng rng(6);
  const CMatrix c = random_psd(4, 4, rng);
  for (int rep = 0; rep < 50; ++rep) {
    const CMatrix x = 3.0 * random_hermitian(4, rng), y = 3.0 * random_hermitian(4, rng);
    const double d = (x - y).norm();
    CHECK((project_psd(x) - project_psd(y)).norm() <= d + 1e-12);
    CHECK((project_trace(x, 1.0) - project_trace(y, 1.0)).norm() <= d + 1e-12);
    CHECK((project_ball(x, c, 0.5) - project_ball(y, c, 0.5)).norm() <= d + 1e-12);
    CHECK((project_psd_trace(x, 1.0) - project_psd_trace(y, 1.0)).norm() <= d + 1e-12);
    const CMatrix p = project_psd_trace(x, 1.0);
    CHECK((project_psd_trace(p, 1.0) - p).norm() < 1e-12);
    const CMatrix b = project_ball(x, c, 0.5);
    CHECK((project_ball(b, c, 0.5) - b).norm() < 1e-12);
    const CMatrix t = project_trace(x, 1.0);
    CHECK((project_trace(t, 1.0) - t).norm() < 1e-12);
  }
}

TEST_CASE("project_simplex") {
  RVector v(4);
  v << 0.5, 0.2, -1.0, 0.3;
  const RVector on = project_simplex(v.cwiseMax(0.0), 1.0);
  CHECK((on - v.cwiseMax(0.0)).norm() < 1e-15);
  v << 3.0, 1.0, -2.0, 0.0;
  const RVector out = project_simplex(v, 1.0);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out.tail(3).norm() == 0.0);
  v << 0.1, 0.1, 0.1, 0.1;
  CHECK((project_simplex(v, 2.0) - RVector::Constant(4, 0.5)).norm() < 1e-15);
}

TEST_CASE("project_psd_trace equals the cyclic PSD / trace projection") {
  Rng rng(7);
  const SceneConfig cfg = scene_for(4, 1.0, 1e6);
  const CMatrix rd = omni(4, 1.0);
  DykstraOptions slow;
  slow.fuse_psd_trace = false;
  slow.max_cycles = 20000;
  for (int rep = 0; rep < 10; ++rep) {
    const CMatrix x = rd + 0.3 * random_hermitian(4, rng);
    const CMatrix fused = project_psd_trace(x, 1.0);
    const CMatrix cyclic = dykstra_project(x, cfg, rd, slow);
    CHECK((fused - cyclic).norm() < 1e-6);
  }
}

TEST_CASE("dykstra_project: feasible input is a fixed point") {
  Rng rng(8);
  const SceneConfig cfg = scene_for(4, 1.0, 10.0);
  const CMatrix rd = omni(4, 1.0);
  CMatrix s = random_psd(4, 2, rng);
  s *= 1.0 / s.trace().real();
  REQUIRE((s - rd).squaredNorm() <= 10.0);
  CHECK((dykstra_project(s, cfg, rd) - s).norm() < 1e-8);
}

TEST_CASE("dykstra_project: large perturbation lands inside every set") {
  Rng rng(9);
  const CMatrix rd = omni(6, 2.0);
  for (double gamma : {0.05, 0.5, 5.0}) {
    const SceneConfig cfg = scene_for(6, 2.0, gamma);
    for (bool fused : {true, false}) {
      DykstraOptions o;
      o.fuse_psd_trace = fused;
      o.max_cycles = fused ? 500 : 20000;
      const CMatrix x = rd + 3.0 * random_psd(6, 2, rng);
      const CMatrix out = dykstra_project(x, cfg, rd, o);
      const ConstraintResiduals r = constraint_residuals(out, cfg, rd);
      CHECK(r.psd < 1e-8);
      CHECK(r.trace < 1e-8);
      CHECK(r.ball < 1e-8);
    }
  }
}

TEST_CASE("dykstra_project: shrinking ball collapses onto R_D") {
  Rng rng(10);
  const CMatrix rd = omni(4, 1.0);
  const CMatrix x = rd + random_psd(4, 2, rng);
  for (double gamma : {1e-2, 1e-4, 1e-6}) {
    const CMatrix out = dykstra_project(x, scene_for(4, 1.0, gamma), rd);
    CHECK((out - rd).norm() <= std::sqrt(gamma) * (1.0 + 1e-6));
  }
}

TEST_CASE("dykstra_project reports non-convergence with the violation") {
  Rng rng(11);
  const CMatrix rd = omni(4, 1.0);
  DykstraOptions o;
  o.fuse_psd_trace = false;
  o.max_cycles = 1;
  const CMatrix x = rd + 50.0 * random_hermitian(4, rng);
  try {
    dykstra_project(x, scene_for(4, 1.0, 0.01), rd, o);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("worst violation") != std::string::npos);
  }
}

TEST_CASE("validate_desired_covariance") {
  const SceneConfig cfg = scene_for(3, 1.0, 1.0);
  CHECK_NOTHROW(validate_desired_covariance(omni(3, 1.0), cfg));
  CHECK_THROWS_AS(validate_desired_covariance(omni(3, 2.0), cfg), ConfigError);
  CHECK_THROWS_AS(validate_desired_covariance(omni(4, 1.0), cfg), ConfigError);
  CMatrix neg = omni(3, 1.0);
  neg(0, 0) = -0.5;
  neg(1, 1) += 0.5 + 1.0 / 3.0;
  CHECK_THROWS_AS(validate_desired_covariance(neg, cfg), ConfigError);
}

TEST_CASE("solve_relaxed: Omega = I is constant on the trace slice") {
  const SceneConfig cfg = scene_for(4, 1.5, 2.0);
  const RelaxedCovariance r = solve_relaxed(CMatrix::Identity(4, 4), cfg, omni(4, 1.5));
  CHECK(std::abs(r.objective - 1.5) < 1e-12);
}

TEST_CASE("solve_relaxed: inactive ball reaches P_T lambda_max") {
  Rng rng(12);
  for (int n = 1; n <= 3; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const CMatrix omega = random_psd(n, n, rng);
      const SceneConfig cfg = scene_for(n, 1.0, 1e6);
      const RelaxedCovariance r = solve_relaxed(omega, cfg, omni(n, 1.0));
      const double lmax = Eigen::SelfAdjointEigenSolver<CMatrix>(omega).eigenvalues().maxCoeff();
      CHECK(rel_err(r.objective, lmax) < 1e-6);
      for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] >= r.objective_trace[i - 1]);
    }
  }
}

TEST_CASE("solve_relaxed: default scene beats R_D and stays feasible") {
  SceneConfig cfg;
  Rng rng = trial_stream(3, 0);
  const ChannelSet ch = draw_channels(cfg, rng);
  const CMatrix rd = default_desired_covariance(cfg, ch);
  const CMatrix omega = build_omega(IrsPhase::identity(cfg.irs_elements()), ch, cfg);
  const RelaxedCovariance r = solve_relaxed(omega, cfg, rd);
  CHECK(r.objective >= (rd * omega).trace().real());
  CHECK(min_eig(r.s) >= -1e-8);
  CHECK(std::abs(r.s.trace().real() - cfg.power_budget) <= 1e-8 * cfg.power_budget);
  CHECK((r.s - rd).squaredNorm() <= cfg.beampattern_tol * (1 + 1e-6));
}

TEST_CASE("solve_relaxed: active ball keeps S feasible") {
  Rng rng(13);
  const SceneConfig cfg = scene_for(5, 1.0, 0.05);
  const CMatrix rd = omni(5, 1.0);
  const CMatrix omega = random_psd(5, 2, rng);
  const RelaxedCovariance r = solve_relaxed(omega, cfg, rd);
  CHECK(min_eig(r.s) >= -1e-8);
  CHECK(std::abs(r.s.trace().real() - 1.0) <= 1e-8);
  CHECK((r.s - rd).squaredNorm() <= 0.05 * (1 + 1e-6));
  CHECK(r.objective > (rd * omega).trace().real());
}

TEST_CASE("factor_precoder: rank-one covariance") {
  Rng rng(14);
  const int n = 4;
  CVector u = complex_normal_matrix(n, 1, rng).col(0);
  u.normalize();
  const SceneConfig cfg = scene_for(n, 2.0, 1e6);
  RelaxedCovariance s;
  s.s = 2.0 * u * u.adjoint();
  const CMatrix omega = s.s;
  const Precoder p = factor_precoder(s, 1, omega, cfg, omni(n, 2.0), rng, 20);
  const cdouble phase = u.dot(p.p.col(0)) / std::abs(u.dot(p.p.col(0)));
  // the square-root factor of a rank-one S carries sqrt(eps)-sized components off u
  CHECK((p.p.col(0) - std::sqrt(2.0) * phase * u).norm() < 1e-7);
}

TEST_CASE("factor_precoder: feasibility and relaxation bound") {
  SceneConfig cfg;
  for (int t = 0; t < 5; ++t) {
    Rng rng = trial_stream(4, t);
    const ChannelSet ch = draw_channels(cfg, rng);
    const CMatrix rd = default_desired_covariance(cfg, ch);
    const CMatrix omega = build_omega(IrsPhase::identity(cfg.irs_elements()), ch, cfg);
    const RelaxedCovariance s = solve_relaxed(omega, cfg, rd);
    const Precoder p = factor_precoder(s, cfg.n_users, omega, cfg, rd, rng, 50);
    CHECK(std::abs(p.power() - cfg.power_budget) <= 1e-10 * cfg.power_budget);
    CHECK((p.covariance() - rd).squaredNorm() <= cfg.beampattern_tol * (1 + 1e-9));
    CHECK((p.p.adjoint() * omega * p.p).trace().real() <= s.objective * (1 + 1e-9));
  }
}

TEST_CASE("factor_precoder: no feasible candidate") {
  Rng rng(15);
  const SceneConfig cfg = scene_for(4, 1.0, 1e-6);
  RelaxedCovariance s;
  s.s = omni(4, 1.0);
  // rank-one candidates sit at distance sqrt(3/4) from the omni R_D
  CHECK_THROWS_WITH_AS(factor_precoder(s, 1, CMatrix::Identity(4, 4), cfg, omni(4, 1.0), rng, 10),
                       doctest::Contains("randomization infeasible"), SolverError);
  CHECK_THROWS_AS(factor_precoder(s, 1, CMatrix::Identity(4, 4), cfg, omni(4, 1.0), rng, 0), SolverError);
}

TEST_CASE("factor_precoder: more samples never hurt on a shared stream") {
  SceneConfig cfg;
  cfg.n_users = 2;
  double prev_mean = -1.0;
  for (int n_g : {1, 5, 50}) {
    double mean = 0.0;
    for (int t = 0; t < 50; ++t) {
      Rng rng = trial_stream(5, t);
      const ChannelSet ch = draw_channels(cfg, rng);
      const CMatrix rd = default_desired_covariance(cfg, ch);
      const CMatrix omega = build_omega(IrsPhase::identity(cfg.irs_elements()), ch, cfg);
      RelaxedCovariance s;
      s.s = rd;
      Rng draw(1000 + t);
      const Precoder p = factor_precoder(s, cfg.n_users, omega, cfg, rd, draw, n_g);
      mean += (p.p.adjoint() * omega * p.p).trace().real() / 50.0;
    }
    CHECK(mean >= prev_mean);
    prev_mean = mean;
  }
}

TEST_CASE("approximation_ratio_study: trivial cases") {
  Rng rng(16);
  const auto one = approximation_ratio_study(CMatrix::Constant(1, 1, 3.0), CMatrix::Ones(1, 1), {1, 10, 100}, rng);
  for (const auto& r : one) CHECK(std::abs(r.ratio - 1.0) < 1e-15);
  const auto id = approximation_ratio_study(CMatrix::Identity(5, 5), CMatrix::Identity(5, 5), {1, 10}, rng);
  for (const auto& r : id) CHECK(std::abs(r.ratio - 1.0) < 1e-14);
}

TEST_CASE("approximation_ratio_study: nested samples and gamma <= 1") {
  Rng rng(17);
  const CMatrix a = random_psd(8, 3, rng);
  const UnitDiagonalRelaxation rel = solve_unit_diagonal_relaxation(a);
  const auto reps = approximation_ratio_study(a, rel.r, {1000, 10, 100}, rng);
  REQUIRE(reps.size() == 3);
  CHECK(reps[0].n_samples == 1000);
  CHECK(reps[1].ratio <= reps[2].ratio);
  CHECK(reps[2].ratio <= reps[0].ratio);
  for (const auto& r : reps) {
    CHECK(r.ratio <= 1.0 + 1e-9);
    CHECK(r.ratio > 0.0);
    CHECK(r.ratio == r.best_objective / r.sdp_objective);
  }
}

TEST_CASE("solve_unit_diagonal_relaxation") {
  Rng rng(18);
  SUBCASE("2x2 closed form") {
    for (int rep = 0; rep < 10; ++rep) {
      const CMatrix a = random_hermitian(2, rng);
      const UnitDiagonalRelaxation r = solve_unit_diagonal_relaxation(a);
      const double exact = a(0, 0).real() + a(1, 1).real() + 2.0 * std::abs(a(0, 1));
      CHECK(std::abs(r.objective - exact) < 1e-10 * std::max(1.0, std::abs(exact)));
    }
  }
  SUBCASE("feasible and certified") {
    for (int l : {6, 20, 36}) {
      const CMatrix a = random_psd(l, 3, rng);
      const UnitDiagonalRelaxation r = solve_unit_diagonal_relaxation(a);
      for (int i = 0; i < l; ++i) CHECK(r.r(i, i) == cdouble(1.0, 0.0));
      CHECK(min_eig(r.r) > -1e-10);
      CHECK(r.relative_gap() <= 1e-12);
      CHECK(r.objective <= r.dual_bound * (1 + 1e-15));
      // every unit-modulus point is feasible for the relaxation
      for (int k = 0; k < 100; ++k) {
        const CVector t = random_phase(l, rng).theta;
        CHECK(t.dot(a * t).real() <= r.dual_bound * (1 + 1e-12));
      }
    }
  }
}

}  // TEST_SUITE
