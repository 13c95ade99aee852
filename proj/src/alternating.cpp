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

#include "isac/alternating.hpp"

#include "isac/scene.hpp"

#include <fmt/core.h>

#include <chrono>
#include <cmath>

namespace isac {

std::string to_string(IrsMethod m) {
  return m == IrsMethod::kMinorization ? "minorization" : "manifold";
}

std::string to_string(Termination t) { return t == Termination::kTolerance ? "tolerance" : "t_max"; }

void SolverOptions::validate() const {
  if (!(eps_rel > 0.0)) throw ConfigError(fmt::format("eps_rel must be positive, got {}", eps_rel));
  if (t_max < 1) throw ConfigError(fmt::format("t_max must be >= 1, got {}", t_max));
  if (n_g < 1) throw ConfigError(fmt::format("n_g must be >= 1, got {}", n_g));
  if (!(inner.inner_tol > 0.0)) throw ConfigError("inner_tol must be positive");
  if (inner.inner_max < 1) throw ConfigError("inner_max must be >= 1");
}

TerminationRule::TerminationRule(double eps_rel, int t_max) : eps_rel_(eps_rel), t_max_(t_max) {}

std::optional<Termination> TerminationRule::update(double objective) {
  ++count_;
  std::optional<Termination> stop;
  if (has_previous_) {
    const double prev = previous_;
    const double change = objective - prev;
    const bool converged = prev != 0.0 ? std::abs(change / prev) <= eps_rel_ : change == 0.0;
    if (converged) stop = Termination::kTolerance;
  }
  if (!stop && count_ >= t_max_) stop = Termination::kMaxIterations;
  previous_ = objective;
  has_previous_ = true;
  return stop;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RunResult run_alternating(const ChannelSet& ch, const SceneConfig& cfg, const CMatrix& r_d,
                          const SolverOptions& opts) {
  cfg.validate();
  opts.validate();
  validate_desired_covariance(r_d, cfg);

  Rng rng(opts.seed);
  RunResult result;
  const int l = ch.irs_elements();
  if (opts.theta_init == ThetaInit::kRandom) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    result.theta.theta.resize(l);
    for (int i = 0; i < l; ++i) result.theta.theta[i] = std::polar(1.0, phase(rng));
  } else {
    result.theta = IrsPhase::identity(l);
  }

  IrsSolveOptions irs_opts = opts.inner;
  if (!opts.inner_loop) irs_opts.inner_max = 1;

  RunTrace& trace = result.trace;
  TerminationRule rule(opts.eps_rel, opts.t_max);
  std::optional<CMatrix> warm_start;
  std::optional<double> previous;

  for (int outer = 0;; ++outer) {
    const auto t0 = Clock::now();
    const CMatrix omega = build_omega(result.theta, ch, cfg);
    RelaxedCovariance relaxed;
    try {
      relaxed = solve_relaxed(omega, cfg, r_d, opts.relaxed, warm_start);
      result.precoder = factor_precoder(relaxed, cfg.n_users, omega, cfg, r_d, rng, opts.n_g);
    } catch (const SolverError& e) {
      throw SolverError(fmt::format("outer iteration {}, precoder stage: {}", outer, e.what()));
    }
    const double precoder_value = (result.precoder.p.adjoint() * omega * result.precoder.p).trace().real();
    if (previous && precoder_value < *previous * (1.0 - 1e-9)) ++trace.precoder_dips;
    const double precoder_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    try {
      auto [theta, inner] = opts.irs_method == IrsMethod::kMinorization
                                ? solve_irs_minorization(result.theta, result.precoder, ch, cfg, irs_opts)
                                : solve_irs_manifold(result.theta, result.precoder, ch, cfg, irs_opts);
      result.theta = std::move(theta);
      trace.irs_inner_iterations.push_back(inner.iterations);
    } catch (const SolverError& e) {
      throw SolverError(fmt::format("outer iteration {}, IRS stage: {}", outer, e.what()));
    }
    const double irs_seconds = seconds_since(t1);

    const SnrSnapshot snap = objective_snapshot(result.precoder, result.theta, ch, cfg);
    trace.objective_per_outer.push_back(snap.objective);
    trace.snr_radar_per_outer.push_back(snap.snr_radar);
    trace.snr_comm_per_outer.push_back(snap.snr_comm);
    trace.relaxed_objective_per_outer.push_back(relaxed.objective);
    trace.precoder_objective_per_outer.push_back(precoder_value);
    trace.wall_time_per_stage.push_back({precoder_seconds, irs_seconds});

    warm_start = result.precoder.covariance();
    previous = snap.objective;
    if (auto stop = rule.update(snap.objective)) {
      trace.terminated_by = *stop;
      break;
    }
  }
  return result;
}

}  // namespace isac
