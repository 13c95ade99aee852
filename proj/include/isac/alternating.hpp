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

#pragma once

#include "isac/irs.hpp"
#include "isac/objective.hpp"
#include "isac/precoder.hpp"
#include "isac/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isac {

enum class IrsMethod { kMinorization, kManifold };
enum class ThetaInit { kIdentity, kRandom };
enum class Termination { kTolerance, kMaxIterations };

std::string to_string(IrsMethod m);
std::string to_string(Termination t);

struct SolverOptions {
  double eps_rel = 0.01;  // -20 dB
  int t_max = 20;
  int n_g = 50;
  IrsMethod irs_method = IrsMethod::kMinorization;
  // false: one closed-form update per outer iteration; true: iterate the IRS solver to convergence
  bool inner_loop = false;
  IrsSolveOptions inner;
  ThetaInit theta_init = ThetaInit::kIdentity;
  std::uint64_t seed = 0;
  RelaxedSolveOptions relaxed;

  void validate() const;
};

struct StageTimes {
  double precoder_seconds = 0.0;
  double irs_seconds = 0.0;
};

struct RunTrace {
  std::vector<double> objective_per_outer;
  std::vector<double> snr_radar_per_outer;
  std::vector<double> snr_comm_per_outer;
  std::vector<double> relaxed_objective_per_outer;   // tr(S Omega)
  std::vector<double> precoder_objective_per_outer;  // tr(P P^H Omega), before the IRS stage
  std::vector<StageTimes> wall_time_per_stage;
  std::vector<int> irs_inner_iterations;
  int precoder_dips = 0;  // outer iterations where randomization lowered g (logged, not fatal)
  Termination terminated_by = Termination::kMaxIterations;

  int outer_iterations() const { return static_cast<int>(objective_per_outer.size()); }
};

struct RunResult {
  Precoder precoder;
  IrsPhase theta;
  RunTrace trace;
};

/// Stopping rule of the outer loop: stop after t_max iterations, or as soon as
/// |g(t+1) - g(t)| / g(t) <= eps_rel (checked from the second iteration on).
class TerminationRule {
 public:
  TerminationRule(double eps_rel, int t_max);
  std::optional<Termination> update(double objective);
  int iterations() const { return count_; }

 private:
  double eps_rel_;
  int t_max_;
  int count_ = 0;
  double previous_ = 0.0;
  bool has_previous_ = false;
};

/// Alternates { Omega(theta) -> relaxed S -> randomized P -> IRS update } until termination.
RunResult run_alternating(const ChannelSet& ch, const SceneConfig& cfg, const CMatrix& r_d,
                          const SolverOptions& opts);

}  // namespace isac
