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

// Precoder sub-problem. The K rank-one blocks p_k p_k^H only enter the objective and the
// constraints through their sum S = P P^H, so the relaxation is solved over S directly:
//
//   max tr(S Omega)  s.t.  S >= 0,  tr(S) = P_T,  ||S - R_D||_F^2 <= gamma_BP
//
// by projected gradient ascent, where the projection onto the intersection is computed with
// Dykstra's algorithm. P is recovered by Gaussian randomization around S.

#pragma once

#include "isac/scene.hpp"
#include "isac/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace isac {

struct RelaxedCovariance {
  CMatrix s;
  double objective = 0.0;              // tr(S Omega)
  std::vector<double> objective_trace; // accepted ascent steps
  int steps = 0;
};

struct RandomizationReport {
  int n_samples = 0;
  double best_objective = 0.0;
  double sdp_objective = 0.0;
  double ratio = 0.0;
};

/// Frobenius distance of a matrix to each constraint set, divided by P_T.
struct ConstraintResiduals {
  double psd = 0.0;
  double trace = 0.0;
  double ball = 0.0;
  double worst() const;
};

struct DykstraOptions {
  int max_cycles = 500;
  double tol = 1e-8;
  // Treat PSD cone and trace hyperplane as one set, projected exactly through the eigenvalues.
  // false cycles the three sets separately, which converges slowly for far-away inputs.
  bool fuse_psd_trace = true;
};

struct RelaxedSolveOptions {
  int max_steps = 1000;
  double rel_tol = 1e-8;
  DykstraOptions dykstra;
};

/// Clamp negative eigenvalues to zero. Rejects input that is not Hermitian within 1e-10 (relative).
CMatrix project_psd(const CMatrix& m);
/// m + ((target - tr m)/N) I.
CMatrix project_trace(const CMatrix& m, double target);
/// Radial projection onto { X : ||X - center||_F^2 <= radius2 }.
CMatrix project_ball(const CMatrix& m, const CMatrix& center, double radius2);
/// Exact projection onto { X >= 0, tr X = target }: eigenvalues onto the scaled simplex.
CMatrix project_psd_trace(const CMatrix& m, double target);
/// Euclidean projection of a vector onto { x >= 0, sum x = target }.
RVector project_simplex(const RVector& v, double target);
/// Sets the diagonal to one (affine set of the unit-modulus relaxation).
CMatrix project_unit_diagonal(const CMatrix& m);

ConstraintResiduals constraint_residuals(const CMatrix& m, const SceneConfig& cfg, const CMatrix& r_d);

/// Throws ConfigError unless R_D is Hermitian PSD with trace P_T.
void validate_desired_covariance(const CMatrix& r_d, const SceneConfig& cfg);

using Projection = std::function<CMatrix(const CMatrix&)>;

/// Dykstra's cyclic projections with correction terms. `residual` measures the worst constraint
/// violation of an iterate and decides convergence (< tol). Throws SolverError with the worst
/// violation when max_cycles is exhausted.
CMatrix dykstra(const CMatrix& m, const std::vector<Projection>& sets,
                const std::function<double(const CMatrix&)>& residual, const DykstraOptions& opts);

/// Projection onto the intersection of PSD cone, trace hyperplane and beampattern ball, cycled
/// in that order (the first two fused by default, see DykstraOptions).
CMatrix dykstra_project(const CMatrix& m, const SceneConfig& cfg, const CMatrix& r_d,
                        const DykstraOptions& opts = {});

/// Projected gradient ascent on tr(S Omega). `warm_start` (if given) is projected first;
/// otherwise the ascent starts from R_D.
RelaxedCovariance solve_relaxed(const CMatrix& omega, const SceneConfig& cfg, const CMatrix& r_d,
                                const RelaxedSolveOptions& opts = {},
                                const std::optional<CMatrix>& warm_start = std::nullopt);

/// Gaussian randomization: candidate 0 is the top-K eigen-factor of S; the other n_g
/// candidates have K i.i.d. CN(0, S/K) columns. Every candidate is rescaled to tr(P P^H) = P_T;
/// candidates outside the beampattern ball are dropped; the best tr(P P^H Omega) wins.
Precoder factor_precoder(const RelaxedCovariance& s, int k, const CMatrix& omega, const SceneConfig& cfg,
                         const CMatrix& r_d, Rng& rng, int n_g);

/// Unit-modulus randomization around a relaxed covariance r_star (diag = 1). Samples are nested:
/// the N_G-sample best is the running maximum over the first N_G draws.
std::vector<RandomizationReport> approximation_ratio_study(const CMatrix& a, const CMatrix& r_star,
                                                           const std::vector<int>& n_g_grid, Rng& rng);

struct UnitDiagonalOptions {
  int rank = 0;             // columns of the factor V; 0 picks ceil(sqrt(2L)) + 1
  int max_sweeps = 20000;
  double gap_tol = 1e-12;   // relative duality gap
  std::uint64_t seed = 0x5eed;
};

struct UnitDiagonalRelaxation {
  CMatrix r;                // V V^H, diag exactly one
  double objective = 0.0;   // tr(A R)
  double dual_bound = 0.0;  // certified upper bound on the relaxation optimum
  int sweeps = 0;

  double relative_gap() const;
};

/// max tr(A R) s.t. R >= 0, diag(R) = 1. Solved in factored form R = V V^H with unit-norm rows by
/// cyclic row updates v_i <- normalize(sum_{j != i} A_ij v_j), which never decrease tr(A R).
/// Stops when the dual certificate sum(y) + L * max(0, lambda_max(A - Diag(y))), y = Re diag(A R),
/// is within gap_tol of the objective.
UnitDiagonalRelaxation solve_unit_diagonal_relaxation(const CMatrix& a, const UnitDiagonalOptions& opts = {});

}  // namespace isac
