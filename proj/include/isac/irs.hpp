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

// IRS phase sub-problem: maximize g1 + g2 + g4 over the unit-modulus torus with the precoder fixed.
//
// Double minorization. With X = Theta R Theta, x = vec(X) and Q = V (x) W PSD, the quartic term
// c x^H Q x is first bounded below by its tangent c (x^H Q x_t + x_t^H Q x) - c x_t^H Q x_t,
// which is the quadratic form theta^H U1 theta^* + theta^T U2 theta in theta. Together with
// g2 = theta^H U3 theta and g1 = theta^H mu^* + theta^T mu this is linearized at theta_t, giving
// Re{theta^H nu + theta^T eta}, whose maximizer on the torus is exp(j arg(nu + eta^*)).

#pragma once

#include "isac/objective.hpp"
#include "isac/types.hpp"

#include <utility>
#include <vector>

namespace isac {

struct QuarticSurrogate {
  CMatrix x;     // Theta_t R Theta_t
  CMatrix v;     // (G P P^H G^H)^T
  CMatrix w;     // G^* G^T
  CMatrix y, z;  // kernels
  CMatrix u1, u2;
  double tangent_constant = 0.0;  // c x_t^H Q x_t, dropped from the surrogate
};

struct QuadraticTerms {
  CMatrix u3;
  CMatrix u4;
  CVector mu;
};

struct LinearSurrogate {
  CVector nu;
  CVector eta;
};

/// Per-solver scratch space, rebuilt at every inner iteration.
struct SurrogateWorkspace {
  QuarticSurrogate quartic;
  QuadraticTerms quadratic;
  LinearSurrogate linear;
};

struct InnerTrace {
  std::vector<double> objectives;      // g(theta) at theta_0, theta_1, ...
  std::vector<double> surrogate_gaps;  // g(theta_{t+1}) - minorizer(theta_{t+1}) >= 0
  int iterations = 0;
  int safeguarded_steps = 0;           // minorization: loaded linearizations taken
  bool line_search_failed = false;     // manifold: Armijo gave up
};

struct IrsSolveOptions {
  double inner_tol = 1e-6;
  int inner_max = 200;
  double ascent_slack = 1e-9;
  // When the plain closed-form step would lower g, retry with the diagonally loaded
  // linearization, which minorizes the quadratic surrogate on the torus.
  bool safeguard = true;
};

/// U1 = c (R^H o Y^T), U2 = c (R o Z^T), both returned in symmetrized form (the quadratic
/// forms theta^H U1 theta^* and theta^T U2 theta only see the symmetric part).
QuarticSurrogate build_quartic_surrogate(const IrsPhase& theta_t, const Precoder& p, const ChannelSet& ch,
                                         const SceneConfig& cfg);

QuadraticTerms build_quadratic_terms(const Precoder& p, const ChannelSet& ch, const SceneConfig& cfg);

/// nu = 2 U1^T theta_t^* + U3 theta_t + mu^*,  eta = 2 U2^T theta_t + U3^T theta_t^* + mu.
LinearSurrogate linear_surrogate_vectors(const IrsPhase& theta_t, const CMatrix& u1, const CMatrix& u2,
                                         const CMatrix& u3, const CVector& mu);

/// theta_l = exp(j arg(nu_l + eta_l^*)); entries with |nu_l + eta_l^*| < 1e-14 keep `previous`.
IrsPhase irs_phase_update(const CVector& nu, const CVector& eta, const IrsPhase& previous);

/// Value of theta^H U1 theta^* + theta^T U2 theta + theta^H U3 theta + theta^H mu^* + theta^T mu.
double quadratic_surrogate_value(const CVector& theta, const CMatrix& u1, const CMatrix& u2, const CMatrix& u3,
                                 const CVector& mu);
/// Re{theta^H nu + theta^T eta}.
double linear_surrogate_value(const CVector& theta, const LinearSurrogate& lin);

/// Smallest diagonal loading making the 2L x 2L form of the quadratic surrogate PSD.
double surrogate_loading(const CMatrix& u1, const CMatrix& u2, const CMatrix& u3);

std::pair<IrsPhase, InnerTrace> solve_irs_minorization(const IrsPhase& theta0, const Precoder& p,
                                                       const ChannelSet& ch, const SceneConfig& cfg,
                                                       const IrsSolveOptions& opts = {});

/// dg/d(theta^*) of the full objective.
CVector wirtinger_gradient(const IrsPhase& theta, const Precoder& p, const ChannelSet& ch, const SceneConfig& cfg);

/// Riemannian gradient ascent on the product of circles (Armijo, retraction theta / |theta|).
std::pair<IrsPhase, InnerTrace> solve_irs_manifold(const IrsPhase& theta0, const Precoder& p,
                                                   const ChannelSet& ch, const SceneConfig& cfg,
                                                   const IrsSolveOptions& opts = {});

}  // namespace isac
