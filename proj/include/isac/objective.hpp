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

#include "isac/types.hpp"

namespace isac {

/// Weighted SNR split by the order of its dependence on theta.
struct ObjectiveBreakdown {
  double g0 = 0.0;  // theta-independent direct-path term
  double g1 = 0.0;  // linear (direct x reflected cross terms)
  double g2 = 0.0;  // quadratic (reflected communication path)
  double g4 = 0.0;  // quartic (radar round trip)
  double total = 0.0;
  double g1_imag_residue = 0.0;
};

struct SnrSnapshot {
  double objective = 0.0;
  double snr_radar = 0.0;
  double snr_comm = 0.0;
};

/// beta |alpha|^2 / sigma_R^2, the scale of the quartic term.
double quartic_scale(const ChannelSet& ch, const SceneConfig& cfg);
/// (1 - beta) / sigma_C^2, the scale of the communication terms.
double comm_scale(const SceneConfig& cfg);

/// C_R = alpha G^T Theta R Theta G (N_T x N_T, rank <= 1).
CMatrix effective_radar_channel(const IrsPhase& theta, const ChannelSet& ch);
/// C_C = F + H Theta G (K x N_T).
CMatrix effective_comm_channel(const IrsPhase& theta, const ChannelSet& ch);

double snr_radar(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg);
double snr_comm(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg);

/// beta SNR_R + (1 - beta) SNR_C, evaluated through the effective channels.
double weighted_snr(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg);

/// (g, SNR_R, SNR_C) with g recombined from the two SNRs.
SnrSnapshot objective_snapshot(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch,
                               const SceneConfig& cfg);

/// Omega = (beta/sigma_R^2) C_R^H C_R + ((1-beta)/sigma_C^2) C_C^H C_C, symmetrized.
CMatrix build_omega(const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg);

/// Trace-form evaluation of g0 + g1 + g2 + g4.
ObjectiveBreakdown decompose_objective(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch,
                                       const SceneConfig& cfg);

struct QuarticKernels {
  CMatrix y;  // vec(Y) = (V (x) W) vec(X)
  CMatrix z;  // vec(Z) = (V (x) W)^T vec(X)^*
};

/// Y = W X V^T and Z = W^T X^* V. O(L^3); the L^2 x L^2 Kronecker product is never formed.
QuarticKernels quartic_kernels(const CMatrix& x, const CMatrix& v, const CMatrix& w);

/// Reference path that materializes V (x) W. Benchmarks and small-L checks only.
QuarticKernels quartic_kernels_kronecker(const CMatrix& x, const CMatrix& v, const CMatrix& w);

/// Column-stacking vec() and its inverse.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

/// Fixed-precoder objective g(theta), with the theta-independent products cached.
/// Exploits X = (theta o a)(theta o a)^T, so one evaluation is O(L N_T).
class ThetaObjective {
 public:
  ThetaObjective(const Precoder& p, const ChannelSet& ch, const SceneConfig& cfg);

  double value(const CVector& theta) const;
  ObjectiveBreakdown breakdown(const CVector& theta) const;

  /// dg/d(theta^*), treating theta and theta^* as independent (Wirtinger).
  CVector wirtinger_gradient(const CVector& theta) const;

  const CMatrix& u3() const { return u3_; }
  const CVector& mu() const { return mu_; }
  double g0() const { return g0_; }

 private:
  CVector steer_;
  double c_radar_;
  CMatrix gt_;      // G^T  (N_T x L)
  CMatrix gp_;      // G P  (L x K)
  CMatrix u3_;
  CVector mu_;
  double g0_;
};

}  // namespace isac
