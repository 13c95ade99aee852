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

#include "isac/objective.hpp"

#include <fmt/core.h>

#include <cmath>

namespace isac {

namespace {

void check_theta(const IrsPhase& theta, const ChannelSet& ch) {
  if (theta.size() != ch.irs_elements() || ch.g.rows() != ch.irs_elements() ||
      ch.h.cols() != ch.irs_elements())
    throw DimensionError(fmt::format("IRS dimension mismatch: theta has {} entries, G is {}x{}, H is {}x{}",
                                     theta.size(), ch.g.rows(), ch.g.cols(), ch.h.rows(), ch.h.cols()));
}

void check_precoder(const Precoder& p, const ChannelSet& ch) {
  if (p.p.rows() != ch.n_tx())
    throw DimensionError(fmt::format("precoder has {} rows, channel has N_T = {}", p.p.rows(), ch.n_tx()));
}

}  // namespace

double quartic_scale(const ChannelSet& ch, const SceneConfig& cfg) {
  return cfg.beta * std::norm(ch.alpha) / cfg.sigma2_radar;
}

double comm_scale(const SceneConfig& cfg) { return (1.0 - cfg.beta) / cfg.sigma2_comm; }

CMatrix effective_radar_channel(const IrsPhase& theta, const ChannelSet& ch) {
  check_theta(theta, ch);
  const auto d = theta.theta.asDiagonal();
  return ch.alpha * (ch.g.transpose() * d * ch.r_mat * d * ch.g);
}

CMatrix effective_comm_channel(const IrsPhase& theta, const ChannelSet& ch) {
  check_theta(theta, ch);
  if (ch.f.rows() != ch.h.rows() || ch.f.cols() != ch.g.cols())
    throw DimensionError("F must be K x N_T");
  return ch.f + ch.h * theta.theta.asDiagonal() * ch.g;
}

double snr_radar(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg) {
  check_precoder(p, ch);
  return (effective_radar_channel(theta, ch) * p.p).squaredNorm() / cfg.sigma2_radar;
}

double snr_comm(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg) {
  check_precoder(p, ch);
  return (effective_comm_channel(theta, ch) * p.p).squaredNorm() / cfg.sigma2_comm;
}

double weighted_snr(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg) {
  return cfg.beta * snr_radar(p, theta, ch, cfg) + (1.0 - cfg.beta) * snr_comm(p, theta, ch, cfg);
}

SnrSnapshot objective_snapshot(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch,
                               const SceneConfig& cfg) {
  SnrSnapshot s;
  s.snr_radar = snr_radar(p, theta, ch, cfg);
  s.snr_comm = snr_comm(p, theta, ch, cfg);
  s.objective = cfg.beta * s.snr_radar + (1.0 - cfg.beta) * s.snr_comm;
  return s;
}

CMatrix build_omega(const IrsPhase& theta, const ChannelSet& ch, const SceneConfig& cfg) {
  const CMatrix cr = effective_radar_channel(theta, ch);
  const CMatrix cc = effective_comm_channel(theta, ch);
  CMatrix omega = (cfg.beta / cfg.sigma2_radar) * (cr.adjoint() * cr) +
                  comm_scale(cfg) * (cc.adjoint() * cc);
  return 0.5 * (omega + omega.adjoint());
}

ObjectiveBreakdown decompose_objective(const Precoder& p, const IrsPhase& theta, const ChannelSet& ch,
                                       const SceneConfig& cfg) {
  check_theta(theta, ch);
  check_precoder(p, ch);
  const double cc = comm_scale(cfg);
  const double cr = quartic_scale(ch, cfg);
  const CMatrix ppH = p.covariance();
  const auto d = theta.theta.asDiagonal();
  const CMatrix dH = theta.theta.conjugate().asDiagonal();
  const CMatrix& g = ch.g;
  const CMatrix& h = ch.h;
  const CMatrix& f = ch.f;

  ObjectiveBreakdown b;
  b.g0 = cc * (f.adjoint() * f * ppH).trace().real();

  const cdouble t1 = (g.adjoint() * dH * h.adjoint() * f * ppH).trace();
  const cdouble t2 = (f.adjoint() * h * d * g * ppH).trace();
  b.g1 = cc * (t1 + t2).real();
  b.g1_imag_residue = cc * std::abs((t1 + t2).imag());

  b.g2 = cc * (g.adjoint() * dH * h.adjoint() * h * d * g * ppH).trace().real();

  const CMatrix inner = g.transpose() * d * ch.r_mat * d * g;
  b.g4 = cr * (inner * ppH * inner.adjoint()).trace().real();

  b.total = b.g0 + b.g1 + b.g2 + b.g4;
  return b;
}

QuarticKernels quartic_kernels(const CMatrix& x, const CMatrix& v, const CMatrix& w) {
  const auto l = x.rows();
  if (x.cols() != l || v.rows() != l || v.cols() != l || w.rows() != l || w.cols() != l)
    throw DimensionError(fmt::format("quartic_kernels: X {}x{}, V {}x{}, W {}x{} must be square and equal",
                                     x.rows(), x.cols(), v.rows(), v.cols(), w.rows(), w.cols()));
  QuarticKernels k;
  k.y.noalias() = w * x * v.transpose();
  k.z.noalias() = w.transpose() * x.conjugate() * v;
  return k;
}

CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

QuarticKernels quartic_kernels_kronecker(const CMatrix& x, const CMatrix& v, const CMatrix& w) {
  const auto l = x.rows();
  if (x.cols() != l || v.rows() != l || v.cols() != l || w.rows() != l || w.cols() != l)
    throw DimensionError("quartic_kernels_kronecker: dimension mismatch");
  CMatrix q(l * l, l * l);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = 0; j < l; ++j) q.block(i * l, j * l, l, l) = v(i, j) * w;
  QuarticKernels k;
  k.y = unvec(q * vec(x), l, l);
  k.z = unvec(q.transpose() * vec(x.conjugate()), l, l);
  return k;
}

ThetaObjective::ThetaObjective(const Precoder& p, const ChannelSet& ch, const SceneConfig& cfg)
    : steer_(ch.steer), c_radar_(quartic_scale(ch, cfg)) {
  check_precoder(p, ch);
  const double cc = comm_scale(cfg);
  gt_ = ch.g.transpose();
  gp_ = ch.g * p.p;
  const CMatrix b = gp_ * gp_.adjoint();  // G P P^H G^H
  const CMatrix hh = ch.h.adjoint() * ch.h;
  u3_ = cc * hh.cwiseProduct(b.transpose());
  u3_ = 0.5 * (u3_ + u3_.adjoint());
  // mu = diag(U4), U4 = cc G P P^H F^H H; only the diagonal is needed
  const CMatrix fp = ch.f * p.p;  // K x K
  const CMatrix left = gp_ * fp.adjoint();  // L x K = G P P^H F^H
  mu_.resize(ch.irs_elements());
  for (int l = 0; l < ch.irs_elements(); ++l)
    mu_[l] = cc * left.row(l).transpose().cwiseProduct(ch.h.col(l)).sum();
  g0_ = cc * fp.squaredNorm();
}

ObjectiveBreakdown ThetaObjective::breakdown(const CVector& theta) const {
  ObjectiveBreakdown b;
  b.g0 = g0_;
  b.g1 = 2.0 * theta.cwiseProduct(mu_).sum().real();
  b.g2 = theta.dot(u3_ * theta).real();
  const CVector v = theta.cwiseProduct(steer_);
  const CVector gtv = gt_ * v;                             // G^T v
  const CVector pgv = gp_.transpose() * v;                 // P^T G^T v
  b.g4 = c_radar_ * gtv.squaredNorm() * pgv.squaredNorm();
  b.total = b.g0 + b.g1 + b.g2 + b.g4;
  return b;
}

double ThetaObjective::value(const CVector& theta) const { return breakdown(theta).total; }

CVector ThetaObjective::wirtinger_gradient(const CVector& theta) const {
  const CVector& a = steer_;
  const CVector v = theta.cwiseProduct(a);
  const CVector gtv = gt_ * v;
  const CVector pgv = gp_.transpose() * v;
  const double s1 = gtv.squaredNorm();  // v^H W v
  const double s2 = pgv.squaredNorm();  // v^H V v
  const CVector wv = gt_.adjoint() * gtv;                    // G^* G^T v
  const CVector vv = gp_.conjugate() * pgv;                  // (G P)^* (G P)^T v
  CVector grad = c_radar_ * a.conjugate().cwiseProduct(s2 * wv + s1 * vv);
  grad += u3_ * theta;
  grad += mu_.conjugate();
  return grad;
}

}  // namespace isac
