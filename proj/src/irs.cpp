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

#include "isac/irs.hpp"

#include <fmt/core.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace isac {

namespace {

CMatrix symmetric_part(const CMatrix& m) { return 0.5 * (m + m.transpose()); }

void require_unit_modulus(const IrsPhase& theta, const char* who) {
  if (!theta.is_unit_modulus(1e-9))
    throw SolverError(fmt::format("{}: theta must have unit-modulus entries", who));
}

double relative_gain(double now, double before) {
  return (now - before) / std::max(std::abs(before), std::numeric_limits<double>::min());
}

}  // namespace

QuarticSurrogate build_quartic_surrogate(const IrsPhase& theta_t, const Precoder& p, const ChannelSet& ch,
                                         const SceneConfig& cfg) {
  require_unit_modulus(theta_t, "build_quartic_surrogate");
  if (theta_t.size() != ch.irs_elements() || p.p.rows() != ch.n_tx())
    throw DimensionError("build_quartic_surrogate: dimension mismatch");
  QuarticSurrogate s;
  const auto d = theta_t.theta.asDiagonal();
  s.x = d * ch.r_mat * d;
  const CMatrix gp = ch.g * p.p;
  s.v = (gp * gp.adjoint()).transpose();
  s.w = ch.g.conjugate() * ch.g.transpose();
  QuarticKernels k = quartic_kernels(s.x, s.v, s.w);
  s.y = std::move(k.y);
  s.z = std::move(k.z);
  const double c = quartic_scale(ch, cfg);
  s.u1 = c * symmetric_part(ch.r_mat.adjoint().cwiseProduct(s.y.transpose()));
  s.u2 = c * symmetric_part(ch.r_mat.cwiseProduct(s.z.transpose()));
  s.tangent_constant = c * s.x.conjugate().cwiseProduct(s.y).sum().real();
  return s;
}

QuadraticTerms build_quadratic_terms(const Precoder& p, const ChannelSet& ch, const SceneConfig& cfg) {
  if (p.p.rows() != ch.n_tx()) throw DimensionError("build_quadratic_terms: dimension mismatch");
  const double cc = comm_scale(cfg);
  const CMatrix gp = ch.g * p.p;
  QuadraticTerms q;
  const CMatrix hh = ch.h.adjoint() * ch.h;
  q.u3 = cc * hh.cwiseProduct((gp * gp.adjoint()).transpose());
  q.u3 = 0.5 * (q.u3 + q.u3.adjoint());
  q.u4 = cc * gp * (ch.f * p.p).adjoint() * ch.h;
  q.mu = q.u4.diagonal();
  return q;
}

LinearSurrogate linear_surrogate_vectors(const IrsPhase& theta_t, const CMatrix& u1, const CMatrix& u2,
                                         const CMatrix& u3, const CVector& mu) {
  require_unit_modulus(theta_t, "linear_surrogate_vectors");
  const CVector& t = theta_t.theta;
  const CVector tc = t.conjugate();
  LinearSurrogate lin;
  lin.nu = 2.0 * u1.transpose() * tc + u3 * t + mu.conjugate();
  lin.eta = 2.0 * u2.transpose() * t + u3.transpose() * tc + mu;
  return lin;
}

IrsPhase irs_phase_update(const CVector& nu, const CVector& eta, const IrsPhase& previous) {
  if (nu.size() != eta.size()) throw DimensionError("irs_phase_update: nu and eta differ in length");
  const bool has_previous = previous.size() == nu.size();
  IrsPhase out;
  out.theta.resize(nu.size());
  for (Eigen::Index l = 0; l < nu.size(); ++l) {
    const cdouble s = nu[l] + std::conj(eta[l]);
    if (std::abs(s) < 1e-14) {
      out.theta[l] = has_previous ? previous.theta[l] : cdouble(1.0, 0.0);
    } else {
      out.theta[l] = std::polar(1.0, std::arg(s));
    }
  }
  return out;
}

double quadratic_surrogate_value(const CVector& theta, const CMatrix& u1, const CMatrix& u2, const CMatrix& u3,
                                 const CVector& mu) {
  const CVector tc = theta.conjugate();
  const cdouble quartic = theta.dot(u1 * tc) + (theta.transpose() * u2 * theta)(0, 0);
  const cdouble quad = theta.dot(u3 * theta);
  const cdouble lin = theta.dot(mu.conjugate()) + theta.cwiseProduct(mu).sum();
  return (quartic + quad + lin).real();
}

double linear_surrogate_value(const CVector& theta, const LinearSurrogate& lin) {
  return (theta.dot(lin.nu) + theta.cwiseProduct(lin.eta).sum()).real();
}

double surrogate_loading(const CMatrix& u1, const CMatrix& u2, const CMatrix& u3) {
  const auto l = u3.rows();
  CMatrix m(2 * l, 2 * l);
  m.topLeftCorner(l, l) = 0.5 * u3;
  m.topRightCorner(l, l) = u1;
  m.bottomLeftCorner(l, l) = u2;
  m.bottomRightCorner(l, l) = 0.5 * u3.transpose();
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return std::max(0.0, -es.eigenvalues().minCoeff());
}

std::pair<IrsPhase, InnerTrace> solve_irs_minorization(const IrsPhase& theta0, const Precoder& p,
                                                       const ChannelSet& ch, const SceneConfig& cfg,
                                                       const IrsSolveOptions& opts) {
  require_unit_modulus(theta0, "solve_irs_minorization");
  const ThetaObjective objective(p, ch, cfg);
  SurrogateWorkspace ws;
  ws.quadratic = build_quadratic_terms(p, ch, cfg);

  InnerTrace trace;
  IrsPhase theta = theta0;
  double g = objective.value(theta.theta);
  trace.objectives.push_back(g);

  for (int it = 0; it < opts.inner_max; ++it) {
    ws.quartic = build_quartic_surrogate(theta, p, ch, cfg);
    const QuadraticTerms& q = ws.quadratic;
    ws.linear = linear_surrogate_vectors(theta, ws.quartic.u1, ws.quartic.u2, q.u3, q.mu);
    IrsPhase next = irs_phase_update(ws.linear.nu, ws.linear.eta, theta);
    double g_next = objective.value(next.theta);

    if (opts.safeguard && g_next < g - opts.ascent_slack * std::abs(g)) {
      const double lambda = surrogate_loading(ws.quartic.u1, ws.quartic.u2, q.u3);
      ws.linear.nu += 2.0 * lambda * theta.theta;
      ws.linear.eta += 2.0 * lambda * theta.theta.conjugate();
      next = irs_phase_update(ws.linear.nu, ws.linear.eta, theta);
      g_next = objective.value(next.theta);
      ++trace.safeguarded_steps;
    }
    if (g_next < g - opts.ascent_slack * std::abs(g)) {
      throw SolverError(fmt::format("minorization ascent violated at inner iteration {}: {:.17g} -> {:.17g}",
                                    it, g, g_next));
    }

    const double minorizer = objective.g0() +
                             quadratic_surrogate_value(next.theta, ws.quartic.u1, ws.quartic.u2, q.u3, q.mu) -
                             ws.quartic.tangent_constant;
    trace.surrogate_gaps.push_back(g_next - minorizer);
    trace.objectives.push_back(g_next);
    trace.iterations = it + 1;

    const double gain = relative_gain(g_next, g);
    theta = std::move(next);
    g = g_next;
    if (gain < opts.inner_tol) break;
  }
  return {theta, trace};
}

CVector wirtinger_gradient(const IrsPhase& theta, const Precoder& p, const ChannelSet& ch, const SceneConfig& cfg) {
  if (theta.size() != ch.irs_elements()) throw DimensionError("wirtinger_gradient: dimension mismatch");
  return ThetaObjective(p, ch, cfg).wirtinger_gradient(theta.theta);
}

std::pair<IrsPhase, InnerTrace> solve_irs_manifold(const IrsPhase& theta0, const Precoder& p,
                                                   const ChannelSet& ch, const SceneConfig& cfg,
                                                   const IrsSolveOptions& opts) {
  require_unit_modulus(theta0, "solve_irs_manifold");
  constexpr double kArmijoSlope = 1e-4;
  constexpr double kContraction = 0.5;
  constexpr int kMaxHalvings = 50;

  const ThetaObjective objective(p, ch, cfg);
  InnerTrace trace;
  IrsPhase theta = theta0;
  double g = objective.value(theta.theta);
  trace.objectives.push_back(g);

  auto retract = [](CVector t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double m = std::abs(t[i]);
      if (m > 0.0) t[i] /= m;
    }
    return t;
  };

  for (int it = 0; it < opts.inner_max; ++it) {
    // Euclidean gradient of g in (Re, Im) coordinates, packed as a complex vector.
    const CVector egrad = 2.0 * objective.wirtinger_gradient(theta.theta);
    const CVector radial = egrad.cwiseProduct(theta.theta.conjugate()).real().cast<cdouble>();
    const CVector rgrad = egrad - radial.cwiseProduct(theta.theta);
    const double norm = rgrad.norm();
    if (!(norm > 1e-14 * std::max(1.0, egrad.norm()))) break;

    double step = 1.0 / norm;
    bool accepted = false;
    CVector candidate;
    double g_candidate = g;
    for (int k = 0; k < kMaxHalvings; ++k) {
      candidate = retract(theta.theta + step * rgrad);
      g_candidate = objective.value(candidate);
      if (g_candidate >= g + kArmijoSlope * step * norm * norm) {
        accepted = true;
        break;
      }
      step *= kContraction;
    }
    if (!accepted) {
      trace.line_search_failed = true;
      break;
    }
    trace.objectives.push_back(g_candidate);
    trace.iterations = it + 1;
    const double gain = relative_gain(g_candidate, g);
    theta.theta = std::move(candidate);
    g = g_candidate;
    if (gain < opts.inner_tol) break;
  }
  return {theta, trace};
}

}  // namespace isac
