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

#include "isac/precoder.hpp"

#include <fmt/core.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace isac {

namespace {

using EigenSolver = Eigen::SelfAdjointEigenSolver<CMatrix>;

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

void require_hermitian(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols()) throw DimensionError(fmt::format("{}: matrix must be square", who));
  const double asym = (m - m.adjoint()).norm();
  if (asym > 1e-10 * std::max(1.0, m.norm()))
    throw SolverError(fmt::format("{}: input is not Hermitian (||M - M^H||_F = {:.3e})", who, asym));
}

double psd_distance(const CMatrix& m) {
  EigenSolver es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMin(0.0).norm();
}

double trace_real(const CMatrix& a, const CMatrix& b) {
  // tr(A B) for Hermitian A, B without forming the product
  return a.cwiseProduct(b.transpose()).sum().real();
}

CMatrix psd_sqrt(const CMatrix& s) {
  EigenSolver es(hermitian_part(s));
  const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double ConstraintResiduals::worst() const { return std::max({psd, trace, ball}); }

CMatrix project_psd(const CMatrix& m) {
  require_hermitian(m, "project_psd");
  EigenSolver es(hermitian_part(m));
  const RVector clamped = es.eigenvalues().cwiseMax(0.0);
  CMatrix out = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(out);
}

CMatrix project_trace(const CMatrix& m, double target) {
  const auto n = m.rows();
  const cdouble shift = (target - m.trace()) / static_cast<double>(n);
  CMatrix out = m;
  out.diagonal().array() += shift;
  return out;
}

RVector project_simplex(const RVector& v, double target) {
  // sort-based threshold search
  RVector sorted = v;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<double>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - target) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) threshold = t;
  }
  return (v.array() - threshold).cwiseMax(0.0).matrix();
}

CMatrix project_psd_trace(const CMatrix& m, double target) {
  require_hermitian(m, "project_psd_trace");
  EigenSolver es(hermitian_part(m));
  const RVector lambda = project_simplex(es.eigenvalues(), target);
  CMatrix out = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(out);
}

CMatrix project_ball(const CMatrix& m, const CMatrix& center, double radius2) {
  const CMatrix d = m - center;
  const double n2 = d.squaredNorm();
  if (n2 <= radius2) return m;
  return center + std::sqrt(radius2 / n2) * d;
}

CMatrix project_unit_diagonal(const CMatrix& m) {
  CMatrix out = m;
  out.diagonal().setOnes();
  return out;
}

ConstraintResiduals constraint_residuals(const CMatrix& m, const SceneConfig& cfg, const CMatrix& r_d) {
  const double pt = cfg.power_budget;
  ConstraintResiduals r;
  r.psd = psd_distance(m) / pt;
  r.trace = std::abs(m.trace() - pt) / std::sqrt(static_cast<double>(m.rows())) / pt;
  r.ball = std::max(0.0, (m - r_d).norm() - std::sqrt(cfg.beampattern_tol)) / pt;
  return r;
}

void validate_desired_covariance(const CMatrix& r_d, const SceneConfig& cfg) {
  if (r_d.rows() != cfg.n_tx || r_d.cols() != cfg.n_tx)
    throw ConfigError(fmt::format("R_D must be {0}x{0}, got {1}x{2}", cfg.n_tx, r_d.rows(), r_d.cols()));
  const double pt = cfg.power_budget;
  if ((r_d - r_d.adjoint()).norm() > 1e-10 * std::max(1.0, r_d.norm()))
    throw ConfigError("R_D must be Hermitian");
  if (psd_distance(r_d) > 1e-10 * pt) throw ConfigError("R_D must be positive semidefinite");
  if (std::abs(r_d.trace() - pt) > 1e-10 * pt)
    throw ConfigError(fmt::format("R_D must have trace P_T = {}, got {}", pt, r_d.trace().real()));
}

CMatrix dykstra(const CMatrix& m, const std::vector<Projection>& sets,
                const std::function<double(const CMatrix&)>& residual, const DykstraOptions& opts) {
  CMatrix x = m;
  std::vector<CMatrix> corrections(sets.size(), CMatrix::Zero(m.rows(), m.cols()));
  const double scale = std::max(1.0, m.norm());
  double worst = std::numeric_limits<double>::infinity();
  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    const CMatrix previous = x;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const CMatrix shifted = x + corrections[i];
      x = sets[i](shifted);
      corrections[i] = shifted - x;
    }
    const double change = (x - previous).norm() / scale;
    if (change > opts.tol) continue;
    worst = residual(x);
    if (worst < opts.tol) return x;
  }
  if (!std::isfinite(worst)) worst = residual(x);
  throw SolverError(fmt::format("Dykstra projection did not converge in {} cycles (worst violation {:.3e})",
                                opts.max_cycles, worst));
}

CMatrix dykstra_project(const CMatrix& m, const SceneConfig& cfg, const CMatrix& r_d, const DykstraOptions& opts) {
  require_hermitian(m, "dykstra_project");
  const double pt = cfg.power_budget;
  const double radius2 = cfg.beampattern_tol;
  std::vector<Projection> sets;
  if (opts.fuse_psd_trace) {
    sets.emplace_back([pt](const CMatrix& x) { return project_psd_trace(x, pt); });
  } else {
    sets.emplace_back([](const CMatrix& x) { return project_psd(x); });
    sets.emplace_back([pt](const CMatrix& x) { return project_trace(x, pt); });
  }
  sets.emplace_back([&r_d, radius2](const CMatrix& x) { return project_ball(x, r_d, radius2); });
  auto residual = [&](const CMatrix& x) {
    // the ball is the last set, so its residual is zero; check the cheap trace term first
    ConstraintResiduals r;
    r.trace = std::abs(x.trace() - pt) / std::sqrt(static_cast<double>(x.rows())) / pt;
    if (r.trace >= opts.tol) return r.trace;
    return constraint_residuals(x, cfg, r_d).worst();
  };
  return hermitian_part(dykstra(hermitian_part(m), sets, residual, opts));
}

RelaxedCovariance solve_relaxed(const CMatrix& omega, const SceneConfig& cfg, const CMatrix& r_d,
                                const RelaxedSolveOptions& opts, const std::optional<CMatrix>& warm_start) {
  require_hermitian(omega, "solve_relaxed");
  const CMatrix om = hermitian_part(omega);
  RelaxedCovariance out;
  out.s = warm_start ? dykstra_project(*warm_start, cfg, r_d, opts.dykstra) : CMatrix(r_d);
  out.objective = trace_real(out.s, om);
  out.objective_trace.push_back(out.objective);

  const double omega_norm = om.norm();
  if (omega_norm == 0.0) return out;
  double eta = cfg.power_budget / omega_norm;
  int halvings = 0;
  for (int step = 0; step < opts.max_steps; ++step) {
    const CMatrix candidate = dykstra_project(out.s + eta * om, cfg, r_d, opts.dykstra);
    const double value = trace_real(candidate, om);
    const double slack = 1e-12 * std::max(std::abs(out.objective), omega_norm * cfg.power_budget);
    if (value < out.objective - slack) {
      // ascent is guaranteed for exact projections; a drop means the projection tolerance bit
      if (++halvings > 40) break;
      eta *= 0.5;
      continue;
    }
    const double gain = value - out.objective;
    out.s = candidate;
    out.objective = std::max(value, out.objective);
    out.objective_trace.push_back(out.objective);
    out.steps = step + 1;
    if (gain <= opts.rel_tol * std::max(std::abs(out.objective), std::numeric_limits<double>::min())) break;
    eta *= 2.0;
  }
  // Clean up the Dykstra tolerance: exact PSD, exact trace.
  out.s = project_psd(out.s);
  const double tr = out.s.trace().real();
  if (tr > 0.0) out.s *= cfg.power_budget / tr;
  out.objective = trace_real(out.s, om);
  return out;
}

Precoder factor_precoder(const RelaxedCovariance& s, int k, const CMatrix& omega, const SceneConfig& cfg,
                         const CMatrix& r_d, Rng& rng, int n_g) {
  if (n_g < 1) throw SolverError(fmt::format("factor_precoder: n_g must be >= 1, got {}", n_g));
  if (k < 1) throw SolverError("factor_precoder: K must be >= 1");
  const auto n = s.s.rows();
  const double pt = cfg.power_budget;
  const CMatrix om = hermitian_part(omega);

  std::optional<Precoder> best;
  double best_value = -std::numeric_limits<double>::infinity();
  auto consider = [&](CMatrix p) {
    const double power = p.squaredNorm();
    if (!(power > 0.0) || !std::isfinite(power)) return;
    p *= std::sqrt(pt / power);
    const CMatrix cov = p * p.adjoint();
    if ((cov - r_d).squaredNorm() > cfg.beampattern_tol * (1.0 + 1e-9)) return;
    const double value = (p.adjoint() * om * p).trace().real();
    if (value > best_value) {
      best_value = value;
      best = Precoder{std::move(p)};
    }
  };

  EigenSolver es(hermitian_part(s.s));
  {
    // eigenvalues ascend, so the top-K pairs are the trailing columns
    CMatrix p = CMatrix::Zero(n, k);
    for (int j = 0; j < k && j < n; ++j) {
      const auto idx = n - 1 - j;
      p.col(j) = std::sqrt(std::max(es.eigenvalues()[idx], 0.0)) * es.eigenvectors().col(idx);
    }
    consider(std::move(p));
  }
  const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix factor = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint() / std::sqrt(double(k));
  for (int i = 0; i < n_g; ++i) consider(factor * complex_normal_matrix(static_cast<int>(n), k, rng));

  if (!best) throw SolverError("randomization infeasible: no candidate satisfies the beampattern constraint");
  return *best;
}

std::vector<RandomizationReport> approximation_ratio_study(const CMatrix& a, const CMatrix& r_star,
                                                           const std::vector<int>& n_g_grid, Rng& rng) {
  require_hermitian(a, "approximation_ratio_study");
  if (r_star.rows() != a.rows() || r_star.cols() != a.cols())
    throw DimensionError("approximation_ratio_study: A and R* must have equal shape");
  if (n_g_grid.empty()) throw SolverError("approximation_ratio_study: empty N_G grid");
  const int l = static_cast<int>(a.rows());
  const CMatrix ah = hermitian_part(a);
  const double sdp = trace_real(ah, hermitian_part(r_star));
  const CMatrix factor = psd_sqrt(r_star);

  std::vector<int> sorted = n_g_grid;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 1) throw SolverError("approximation_ratio_study: N_G must be >= 1");

  std::vector<double> best_at(sorted.size());
  double best = -std::numeric_limits<double>::infinity();
  std::size_t next = 0;
  for (int draw = 1; draw <= sorted.back(); ++draw) {
    CVector xi = factor * complex_normal_matrix(l, 1, rng);
    for (int i = 0; i < l; ++i) {
      const double mag = std::abs(xi[i]);
      xi[i] = mag > 0.0 ? xi[i] / mag : cdouble(1.0, 0.0);
    }
    best = std::max(best, xi.dot(ah * xi).real());
    while (next < sorted.size() && sorted[next] == draw) best_at[next++] = best;
  }

  std::vector<RandomizationReport> out;
  for (int ng : n_g_grid) {
    const auto pos = std::lower_bound(sorted.begin(), sorted.end(), ng) - sorted.begin();
    RandomizationReport r;
    r.n_samples = ng;
    r.best_objective = best_at[static_cast<std::size_t>(pos)];
    r.sdp_objective = sdp;
    r.ratio = sdp != 0.0 ? r.best_objective / sdp : 1.0;
    out.push_back(r);
  }
  return out;
}

double UnitDiagonalRelaxation::relative_gap() const {
  return (dual_bound - objective) / std::max(std::abs(dual_bound), std::numeric_limits<double>::min());
}

UnitDiagonalRelaxation solve_unit_diagonal_relaxation(const CMatrix& a, const UnitDiagonalOptions& opts) {
  require_hermitian(a, "solve_unit_diagonal_relaxation");
  const CMatrix ah = hermitian_part(a);
  const auto l = ah.rows();
  const int rank = opts.rank > 0 ? opts.rank
                                 : static_cast<int>(std::ceil(std::sqrt(2.0 * static_cast<double>(l)))) + 1;

  Rng rng(opts.seed);
  CMatrix v = complex_normal_matrix(static_cast<int>(l), rank, rng);
  v.rowwise().normalize();

  UnitDiagonalRelaxation out;
  auto certify = [&]() {
    out.r = v * v.adjoint();
    out.r.diagonal().setOnes();
    const CMatrix ar = ah * out.r;
    out.objective = ar.trace().real();
    const RVector y = ar.diagonal().real();
    CMatrix slack = ah;
    slack.diagonal() -= y.cast<cdouble>();
    const double lmax = EigenSolver(hermitian_part(slack), Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    out.dual_bound = y.sum() + static_cast<double>(l) * std::max(0.0, lmax);
  };

  constexpr int kCertifyEvery = 10;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (Eigen::Index i = 0; i < l; ++i) {
      Eigen::Matrix<cdouble, 1, Eigen::Dynamic> row = ah.row(i) * v - ah(i, i) * v.row(i);
      const double n = row.norm();
      if (n > 0.0) v.row(i) = row / n;
    }
    out.sweeps = sweep + 1;
    if (out.sweeps % kCertifyEvery == 0) {
      certify();
      if (out.relative_gap() <= opts.gap_tol) return out;
    }
  }
  certify();
  return out;
}

}  // namespace isac
