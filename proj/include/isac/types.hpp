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

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace isac {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. The C API maps these onto status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent matrix/vector shapes handed to a kernel.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (bad key, out-of-range parameter, infeasible R_D).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed (non-convergence, infeasible randomization, ascent violation).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Every physical and weighting parameter of one scene. Powers are linear watts.
struct SceneConfig {
  int n_tx = 16;
  int n_rx = 16;
  int n_users = 5;
  int irs_rows = 6;  // L_y
  int irs_cols = 6;  // L_x
  double spacing_over_lambda = 0.5;
  double beta = 0.5;
  double sigma2_radar = 1e-3;
  double sigma2_comm = 1e-3;
  double alpha_gain = 1e-2;  // |alpha|^2, the round-trip power gain
  double power_budget = 1.0;
  double beampattern_tol = 10.0;
  double rician_g = 1.0;
  double rician_h = 0.1;
  double rician_f = 0.1;
  double target_azimuth = 0.3;
  double target_elevation = 0.9;
  double desired_beam_weight = 0.5;  // rho in the default desired covariance

  int irs_elements() const { return irs_rows * irs_cols; }

  /// Throws ConfigError when an invariant fails.
  void validate() const;
};

/// Channel realization. `alpha` carries the per-realization random phase.
struct ChannelSet {
  CMatrix g;        // L x N_T, radar -> IRS
  CMatrix h;        // K x L, IRS -> users
  CMatrix f;        // K x N_T, radar -> users
  CVector steer;    // length L, IRS response toward the target
  CMatrix r_mat;    // L x L, steer * steer^T (no conjugation)
  CVector tx_steer; // length N_T, radar ULA response toward the IRS (unit modulus)
  cdouble alpha{0.0, 0.0};

  int irs_elements() const { return static_cast<int>(steer.size()); }
  int n_tx() const { return static_cast<int>(g.cols()); }
  int n_users() const { return static_cast<int>(h.rows()); }
};

/// IRS phase vector; every entry lies on the unit circle.
struct IrsPhase {
  CVector theta;

  static IrsPhase identity(int l) { return IrsPhase{CVector::Ones(l)}; }
  int size() const { return static_cast<int>(theta.size()); }
  bool is_unit_modulus(double tol = 1e-12) const;
};

/// N_T x K radar precoder.
struct Precoder {
  CMatrix p;

  CMatrix covariance() const { return p * p.adjoint(); }
  double power() const { return p.squaredNorm(); }
};

}  // namespace isac
