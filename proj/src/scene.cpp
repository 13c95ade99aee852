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

#include "isac/scene.hpp"

#include <fmt/core.h>

#include <cmath>

namespace isac {

void SceneConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (n_tx < 1) fail(fmt::format("n_tx must be >= 1, got {}", n_tx));
  if (n_rx != n_tx)
    fail(fmt::format("n_rx must equal n_tx (return channel is G^T), got n_rx={} n_tx={}", n_rx,
                     n_tx));
  if (n_users < 1) fail(fmt::format("n_users must be >= 1, got {}", n_users));
  if (irs_rows < 1 || irs_cols < 1)
    fail(fmt::format("IRS dimensions must be >= 1, got {}x{}", irs_rows, irs_cols));
  if (!(beta >= 0.0 && beta <= 1.0)) fail(fmt::format("beta must lie in [0,1], got {}", beta));
  if (!(spacing_over_lambda > 0.0)) fail("spacing_over_lambda must be positive");
  if (!(sigma2_radar > 0.0) || !(sigma2_comm > 0.0)) fail("noise powers must be positive");
  if (!(power_budget > 0.0)) fail("power_budget must be positive");
  if (!(beampattern_tol > 0.0)) fail("beampattern_tol must be positive");
  if (!(alpha_gain >= 0.0)) fail("alpha gain must be non-negative");
  if (!(rician_g >= 0.0 && rician_h >= 0.0 && rician_f >= 0.0))
    fail("Rician factors must be non-negative");
  if (!(desired_beam_weight >= 0.0 && desired_beam_weight <= 1.0))
    fail("desired_beam_weight must lie in [0,1]");
}

bool IrsPhase::is_unit_modulus(double tol) const {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (std::abs(std::abs(theta[i]) - 1.0) > tol) return false;
  }
  return true;
}

Rng trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial_index),
                    static_cast<std::uint32_t>(trial_index >> 32), 0x15ac15acU};
  return Rng(seq);
}

cdouble complex_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

CMatrix complex_normal_matrix(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  // column-major fill order is part of the reproducibility contract
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = complex_normal(rng);
  return m;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0)) throw ConfigError(fmt::format("linear_to_db needs a positive value, got {}", linear));
  return 10.0 * std::log10(linear);
}

double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }

namespace {

CVector phase_ramp(int n, double increment) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v[i] = std::polar(1.0, increment * i);
  return v;
}

}  // namespace

CVector upa_steering(double psi_a, double psi_e, int l_x, int l_y, double d_over_lambda) {
  if (l_x < 1 || l_y < 1)
    throw DimensionError(fmt::format("upa_steering: array dimensions must be positive, got {}x{}", l_y, l_x));
  const double k = 2.0 * kPi * d_over_lambda;
  const double inc_y = k * std::cos(psi_a) * std::sin(psi_e);
  const double inc_x = k * std::sin(psi_a) * std::sin(psi_e);
  CVector a(l_x * l_y);
  for (int p = 0; p < l_y; ++p)
    for (int q = 0; q < l_x; ++q) a[p * l_x + q] = std::polar(1.0, inc_y * p + inc_x * q);
  return a;
}

CVector ula_steering(double angle, int n, double d_over_lambda) {
  if (n < 1) throw DimensionError("ula_steering: n must be positive");
  return phase_ramp(n, 2.0 * kPi * d_over_lambda * std::sin(angle));
}

bool ula_spacing_check(const SceneConfig& config) {
  return std::abs(config.spacing_over_lambda - 0.5) <= 1e-12;
}

CMatrix rician_channel(int rows, int cols, double k_factor, const CMatrix& los, Rng& rng) {
  if (!(k_factor >= 0.0)) throw ConfigError(fmt::format("Rician factor must be >= 0, got {}", k_factor));
  if (los.rows() != rows || los.cols() != cols)
    throw DimensionError(fmt::format("rician_channel: LOS is {}x{}, expected {}x{}", los.rows(),
                                     los.cols(), rows, cols));
  const double w_los = std::sqrt(k_factor / (1.0 + k_factor));
  const double w_nlos = std::sqrt(1.0 / (1.0 + k_factor));
  return w_los * los + w_nlos * complex_normal_matrix(rows, cols, rng);
}

void attach_target(ChannelSet& channels, const SceneConfig& config) {
  channels.steer = upa_steering(config.target_azimuth, config.target_elevation, config.irs_cols,
                                config.irs_rows, config.spacing_over_lambda);
  channels.r_mat = channels.steer * channels.steer.transpose();
}

ChannelSet draw_channels(const SceneConfig& config, Rng& rng) {
  config.validate();
  const int l = config.irs_elements();
  const int n = config.n_tx;
  const int k = config.n_users;
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  std::uniform_real_distribution<double> elevation(0.0, kPi / 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);

  ChannelSet ch;
  // radar -> IRS: LOS is the IRS arrival response times the radar departure response
  const double depart = angle(rng);
  const double arrive_a = angle(rng);
  const double arrive_e = elevation(rng);
  ch.tx_steer = ula_steering(depart, n, config.spacing_over_lambda);
  const CVector irs_arrival =
      upa_steering(arrive_a, arrive_e, config.irs_cols, config.irs_rows, config.spacing_over_lambda);
  ch.g = rician_channel(l, n, config.rician_g, irs_arrival * ch.tx_steer.transpose(), rng);

  auto random_phases = [&](int len) {
    CVector v(len);
    for (int i = 0; i < len; ++i) v[i] = std::polar(1.0, phase(rng));
    return v;
  };
  const CVector h_left = random_phases(k);
  const CVector h_right = random_phases(l);
  ch.h = rician_channel(k, l, config.rician_h, h_left * h_right.transpose(), rng);
  const CVector f_left = random_phases(k);
  const CVector f_right = random_phases(n);
  ch.f = rician_channel(k, n, config.rician_f, f_left * f_right.transpose(), rng);

  ch.alpha = std::polar(std::sqrt(config.alpha_gain), phase(rng));
  attach_target(ch, config);
  return ch;
}

CMatrix default_desired_covariance(const SceneConfig& config, const ChannelSet& channels) {
  const int n = config.n_tx;
  const double pt = config.power_budget;
  const double rho = config.desired_beam_weight;
  CVector b = channels.tx_steer;
  if (b.size() != n) b = CVector::Ones(n);
  b /= b.norm();
  CMatrix rd = (1.0 - rho) * (pt / n) * CMatrix::Identity(n, n) + rho * pt * (b * b.adjoint());
  return 0.5 * (rd + rd.adjoint());
}

}  // namespace isac
