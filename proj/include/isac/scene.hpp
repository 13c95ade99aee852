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

#include <cstdint>
#include <random>

namespace isac {

using Rng = std::mt19937_64;

/// Independent stream for one Monte-Carlo trial, derived from (master seed, trial index).
Rng trial_stream(std::uint64_t master_seed, std::uint64_t trial_index);

/// Circular complex Gaussian with unit variance (real and imaginary parts each N(0, 1/2)).
cdouble complex_normal(Rng& rng);
CMatrix complex_normal_matrix(int rows, int cols, Rng& rng);

double db_to_linear(double db);
double linear_to_db(double linear);  // throws ConfigError on non-positive input
double dbm_to_watts(double dbm);

/// Uniform planar array response a_y (x) a_x. Entry (p * l_x + q) = a_y[p] * a_x[q].
///
/// a_y advances by 2*pi*(d/lambda)*cos(psi_a)*sin(psi_e) per element, a_x by
/// 2*pi*(d/lambda)*sin(psi_a)*sin(psi_e). Entries are built from phases, so |a_i| == 1 exactly.
CVector upa_steering(double psi_a, double psi_e, int l_x, int l_y, double d_over_lambda);

/// Uniform linear array response with phase increment 2*pi*(d/lambda)*sin(angle).
CVector ula_steering(double angle, int n, double d_over_lambda);

/// True when the radar array spacing is the half-wavelength default.
bool ula_spacing_check(const SceneConfig& config);

/// sqrt(k/(1+k)) * los + sqrt(1/(1+k)) * N with N ~ CN(0, 1) entrywise.
CMatrix rician_channel(int rows, int cols, double k_factor, const CMatrix& los, Rng& rng);

/// Draws G, H, F and the alpha phase for one realization.
ChannelSet draw_channels(const SceneConfig& config, Rng& rng);

/// Fills steer / r_mat from the target angles; used by draw_channels and tests.
void attach_target(ChannelSet& channels, const SceneConfig& config);

/// Default desired covariance (1-rho)(P_T/N_T) I + rho P_T b b^H, b the normalized
/// transmit response toward the IRS. Always PSD with trace P_T.
CMatrix default_desired_covariance(const SceneConfig& config, const ChannelSet& channels);

}  // namespace isac
