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

// Monte-Carlo experiment runner. Trial i of every sweep point draws its channels from
// trial_stream(master_seed, i), so sweep points share realizations. Trials may run on several
// threads; results are stored by trial index and reduced in index order, so the CSV bytes do not
// depend on the thread count. Wall-clock figures only ever go to timing_*.csv files.

#pragma once

#include "isac/alternating.hpp"
#include "isac/config.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace isac {

struct TrialRealization {
  ChannelSet ch;
  CMatrix r_d;
  std::uint64_t solver_seed = 0;  // drawn after the channels
};

/// Channels, default R_D and solver seed of trial `trial`, exactly as the harness draws them.
TrialRealization realize_trial(const SceneConfig& cfg, std::uint64_t master_seed, int trial);

/// Mean and population variance, summed in index order.
struct MomentStats {
  double mean = 0.0;
  double variance = 0.0;
  double std = 0.0;
  int count = 0;
};

MomentStats moments(const std::vector<double>& x);

struct ConvergenceCurve {
  double beta = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
  // Per outer iteration. A trial that stopped early contributes its final value to later rows.
  std::vector<MomentStats> objective;
  std::vector<MomentStats> snr_radar;
  std::vector<MomentStats> snr_comm;
  std::vector<int> active;            // trials still iterating at each row
  std::vector<int> outer_iterations;  // per successful trial
  int tolerance_stops = 0;
  int precoder_dips = 0;
};

struct ScalingRow {
  int l = 0;
  IrsMethod method = IrsMethod::kMinorization;
  MomentStats objective;  // final objective
  double mean_outer_iterations = 0.0;
  double mean_inner_iterations = 0.0;
  double mean_time = 0.0;      // whole alternating run
  double mean_irs_time = 0.0;  // IRS stage only, summed over outer iterations
  double mean_irs_time_per_iteration = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
};

struct RatioRow {
  int l = 0;
  int n_g = 0;
  MomentStats ratio;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double max_dual_gap = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
};

struct BenchRow {
  std::string kernel;
  int l = 0;
  int round = 0;
  int reps = 0;
  double median_seconds = 0.0;
  double min_seconds = 0.0;
};

struct BenchCheck {
  int l = 0;
  double y_rel_diff = 0.0;  // fast vs Kronecker kernel, Frobenius-relative
  double z_rel_diff = 0.0;
};

struct TrialFailure {
  std::string point;
  int trial = 0;
  std::string message;
};

struct AggregateResult {
  ExperimentKind kind = ExperimentKind::kConvergence;
  std::vector<ConvergenceCurve> convergence;
  std::vector<ScalingRow> scaling;
  std::vector<RatioRow> ratio;
  std::vector<BenchRow> bench;
  std::vector<BenchCheck> bench_checks;
  std::vector<TrialFailure> failures;
  std::vector<std::string> files;  // written, relative to output_dir
};

/// Dispatches on spec.kind. Files are written only when spec.output_dir is non-empty.
AggregateResult run_experiment(const ExperimentSpec& spec);
AggregateResult run_convergence_experiment(const ExperimentSpec& spec);
AggregateResult run_scaling_experiment(const ExperimentSpec& spec);
AggregateResult run_ratio_experiment(const ExperimentSpec& spec);
AggregateResult run_bench(const ExperimentSpec& spec);

/// Runs body(0..n-1) on up to `threads` workers. Exceptions are rethrown in index order.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

/// Shortest round-trip form ("%.17g").
std::string format_double(double x);

/// Hash git would give the content as a blob: SHA-1 of "blob <size>\0" + content, lower-case hex.
std::string git_blob_sha1(const std::string& content);

/// Experiment description stored in metadata sidecars (execution-only keys removed).
Json experiment_identity(const ExperimentSpec& spec);

/// Rewrites a harness CSV as whitespace-separated gnuplot data. With `group_column`, rows are
/// split into blocks (two blank lines apart, addressable with `index`) whenever the value changes.
void write_plot_data(const std::string& csv_path, std::ostream& out, const std::string& group_column = {});

}  // namespace isac
