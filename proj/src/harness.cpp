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

#include "isac/harness.hpp"

#include "isac/scene.hpp"

#include <fmt/core.h>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace isac {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  template <class... Ts>
  void row(const Ts&... cells) {
    std::vector<std::string> r{cell(cells)...};
    if (r.size() != columns_.size())
      throw Error(fmt::format("CSV row has {} cells, header has {}", r.size(), columns_.size()));
    rows_.push_back(std::move(r));
  }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }

 private:
  static std::string cell(double x) { return format_double(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

class OutputDir {
 public:
  OutputDir(const ExperimentSpec& spec, AggregateResult& result) : spec_(spec), result_(result) {
    if (!spec.output_dir.empty()) {
      std::error_code ec;
      fs::create_directories(spec.output_dir, ec);
      if (ec) throw Error(fmt::format("cannot create output directory '{}': {}", spec.output_dir, ec.message()));
    }
  }

  void write(const std::string& name, const Table& table) {
    if (spec_.output_dir.empty()) return;
    const std::string body = table.str();
    const Json identity = experiment_identity(spec_);
    Json meta{{"file", name},
              {"columns", table.columns()},
              {"rows", table.size()},
              {"experiment", identity},
              {"config_sha1", git_blob_sha1(identity.dump())},
              {"content_sha1", git_blob_sha1(body)},
              {"library", "isac-irs"}};
    put(name, body);
    put(name + ".meta.json", meta.dump(2) + "\n");
    result_.files.push_back(name);
  }

 private:
  void put(const std::string& name, const std::string& body) {
    const fs::path path = fs::path(spec_.output_dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  }

  const ExperimentSpec& spec_;
  AggregateResult& result_;
};

SceneConfig scene_with_irs(SceneConfig cfg, int l) {
  std::tie(cfg.irs_rows, cfg.irs_cols) = irs_layout(l);
  return cfg;
}

void write_failures(OutputDir& out, const AggregateResult& result) {
  Table t({"point", "trial", "message"});
  for (const auto& f : result.failures) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    t.row(f.point, f.trial, msg);
  }
  out.write("failures.csv", t);
}

// Stats over per-trial series, carrying each series' last value forward.
std::vector<MomentStats> carried_moments(const std::vector<const std::vector<double>*>& series, std::size_t rows) {
  std::vector<MomentStats> out;
  std::vector<double> column(series.size());
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t i = 0; i < series.size(); ++i) column[i] = (*series[i])[std::min(t, series[i]->size() - 1)];
    out.push_back(moments(column));
  }
  return out;
}

}  // namespace

TrialRealization realize_trial(const SceneConfig& cfg, std::uint64_t master_seed, int trial) {
  Rng rng = trial_stream(master_seed, static_cast<std::uint64_t>(trial));
  TrialRealization r;
  r.ch = draw_channels(cfg, rng);
  r.r_d = default_desired_covariance(cfg, r.ch);
  r.solver_seed = rng();
  return r;
}

MomentStats moments(const std::vector<double>& x) {
  MomentStats m;
  m.count = static_cast<int>(x.size());
  if (x.empty()) return m;
  double sum = 0.0;
  for (double v : x) sum += v;
  m.mean = sum / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m.mean) * (v - m.mean);
  m.variance = ss / static_cast<double>(x.size());
  m.std = std::sqrt(m.variance);
  return m;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string git_blob_sha1(const std::string& content) {
  const std::string header = fmt::format("blob {}", content.size());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size() + 1) == 1 &&  // includes the NUL
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("SHA-1 digest failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

Json experiment_identity(const ExperimentSpec& spec) {
  Json j = to_json(spec);
  j.erase("output_dir");
  j.erase("threads");
  return j;
}

AggregateResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::kConvergence: return run_convergence_experiment(spec);
    case ExperimentKind::kScaling: return run_scaling_experiment(spec);
    case ExperimentKind::kRatio: return run_ratio_experiment(spec);
    case ExperimentKind::kBench: return run_bench(spec);
  }
  throw ConfigError("unknown experiment kind");
}

AggregateResult run_convergence_experiment(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::kConvergence) throw ConfigError("run_convergence_experiment: wrong kind");
  spec.validate();
  AggregateResult result;
  result.kind = spec.kind;
  OutputDir out(spec, result);

  const int n_beta = static_cast<int>(spec.sweep.beta.size());
  std::vector<std::optional<RunTrace>> traces(static_cast<std::size_t>(n_beta * spec.trials));
  std::vector<std::string> errors(traces.size());
  parallel_for(static_cast<int>(traces.size()), spec.threads, [&](int task) {
    const int b = task / spec.trials, trial = task % spec.trials;
    SceneConfig cfg = spec.scene;
    cfg.beta = spec.sweep.beta[static_cast<std::size_t>(b)];
    try {
      const TrialRealization re = realize_trial(cfg, spec.master_seed, trial);
      SolverOptions opts = spec.solver;
      opts.seed = re.solver_seed;
      traces[static_cast<std::size_t>(task)] = run_alternating(re.ch, cfg, re.r_d, opts).trace;
    } catch (const SolverError& e) {
      errors[static_cast<std::size_t>(task)] = e.what();
    }
  });

  Table summary({"beta", "trials", "trials_ok", "trials_failed", "max_outer_iterations", "mean_outer_iterations",
                 "tolerance_stops", "precoder_dips"});
  for (int b = 0; b < n_beta; ++b) {
    ConvergenceCurve curve;
    curve.beta = spec.sweep.beta[static_cast<std::size_t>(b)];
    const std::string tag = fmt::format("beta_{:g}", curve.beta);
    std::vector<const std::vector<double>*> obj, snr_r, snr_c;
    Table raw({"trial", "iteration", "objective", "snr_radar", "snr_comm", "relaxed_objective",
               "precoder_objective", "irs_inner_iterations", "terminated_by"});
    Table timing({"trial", "iteration", "precoder_seconds", "irs_seconds"});
    std::size_t rows = 0;
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::size_t task = static_cast<std::size_t>(b * spec.trials + trial);
      if (!traces[task]) {
        ++curve.trials_failed;
        result.failures.push_back({tag, trial, errors[task]});
        continue;
      }
      const RunTrace& tr = *traces[task];
      ++curve.trials_ok;
      obj.push_back(&tr.objective_per_outer);
      snr_r.push_back(&tr.snr_radar_per_outer);
      snr_c.push_back(&tr.snr_comm_per_outer);
      rows = std::max(rows, tr.objective_per_outer.size());
      curve.outer_iterations.push_back(tr.outer_iterations());
      curve.tolerance_stops += tr.terminated_by == Termination::kTolerance;
      curve.precoder_dips += tr.precoder_dips;
      for (int t = 0; t < tr.outer_iterations(); ++t) {
        const auto i = static_cast<std::size_t>(t);
        raw.row(trial, t + 1, tr.objective_per_outer[i], tr.snr_radar_per_outer[i], tr.snr_comm_per_outer[i],
                tr.relaxed_objective_per_outer[i], tr.precoder_objective_per_outer[i], tr.irs_inner_iterations[i],
                to_string(tr.terminated_by));
        timing.row(trial, t + 1, tr.wall_time_per_stage[i].precoder_seconds, tr.wall_time_per_stage[i].irs_seconds);
      }
    }
    if (!obj.empty()) {
      curve.objective = carried_moments(obj, rows);
      curve.snr_radar = carried_moments(snr_r, rows);
      curve.snr_comm = carried_moments(snr_c, rows);
      for (std::size_t t = 0; t < rows; ++t) {
        int active = 0;
        for (const auto* s : obj) active += s->size() > t;
        curve.active.push_back(active);
      }
    }

    Table agg({"iteration", "trials", "active_trials", "mean_objective", "var_objective", "std_objective",
               "mean_snr_radar", "var_snr_radar", "mean_snr_comm", "var_snr_comm"});
    for (std::size_t t = 0; t < rows; ++t) {
      agg.row(static_cast<int>(t + 1), curve.trials_ok, curve.active[t], curve.objective[t].mean,
              curve.objective[t].variance, curve.objective[t].std, curve.snr_radar[t].mean,
              curve.snr_radar[t].variance, curve.snr_comm[t].mean, curve.snr_comm[t].variance);
    }
    out.write(fmt::format("convergence_{}.csv", tag), agg);
    out.write(fmt::format("convergence_{}_trials.csv", tag), raw);
    out.write(fmt::format("timing_convergence_{}.csv", tag), timing);

    int max_it = 0;
    double mean_it = 0.0;
    for (int it : curve.outer_iterations) {
      max_it = std::max(max_it, it);
      mean_it += it;
    }
    if (!curve.outer_iterations.empty()) mean_it /= static_cast<double>(curve.outer_iterations.size());
    summary.row(curve.beta, spec.trials, curve.trials_ok, curve.trials_failed, max_it, mean_it, curve.tolerance_stops,
                curve.precoder_dips);
    result.convergence.push_back(std::move(curve));
  }
  out.write("convergence_summary.csv", summary);
  write_failures(out, result);
  return result;
}

AggregateResult run_scaling_experiment(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::kScaling) throw ConfigError("run_scaling_experiment: wrong kind");
  spec.validate();
  AggregateResult result;
  result.kind = spec.kind;
  OutputDir out(spec, result);

  constexpr IrsMethod kMethods[] = {IrsMethod::kMinorization, IrsMethod::kManifold};
  struct Outcome {
    double objective = 0.0;
    int outer = 0;
    int inner = 0;
    double seconds = 0.0;
    double irs_seconds = 0.0;
  };
  const int n_l = static_cast<int>(spec.sweep.irs_elements.size());
  const std::size_t n_tasks = static_cast<std::size_t>(n_l * spec.trials);
  std::vector<std::optional<Outcome>> outcomes(2 * n_tasks);
  std::vector<std::string> errors(2 * n_tasks);
  parallel_for(static_cast<int>(n_tasks), spec.threads, [&](int task) {
    const int li = task / spec.trials, trial = task % spec.trials;
    const SceneConfig cfg = scene_with_irs(spec.scene, spec.sweep.irs_elements[static_cast<std::size_t>(li)]);
    std::optional<TrialRealization> re;
    for (int m = 0; m < 2; ++m) {
      const std::size_t slot = static_cast<std::size_t>(m) * n_tasks + static_cast<std::size_t>(task);
      try {
        if (!re) re = realize_trial(cfg, spec.master_seed, trial);
        SolverOptions opts = spec.solver;
        opts.seed = re->solver_seed;
        opts.irs_method = kMethods[m];
        const auto t0 = Clock::now();
        const RunResult run = run_alternating(re->ch, cfg, re->r_d, opts);
        Outcome o;
        o.seconds = seconds_since(t0);
        o.objective = run.trace.objective_per_outer.back();
        o.outer = run.trace.outer_iterations();
        for (int k : run.trace.irs_inner_iterations) o.inner += k;
        for (const auto& st : run.trace.wall_time_per_stage) o.irs_seconds += st.irs_seconds;
        outcomes[slot] = o;
      } catch (const SolverError& e) {
        errors[slot] = e.what();
      }
    }
  });

  Table agg({"L", "method", "trials", "trials_ok", "mean_objective", "var_objective", "std_objective",
             "mean_outer_iterations", "mean_inner_iterations"});
  Table raw({"L", "method", "trial", "final_objective", "outer_iterations", "inner_iterations"});
  Table timing({"L", "method", "mean_time", "mean_irs_time", "mean_irs_time_per_iteration", "reference_l35"});
  Table timing_raw({"L", "method", "trial", "seconds", "irs_seconds"});
  double reference_base = 0.0;
  for (int m = 0; m < 2; ++m) {
    for (int li = 0; li < n_l; ++li) {
      const int l = spec.sweep.irs_elements[static_cast<std::size_t>(li)];
      ScalingRow row;
      row.l = l;
      row.method = kMethods[m];
      const std::string method = to_string(row.method);
      std::vector<double> finals;
      double irs_iters = 0.0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::size_t slot = static_cast<std::size_t>(m) * n_tasks + static_cast<std::size_t>(li * spec.trials + trial);
        if (!outcomes[slot]) {
          ++row.trials_failed;
          result.failures.push_back({fmt::format("L_{}_{}", l, method), trial, errors[slot]});
          continue;
        }
        const Outcome& o = *outcomes[slot];
        ++row.trials_ok;
        finals.push_back(o.objective);
        row.mean_outer_iterations += o.outer;
        row.mean_inner_iterations += o.inner;
        row.mean_time += o.seconds;
        row.mean_irs_time += o.irs_seconds;
        irs_iters += o.inner;
        raw.row(l, method, trial, o.objective, o.outer, o.inner);
        timing_raw.row(l, method, trial, o.seconds, o.irs_seconds);
      }
      row.objective = moments(finals);
      if (row.trials_ok > 0) {
        const double n = row.trials_ok;
        row.mean_outer_iterations /= n;
        row.mean_inner_iterations /= n;
        row.mean_time /= n;
        row.mean_irs_time /= n;
        row.mean_irs_time_per_iteration = irs_iters > 0.0 ? row.mean_irs_time * n / irs_iters : 0.0;
      }
      if (li == 0 && m == 0) reference_base = row.mean_irs_time;
      const double l0 = spec.sweep.irs_elements.front();
      agg.row(l, method, spec.trials, row.trials_ok, row.objective.mean, row.objective.variance, row.objective.std,
              row.mean_outer_iterations, row.mean_inner_iterations);
      timing.row(l, method, row.mean_time, row.mean_irs_time, row.mean_irs_time_per_iteration,
                 reference_base * std::pow(l / l0, 3.5));
      result.scaling.push_back(row);
    }
  }
  out.write("scaling.csv", agg);
  out.write("scaling_trials.csv", raw);
  out.write("timing_scaling.csv", timing);
  out.write("timing_scaling_trials.csv", timing_raw);
  write_failures(out, result);
  return result;
}

AggregateResult run_ratio_experiment(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::kRatio) throw ConfigError("run_ratio_experiment: wrong kind");
  spec.validate();
  AggregateResult result;
  result.kind = spec.kind;
  OutputDir out(spec, result);

  struct Outcome {
    std::vector<RandomizationReport> reports;
    double dual_gap = 0.0;
  };
  const int n_l = static_cast<int>(spec.sweep.irs_elements.size());
  std::vector<std::optional<Outcome>> outcomes(static_cast<std::size_t>(n_l * spec.trials));
  std::vector<std::string> errors(outcomes.size());
  parallel_for(static_cast<int>(outcomes.size()), spec.threads, [&](int task) {
    const int li = task / spec.trials, trial = task % spec.trials;
    const SceneConfig cfg = scene_with_irs(spec.scene, spec.sweep.irs_elements[static_cast<std::size_t>(li)]);
    try {
      TrialRealization re = realize_trial(cfg, spec.master_seed, trial);
      SolverOptions opts = spec.solver;
      opts.seed = re.solver_seed;
      const RunResult run = run_alternating(re.ch, cfg, re.r_d, opts);
      CMatrix a = build_quadratic_terms(run.precoder, re.ch, cfg).u3;
      if (a.norm() > 0.0) a /= a.norm();
      const UnitDiagonalRelaxation rel = solve_unit_diagonal_relaxation(a);
      Rng rng(re.solver_seed ^ 0x9e3779b97f4a7c15ULL);
      outcomes[static_cast<std::size_t>(task)] =
          Outcome{approximation_ratio_study(a, rel.r, spec.sweep.n_g, rng), rel.relative_gap()};
    } catch (const SolverError& e) {
      errors[static_cast<std::size_t>(task)] = e.what();
    }
  });

  Table agg({"L", "n_g", "trials", "trials_ok", "mean_ratio", "var_ratio", "std_ratio", "min_ratio", "max_ratio"});
  Table raw({"L", "trial", "n_g", "best_objective", "sdp_objective", "ratio", "dual_gap"});
  for (int li = 0; li < n_l; ++li) {
    const int l = spec.sweep.irs_elements[static_cast<std::size_t>(li)];
    for (std::size_t gi = 0; gi < spec.sweep.n_g.size(); ++gi) {
      RatioRow row;
      row.l = l;
      row.n_g = spec.sweep.n_g[gi];
      std::vector<double> ratios;
      for (int trial = 0; trial < spec.trials; ++trial) {
        const auto& o = outcomes[static_cast<std::size_t>(li * spec.trials + trial)];
        if (!o) {
          ++row.trials_failed;
          if (gi == 0) result.failures.push_back({fmt::format("L_{}", l), trial, errors[static_cast<std::size_t>(li * spec.trials + trial)]});
          continue;
        }
        ++row.trials_ok;
        const RandomizationReport& rep = o->reports[gi];
        ratios.push_back(rep.ratio);
        row.max_dual_gap = std::max(row.max_dual_gap, o->dual_gap);
        raw.row(l, trial, rep.n_samples, rep.best_objective, rep.sdp_objective, rep.ratio, o->dual_gap);
      }
      row.ratio = moments(ratios);
      if (!ratios.empty()) {
        row.min_ratio = *std::min_element(ratios.begin(), ratios.end());
        row.max_ratio = *std::max_element(ratios.begin(), ratios.end());
      }
      agg.row(l, row.n_g, spec.trials, row.trials_ok, row.ratio.mean, row.ratio.variance, row.ratio.std,
              row.min_ratio, row.max_ratio);
      result.ratio.push_back(row);
    }
  }
  out.write("ratio.csv", agg);
  out.write("ratio_trials.csv", raw);
  write_failures(out, result);
  return result;
}

AggregateResult run_bench(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::kBench) throw ConfigError("run_bench: wrong kind");
  spec.validate();
  AggregateResult result;
  result.kind = spec.kind;
  OutputDir out(spec, result);

  constexpr int kMaxKroneckerL = 16;
  Table check({"L", "y_rel_diff", "z_rel_diff"});
  Table timing({"kernel", "L", "round", "reps", "median_seconds", "min_seconds"});

  auto time_reps = [&](const std::string& kernel, int l, int round, const std::function<void()>& fn) {
    std::vector<double> samples;
    for (int r = 0; r < spec.bench.reps; ++r) {
      const auto t0 = Clock::now();
      fn();
      samples.push_back(seconds_since(t0));
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    BenchRow row{kernel, l, round, spec.bench.reps,
                 n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]), samples.front()};
    timing.row(row.kernel, row.l, row.round, row.reps, row.median_seconds, row.min_seconds);
    result.bench.push_back(row);
  };

  for (std::size_t li = 0; li < spec.sweep.irs_elements.size(); ++li) {
    const int l = spec.sweep.irs_elements[li];
    const SceneConfig cfg = scene_with_irs(spec.scene, l);
    Rng rng = trial_stream(spec.master_seed, li);
    const ChannelSet ch = draw_channels(cfg, rng);
    const CMatrix r_d = default_desired_covariance(cfg, ch);
    Precoder p{complex_normal_matrix(cfg.n_tx, cfg.n_users, rng)};
    p.p *= std::sqrt(cfg.power_budget / p.power());
    const QuarticSurrogate s = build_quartic_surrogate(IrsPhase::identity(l), p, ch, cfg);
    const LinearSurrogate lin{complex_normal_matrix(l, 1, rng), complex_normal_matrix(l, 1, rng)};
    const IrsPhase previous = IrsPhase::identity(l);
    const CMatrix far = r_d + 10.0 * cfg.power_budget * complex_normal_matrix(cfg.n_tx, cfg.n_tx, rng);
    const CMatrix perturbed = 0.5 * (far + far.adjoint());

    const bool with_kron = l <= kMaxKroneckerL;
    if (with_kron) {
      const QuarticKernels fast = quartic_kernels(s.x, s.v, s.w);
      const QuarticKernels kron = quartic_kernels_kronecker(s.x, s.v, s.w);
      const double y_scale = std::max(kron.y.norm(), std::numeric_limits<double>::min());
      const double z_scale = std::max(kron.z.norm(), std::numeric_limits<double>::min());
      BenchCheck c{l, (fast.y - kron.y).norm() / y_scale, (fast.z - kron.z).norm() / z_scale};
      check.row(c.l, c.y_rel_diff, c.z_rel_diff);
      result.bench_checks.push_back(c);
    }
    for (int round = 0; round < spec.bench.rounds; ++round) {
      volatile double sink = 0.0;
      time_reps("quartic_kernels", l, round, [&] { sink = sink + quartic_kernels(s.x, s.v, s.w).y(0, 0).real(); });
      if (with_kron)
        time_reps("quartic_kernels_kronecker", l, round,
                  [&] { sink = sink + quartic_kernels_kronecker(s.x, s.v, s.w).y(0, 0).real(); });
      time_reps("irs_phase_update", l, round,
                [&] { sink = sink + irs_phase_update(lin.nu, lin.eta, previous).theta[0].real(); });
      time_reps("dykstra_project", l, round, [&] { sink = sink + dykstra_project(perturbed, cfg, r_d)(0, 0).real(); });
    }
  }
  out.write("bench_check.csv", check);
  out.write("timing_bench.csv", timing);
  return result;
}

void write_plot_data(const std::string& csv_path, std::ostream& out, const std::string& group_column) {
  std::ifstream in(csv_path);
  if (!in) throw Error(fmt::format("cannot open '{}'", csv_path));
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(fmt::format("'{}' is empty", csv_path));
  const std::vector<std::string> header = split(line);
  std::optional<std::size_t> group;
  if (!group_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), group_column);
    if (it == header.end()) throw Error(fmt::format("'{}' has no column '{}'", csv_path, group_column));
    group = static_cast<std::size_t>(it - header.begin());
  }
  out << '#';
  for (const auto& h : header) out << ' ' << h;
  out << '\n';
  std::optional<std::string> current;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (group && cells.size() > *group) {
      if (current && *current != cells[*group]) out << "\n\n";
      current = cells[*group];
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? " " : "") << cells[i];
    out << '\n';
  }
}

}  // namespace isac
