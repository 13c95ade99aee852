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

#include "isac/isac.h"

#include "isac/config.hpp"
#include "isac/harness.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

struct isac_scene {
  isac::SceneConfig cfg;
  isac::TrialRealization trial;
};

struct isac_run {
  isac::RunResult result;
};

namespace {

thread_local std::string g_last_error;

isac_status fail(isac_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps the C++ error hierarchy onto status codes.
template <class F>
isac_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const isac::ConfigError& e) {
    return fail(ISAC_ERR_CONFIG, e.what());
  } catch (const isac::SolverError& e) {
    return fail(ISAC_ERR_SOLVER, e.what());
  } catch (const isac::DimensionError& e) {
    return fail(ISAC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const isac::Error& e) {
    return fail(ISAC_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(ISAC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ISAC_ERR_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

isac::Json parse_or_empty(const char* text) {
  return text ? isac::parse_json(text) : isac::Json::object();
}

isac_status copy_out(const double* src, size_t n, double* dst, size_t capacity, size_t* length) {
  if (length) *length = n;
  if (!dst) return capacity == 0 ? ISAC_OK : fail(ISAC_ERR_INVALID_ARGUMENT, "null output buffer");
  if (capacity < n) return fail(ISAC_ERR_INVALID_ARGUMENT, "output buffer too small");
  std::memcpy(dst, src, n * sizeof(double));
  return ISAC_OK;
}

isac::CMatrix read_complex(const double* values, int rows, int cols) {
  isac::CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const size_t k = 2 * (static_cast<size_t>(j) * rows + i);
      m(i, j) = isac::cdouble(values[k], values[k + 1]);
    }
  return m;
}

isac::Json summarize(const isac::AggregateResult& r) {
  using isac::Json;
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back({{"point", f.point}, {"trial", f.trial}, {"message", f.message}});
  Json points = Json::array();
  for (const auto& c : r.convergence) {
    int max_it = 0;
    for (int it : c.outer_iterations) max_it = std::max(max_it, it);
    points.push_back({{"beta", c.beta},
                      {"trials_ok", c.trials_ok},
                      {"max_outer_iterations", max_it},
                      {"final_mean_objective", c.objective.empty() ? 0.0 : c.objective.back().mean}});
  }
  for (const auto& s : r.scaling)
    points.push_back({{"L", s.l}, {"method", isac::to_string(s.method)}, {"mean_objective", s.objective.mean},
                      {"mean_irs_time", s.mean_irs_time}});
  for (const auto& q : r.ratio)
    points.push_back({{"L", q.l}, {"n_g", q.n_g}, {"mean_ratio", q.ratio.mean}, {"max_ratio", q.max_ratio}});
  for (const auto& b : r.bench_checks)
    points.push_back({{"L", b.l}, {"y_rel_diff", b.y_rel_diff}, {"z_rel_diff", b.z_rel_diff}});
  return Json{{"kind", isac::to_string(r.kind)},
              {"files", r.files},
              {"trials_failed", r.failures.size()},
              {"failures", failures},
              {"points", points}};
}

}  // namespace

extern "C" {

const char* isac_version(void) { return "1.0.0"; }

const char* isac_last_error_message(void) { return g_last_error.c_str(); }

void isac_string_free(char* s) { std::free(s); }

isac_status isac_scene_create(const char* scene_json, uint64_t master_seed, int trial, isac_scene_t** out) {
  return guarded([&] {
    if (!out) return fail(ISAC_ERR_INVALID_ARGUMENT, "out is null");
    *out = nullptr;
    if (trial < 0) return fail(ISAC_ERR_INVALID_ARGUMENT, "trial must be >= 0");
    auto scene = std::make_unique<isac_scene>();
    scene->cfg = isac::scene_from_json(parse_or_empty(scene_json));
    scene->trial = isac::realize_trial(scene->cfg, master_seed, trial);
    *out = scene.release();
    return ISAC_OK;
  });
}

void isac_scene_destroy(isac_scene_t* scene) { delete scene; }

isac_status isac_scene_dims(const isac_scene_t* scene, int* n_tx, int* n_users, int* irs_elements) {
  if (!scene) return fail(ISAC_ERR_INVALID_ARGUMENT, "scene is null");
  if (n_tx) *n_tx = scene->cfg.n_tx;
  if (n_users) *n_users = scene->cfg.n_users;
  if (irs_elements) *irs_elements = scene->cfg.irs_elements();
  return ISAC_OK;
}

isac_status isac_scene_objective(const isac_scene_t* scene, const double* precoder, const double* theta,
                                 double* objective, double* snr_radar, double* snr_comm) {
  return guarded([&] {
    if (!scene || !precoder || !theta) return fail(ISAC_ERR_INVALID_ARGUMENT, "null argument");
    const isac::Precoder p{read_complex(precoder, scene->cfg.n_tx, scene->cfg.n_users)};
    const isac::IrsPhase th{read_complex(theta, scene->cfg.irs_elements(), 1).col(0)};
    const isac::SnrSnapshot s = isac::objective_snapshot(p, th, scene->trial.ch, scene->cfg);
    if (objective) *objective = s.objective;
    if (snr_radar) *snr_radar = s.snr_radar;
    if (snr_comm) *snr_comm = s.snr_comm;
    return ISAC_OK;
  });
}

isac_status isac_run_alternating(const isac_scene_t* scene, const char* solver_json, isac_run_t** out) {
  return guarded([&] {
    if (!scene || !out) return fail(ISAC_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    isac::SolverOptions opts = isac::solver_from_json(parse_or_empty(solver_json));
    opts.seed = scene->trial.solver_seed;
    auto run = std::make_unique<isac_run>();
    run->result = isac::run_alternating(scene->trial.ch, scene->cfg, scene->trial.r_d, opts);
    *out = run.release();
    return ISAC_OK;
  });
}

void isac_run_destroy(isac_run_t* run) { delete run; }

isac_status isac_run_objective_trace(const isac_run_t* run, double* values, size_t capacity, size_t* length) {
  if (!run) return fail(ISAC_ERR_INVALID_ARGUMENT, "run is null");
  const auto& v = run->result.trace.objective_per_outer;
  return copy_out(v.data(), v.size(), values, capacity, length);
}

isac_status isac_run_theta(const isac_run_t* run, double* values, size_t capacity, size_t* length) {
  if (!run) return fail(ISAC_ERR_INVALID_ARGUMENT, "run is null");
  const auto& t = run->result.theta.theta;
  return copy_out(reinterpret_cast<const double*>(t.data()), 2 * static_cast<size_t>(t.size()), values, capacity,
                  length);
}

isac_status isac_run_precoder(const isac_run_t* run, double* values, size_t capacity, size_t* length) {
  if (!run) return fail(ISAC_ERR_INVALID_ARGUMENT, "run is null");
  const auto& p = run->result.precoder.p;
  return copy_out(reinterpret_cast<const double*>(p.data()), 2 * static_cast<size_t>(p.size()), values, capacity,
                  length);
}

isac_status isac_run_info(const isac_run_t* run, int* outer_iterations, int* terminated_by, int* precoder_dips) {
  if (!run) return fail(ISAC_ERR_INVALID_ARGUMENT, "run is null");
  const auto& tr = run->result.trace;
  if (outer_iterations) *outer_iterations = tr.outer_iterations();
  if (terminated_by) *terminated_by = tr.terminated_by == isac::Termination::kTolerance ? 0 : 1;
  if (precoder_dips) *precoder_dips = tr.precoder_dips;
  return ISAC_OK;
}

isac_status isac_config_validate(const char* experiment_json) {
  return guarded([&] {
    if (!experiment_json) return fail(ISAC_ERR_INVALID_ARGUMENT, "config is null");
    isac::experiment_from_json(isac::parse_json(experiment_json));
    return ISAC_OK;
  });
}

isac_status isac_config_resolve(const char* experiment_json, char** resolved_json) {
  return guarded([&] {
    if (!experiment_json || !resolved_json) return fail(ISAC_ERR_INVALID_ARGUMENT, "null argument");
    *resolved_json = nullptr;
    const isac::ExperimentSpec spec = isac::experiment_from_json(isac::parse_json(experiment_json));
    *resolved_json = copy_string(isac::to_json(spec).dump(2));
    return ISAC_OK;
  });
}

isac_status isac_experiment_run(const char* experiment_json, const char* out_dir, const isac_overrides* overrides,
                                char** summary_json) {
  return guarded([&] {
    if (!experiment_json) return fail(ISAC_ERR_INVALID_ARGUMENT, "config is null");
    if (summary_json) *summary_json = nullptr;
    isac::ExperimentSpec spec = isac::experiment_from_json(isac::parse_json(experiment_json));
    if (out_dir) spec.output_dir = out_dir;
    if (overrides) {
      if (overrides->seed_set) spec.master_seed = overrides->seed;
      if (overrides->trials_set) spec.trials = overrides->trials;
      if (overrides->threads_set) spec.threads = overrides->threads;
    }
    spec.validate();
    const isac::AggregateResult result = isac::run_experiment(spec);
    if (summary_json) *summary_json = copy_string(summarize(result).dump(2));
    return ISAC_OK;
  });
}

isac_status isac_plot_data(const char* csv_path, const char* group_column, char** text) {
  return guarded([&] {
    if (!csv_path || !text) return fail(ISAC_ERR_INVALID_ARGUMENT, "null argument");
    *text = nullptr;
    std::ostringstream out;
    isac::write_plot_data(csv_path, out, group_column ? group_column : "");
    *text = copy_string(out.str());
    return ISAC_OK;
  });
}

}  // extern "C"
