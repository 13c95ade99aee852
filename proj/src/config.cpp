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

#include "isac/config.hpp"

#include "isac/scene.hpp"

#include <fmt/core.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace isac {

namespace {

// Tracks which keys of an object were read so leftovers can be reported.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("{}: expected a JSON object", where_));
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const Json* v = get(key)) out = as_number(*v, key);
  }

  void integer(const std::string& key, int& out) {
    if (const Json* v = get(key)) {
      if (!v->is_number_integer()) throw ConfigError(fmt::format("{}.{}: expected an integer", where_, key));
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const Json* v = get(key)) {
      if (!v->is_boolean()) throw ConfigError(fmt::format("{}.{}: expected true or false", where_, key));
      out = v->get<bool>();
    }
  }

  // Linear value under `key` or a decibel value under `key + suffix`.
  void quantity(const std::string& key, const std::string& suffix, double (*from_db)(double), double& out) {
    const std::string db_key = key + suffix;
    if (has(key) && has(db_key))
      throw ConfigError(fmt::format("{}: give either '{}' or '{}', not both", where_, key, db_key));
    number(key, out);
    if (const Json* v = get(db_key)) out = from_db(as_number(*v, db_key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(fmt::format("{}: unknown key '{}'", where_, it.key()));
    }
  }

  const std::string& where() const { return where_; }

 private:
  double as_number(const Json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError(fmt::format("{}.{}: expected a number", where_, key));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(fmt::format("{}.{}: not finite", where_, key));
    return x;
  }

  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <class T>
std::vector<T> number_list(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(fmt::format("{}: expected an array", where));
  std::vector<T> out;
  for (const Json& x : v) {
    if constexpr (std::is_integral_v<T>) {
      if (!x.is_number_integer()) throw ConfigError(fmt::format("{}: expected integers", where));
    } else {
      if (!x.is_number()) throw ConfigError(fmt::format("{}: expected numbers", where));
    }
    out.push_back(x.get<T>());
  }
  return out;
}

std::uint64_t seed_value(const Json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(fmt::format("{}: expected a non-negative integer", where));
}

const char* const kKindNames[] = {"convergence", "scaling", "ratio", "bench"};

}  // namespace

std::string to_string(ExperimentKind k) { return kKindNames[static_cast<int>(k)]; }

SceneConfig scene_from_json(const Json& j, SceneConfig c) {
  Reader r(j, "scene");
  r.integer("n_tx", c.n_tx);
  r.integer("n_rx", c.n_rx);
  r.integer("n_users", c.n_users);
  r.integer("irs_rows", c.irs_rows);
  r.integer("irs_cols", c.irs_cols);
  r.number("spacing_over_lambda", c.spacing_over_lambda);
  r.number("beta", c.beta);
  r.quantity("sigma2_radar", "_dbm", dbm_to_watts, c.sigma2_radar);
  r.quantity("sigma2_comm", "_dbm", dbm_to_watts, c.sigma2_comm);
  r.quantity("power_budget", "_dbm", dbm_to_watts, c.power_budget);
  r.quantity("alpha_gain", "_db", db_to_linear, c.alpha_gain);
  r.quantity("beampattern_tol", "_db", db_to_linear, c.beampattern_tol);
  r.quantity("rician_g", "_db", db_to_linear, c.rician_g);
  r.quantity("rician_h", "_db", db_to_linear, c.rician_h);
  r.quantity("rician_f", "_db", db_to_linear, c.rician_f);
  r.number("target_azimuth", c.target_azimuth);
  r.number("target_elevation", c.target_elevation);
  r.number("desired_beam_weight", c.desired_beam_weight);
  r.finish();
  c.validate();
  return c;
}

SolverOptions solver_from_json(const Json& j, SolverOptions o) {
  Reader r(j, "solver");
  r.quantity("eps_rel", "_db", db_to_linear, o.eps_rel);
  r.integer("t_max", o.t_max);
  r.integer("n_g", o.n_g);
  if (const Json* v = r.get("irs_solver")) {
    const std::string s = v->is_string() ? v->get<std::string>() : "";
    if (s == "minorization") o.irs_method = IrsMethod::kMinorization;
    else if (s == "manifold") o.irs_method = IrsMethod::kManifold;
    else throw ConfigError("solver.irs_solver: expected \"minorization\" or \"manifold\"");
  }
  r.boolean("inner_loop", o.inner_loop);
  r.number("inner_tol", o.inner.inner_tol);
  r.integer("inner_max", o.inner.inner_max);
  r.boolean("safeguard", o.inner.safeguard);
  if (const Json* v = r.get("theta_init")) {
    const std::string s = v->is_string() ? v->get<std::string>() : "";
    if (s == "identity") o.theta_init = ThetaInit::kIdentity;
    else if (s == "random") o.theta_init = ThetaInit::kRandom;
    else throw ConfigError("solver.theta_init: expected \"identity\" or \"random\"");
  }
  r.finish();
  o.validate();
  return o;
}

void ExperimentSpec::validate() const {
  scene.validate();
  solver.validate();
  if (trials < 1) throw ConfigError(fmt::format("trials must be >= 1, got {}", trials));
  if (threads < 1) throw ConfigError(fmt::format("threads must be >= 1, got {}", threads));
  if (bench.reps < 1 || bench.rounds < 1) throw ConfigError("bench.reps and bench.rounds must be >= 1");

  auto require = [&](bool present, const char* name) {
    if (!present) throw ConfigError(fmt::format("kind '{}' needs a non-empty sweep.{}", to_string(kind), name));
  };
  auto forbid = [&](bool present, const char* name) {
    if (present) throw ConfigError(fmt::format("sweep.{} is not used by kind '{}'", name, to_string(kind)));
  };
  const bool b = !sweep.beta.empty(), l = !sweep.irs_elements.empty(), g = !sweep.n_g.empty();
  switch (kind) {
    case ExperimentKind::kConvergence: require(b, "beta"); forbid(l, "irs_elements"); forbid(g, "n_g"); break;
    case ExperimentKind::kScaling: require(l, "irs_elements"); forbid(b, "beta"); forbid(g, "n_g"); break;
    case ExperimentKind::kRatio: require(l, "irs_elements"); require(g, "n_g"); forbid(b, "beta"); break;
    case ExperimentKind::kBench: require(l, "irs_elements"); forbid(b, "beta"); forbid(g, "n_g"); break;
  }
  for (double x : sweep.beta)
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(fmt::format("sweep.beta: {} outside [0, 1]", x));
  for (int x : sweep.irs_elements)
    if (x < 1) throw ConfigError(fmt::format("sweep.irs_elements: {} must be >= 1", x));
  for (int x : sweep.n_g)
    if (x < 1) throw ConfigError(fmt::format("sweep.n_g: {} must be >= 1", x));
}

ExperimentSpec experiment_from_json(const Json& j) {
  ExperimentSpec s;
  Reader r(j, "experiment");
  const Json* kind = r.get("kind");
  if (!kind) throw ConfigError("experiment: missing 'kind'");
  const std::string k = kind->is_string() ? kind->get<std::string>() : "";
  bool known = false;
  for (int i = 0; i < 4; ++i) {
    if (k == kKindNames[i]) {
      s.kind = static_cast<ExperimentKind>(i);
      known = true;
    }
  }
  if (!known) throw ConfigError(fmt::format("experiment.kind: unknown kind '{}'", k));

  if (const Json* v = r.get("scene")) s.scene = scene_from_json(*v);
  if (const Json* v = r.get("solver")) s.solver = solver_from_json(*v);
  if (const Json* v = r.get("sweep")) {
    Reader sw(*v, "sweep");
    if (const Json* x = sw.get("beta")) s.sweep.beta = number_list<double>(*x, "sweep.beta");
    if (const Json* x = sw.get("irs_elements")) s.sweep.irs_elements = number_list<int>(*x, "sweep.irs_elements");
    if (const Json* x = sw.get("n_g")) s.sweep.n_g = number_list<int>(*x, "sweep.n_g");
    sw.finish();
  }
  if (const Json* v = r.get("bench")) {
    Reader b(*v, "bench");
    b.integer("reps", s.bench.reps);
    b.integer("rounds", s.bench.rounds);
    b.finish();
  }
  r.integer("trials", s.trials);
  if (const Json* v = r.get("master_seed")) s.master_seed = seed_value(*v, "experiment.master_seed");
  if (const Json* v = r.get("output_dir")) {
    if (!v->is_string()) throw ConfigError("experiment.output_dir: expected a string");
    s.output_dir = v->get<std::string>();
  }
  r.integer("threads", s.threads);
  r.finish();
  s.validate();
  return s;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("invalid JSON: {}", e.what()));
  }
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return experiment_from_json(parse_json(ss.str()));
}

Json to_json(const SceneConfig& c) {
  return Json{{"n_tx", c.n_tx},
              {"n_rx", c.n_rx},
              {"n_users", c.n_users},
              {"irs_rows", c.irs_rows},
              {"irs_cols", c.irs_cols},
              {"spacing_over_lambda", c.spacing_over_lambda},
              {"beta", c.beta},
              {"sigma2_radar", c.sigma2_radar},
              {"sigma2_comm", c.sigma2_comm},
              {"power_budget", c.power_budget},
              {"alpha_gain", c.alpha_gain},
              {"beampattern_tol", c.beampattern_tol},
              {"rician_g", c.rician_g},
              {"rician_h", c.rician_h},
              {"rician_f", c.rician_f},
              {"target_azimuth", c.target_azimuth},
              {"target_elevation", c.target_elevation},
              {"desired_beam_weight", c.desired_beam_weight}};
}

Json to_json(const SolverOptions& o) {
  return Json{{"eps_rel", o.eps_rel},
              {"t_max", o.t_max},
              {"n_g", o.n_g},
              {"irs_solver", to_string(o.irs_method)},
              {"inner_loop", o.inner_loop},
              {"inner_tol", o.inner.inner_tol},
              {"inner_max", o.inner.inner_max},
              {"safeguard", o.inner.safeguard},
              {"theta_init", o.theta_init == ThetaInit::kRandom ? "random" : "identity"}};
}

Json to_json(const ExperimentSpec& s) {
  Json sweep = Json::object();
  if (!s.sweep.beta.empty()) sweep["beta"] = s.sweep.beta;
  if (!s.sweep.irs_elements.empty()) sweep["irs_elements"] = s.sweep.irs_elements;
  if (!s.sweep.n_g.empty()) sweep["n_g"] = s.sweep.n_g;
  return Json{{"kind", to_string(s.kind)},
              {"scene", to_json(s.scene)},
              {"solver", to_json(s.solver)},
              {"sweep", sweep},
              {"bench", Json{{"reps", s.bench.reps}, {"rounds", s.bench.rounds}}},
              {"trials", s.trials},
              {"master_seed", s.master_seed},
              {"output_dir", s.output_dir},
              {"threads", s.threads}};
}

std::pair<int, int> irs_layout(int l) {
  if (l < 1) throw ConfigError(fmt::format("IRS size must be >= 1, got {}", l));
  int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(l))));
  while (l % rows != 0) --rows;
  return {rows, l / rows};
}

}  // namespace isac
