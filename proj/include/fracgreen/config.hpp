// Copyright 2026 The fracgreen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracgreen/errors.hpp"
#include "fracgreen/params.hpp"
#include "fracgreen/solver.hpp"
#include "fracgreen/sphere.hpp"
#include "fracgreen/verify.hpp"

namespace fracgreen {

struct SuiteRequest {
  std::string name;
  long samples = 1000;
};

struct KernelPair {
  Point x, y;
};

struct Config {
  int n = 3;
  double alpha = 1.0;
  std::optional<double> p;

  struct BallGrid {
    int radial = 24;
    int angular = 96;
    AngularKind angular_kind = AngularKind::EqualArea;
    /// Radial resolution for the nonlinear solve, which uses the 120-ray
    /// icosahedral rule when n = 3.
    int solve_radial = 24;
  } ball;

  struct SlabGrid {
    std::vector<double> lo, hi;
    std::vector<int> counts;
  } slab;

  struct Quad {
    int jacobi_nodes = 48;
    double adaptive_tol = 1e-12;
  } quad;

  SolveOptions solver;

  struct Sweep {
    int count = 64;
    double tolerance = 1e-6;
    std::vector<int> axes;  // empty: every axis
  } sweep;

  std::vector<SuiteRequest> suites;
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "fracgreen-out";

  struct KernelEval {
    std::string domain = "ball";
    double radius = 1.0;
    std::vector<KernelPair> pairs;  // empty: seeded random pairs
    int random_pairs = 16;
  } kernel_eval;

  ModelParams model() const { return ModelParams(n, alpha, p); }

  std::vector<double> lambda_grid() const { return default_lambda_grid(sweep.count); }

  SuiteContext suite_context() const {
    SuiteContext ctx;
    ctx.jacobi_nodes = quad.jacobi_nodes;
    ctx.adaptive_tol = quad.adaptive_tol;
    ctx.radial = ball.radial;
    ctx.angular = ball.angular;
    ctx.symmetry_radial = ball.solve_radial;
    ctx.solve = solver;
    ctx.lambda_grid = lambda_grid();
    return ctx;
  }
};

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      throw ConfigError(join_path(path, key), "unknown key (allowed: " + list + ")");
    }
  }
}

template <class T>
T get_as(const json& v, const std::string& path) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path, "expected a string");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
}

template <class T>
void read_opt(const json& obj, const std::string& path, const char* key, T& out) {
  if (obj.contains(key)) out = get_as<T>(obj.at(key), join_path(path, key));
}

template <class T>
std::vector<T> read_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_as<T>(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

}  // namespace detail

/// Builds a validated Config from parsed JSON. Every key is checked; unknown
/// keys are rejected with their full path.
inline Config config_from_json(const nlohmann::json& j) {
  using detail::join_path;
  using detail::read_opt;
  using detail::require;
  Config c;
  detail::reject_unknown(j, "", {"n", "alpha", "p", "grid", "quad", "solver", "sweep", "suites",
                                 "seed", "output_dir", "kernel_eval"});
  require(j.contains("n"), "n", "required key missing");
  require(j.contains("alpha"), "alpha", "required key missing");
  c.n = detail::get_as<int>(j.at("n"), "n");
  c.alpha = detail::get_as<double>(j.at("alpha"), "alpha");
  require(c.n >= 3, "n", "dimension must be >= 3");
  require(c.alpha > 0.0 && c.alpha < 2.0, "alpha", "must satisfy 0 < alpha < 2");
  if (j.contains("p") && !j.at("p").is_null()) {
    c.p = detail::get_as<double>(j.at("p"), "p");
    try {
      (void)c.model();
    } catch (const ParameterError& e) {
      throw ConfigError("p", e.what());
    }
  }

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::reject_unknown(g, "grid", {"ball", "slab"});
    if (g.contains("ball")) {
      const auto& b = g.at("ball");
      detail::reject_unknown(b, "grid.ball", {"radial", "angular", "angular_kind", "solve_radial"});
      read_opt(b, "grid.ball", "radial", c.ball.radial);
      read_opt(b, "grid.ball", "angular", c.ball.angular);
      read_opt(b, "grid.ball", "solve_radial", c.ball.solve_radial);
      if (b.contains("angular_kind")) {
        const auto kind = detail::get_as<std::string>(b.at("angular_kind"), "grid.ball.angular_kind");
        try {
          c.ball.angular_kind = parse_angular_kind(kind);
        } catch (const Error& e) {
          throw ConfigError("grid.ball.angular_kind", e.what());
        }
      }
      require(c.ball.radial >= 2, "grid.ball.radial", "resolution must be >= 2");
      require(c.ball.angular >= 2, "grid.ball.angular", "resolution must be >= 2");
      require(c.ball.solve_radial >= 2, "grid.ball.solve_radial", "resolution must be >= 2");
    }
    if (g.contains("slab")) {
      const auto& s = g.at("slab");
      detail::reject_unknown(s, "grid.slab", {"lo", "hi", "counts"});
      require(s.contains("lo") && s.contains("hi") && s.contains("counts"), "grid.slab",
              "needs lo, hi and counts");
      c.slab.lo = detail::read_list<double>(s.at("lo"), "grid.slab.lo");
      c.slab.hi = detail::read_list<double>(s.at("hi"), "grid.slab.hi");
      c.slab.counts = detail::read_list<int>(s.at("counts"), "grid.slab.counts");
      const std::size_t n = static_cast<std::size_t>(c.n);
      require(c.slab.lo.size() == n && c.slab.hi.size() == n && c.slab.counts.size() == n,
              "grid.slab", "lo, hi and counts need n entries");
      for (std::size_t k = 0; k < n; ++k) {
        require(c.slab.counts[k] >= 2, "grid.slab.counts[" + std::to_string(k) + "]",
                "resolution must be >= 2");
        require(c.slab.hi[k] > c.slab.lo[k], "grid.slab.hi[" + std::to_string(k) + "]",
                "must exceed lo");
      }
      require(c.slab.lo[n - 1] >= 0.0, "grid.slab.lo[" + std::to_string(n - 1) + "]",
              "slab must lie in the half-space");
    }
  }

  if (j.contains("quad")) {
    const auto& q = j.at("quad");
    detail::reject_unknown(q, "quad", {"jacobi_nodes", "adaptive_tol"});
    read_opt(q, "quad", "jacobi_nodes", c.quad.jacobi_nodes);
    read_opt(q, "quad", "adaptive_tol", c.quad.adaptive_tol);
    require(c.quad.jacobi_nodes >= 2, "quad.jacobi_nodes", "must be >= 2");
    require(c.quad.adaptive_tol > 0.0, "quad.adaptive_tol", "must be positive");
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    detail::reject_unknown(s, "solver", {"max_iter", "tol", "damping", "init", "radial_fallback"});
    read_opt(s, "solver", "max_iter", c.solver.max_iter);
    read_opt(s, "solver", "tol", c.solver.tol);
    read_opt(s, "solver", "damping", c.solver.damping);
    read_opt(s, "solver", "radial_fallback", c.solver.radial_fallback);
    if (s.contains("init")) {
      const auto init = detail::get_as<std::string>(s.at("init"), "solver.init");
      if (init == "flat") {
        c.solver.init = SolveOptions::Init::Flat;
      } else if (init == "bump") {
        c.solver.init = SolveOptions::Init::Bump;
      } else {
        throw ConfigError("solver.init", "expected \"flat\" or \"bump\"");
      }
    }
    require(c.solver.max_iter >= 1, "solver.max_iter", "must be >= 1");
    require(c.solver.tol > 0.0, "solver.tol", "must be positive");
    require(c.solver.damping > 0.0 && c.solver.damping <= 1.0, "solver.damping",
            "must lie in (0, 1]");
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    detail::reject_unknown(s, "sweep", {"count", "tolerance", "axes"});
    read_opt(s, "sweep", "count", c.sweep.count);
    read_opt(s, "sweep", "tolerance", c.sweep.tolerance);
    if (s.contains("axes")) c.sweep.axes = detail::read_list<int>(s.at("axes"), "sweep.axes");
    require(c.sweep.count >= 2, "sweep.count", "must be >= 2");
    require(c.sweep.tolerance > 0.0, "sweep.tolerance", "must be positive");
    for (std::size_t k = 0; k < c.sweep.axes.size(); ++k) {
      require(c.sweep.axes[k] >= 1 && c.sweep.axes[k] <= c.n,
              "sweep.axes[" + std::to_string(k) + "]", "axis must lie in 1..n");
    }
  }

  if (j.contains("suites")) {
    const auto& s = j.at("suites");
    require(s.is_array(), "suites", "expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string path = "suites[" + std::to_string(i) + "]";
      SuiteRequest r;
      if (s[i].is_string()) {
        r.name = s[i].get<std::string>();
      } else {
        detail::reject_unknown(s[i], path, {"name", "samples"});
        require(s[i].contains("name"), join_path(path, "name"), "required key missing");
        r.name = detail::get_as<std::string>(s[i].at("name"), join_path(path, "name"));
        read_opt(s[i], path, "samples", r.samples);
      }
      const auto& names = suite_names();
      require(std::find(names.begin(), names.end(), r.name) != names.end(),
              join_path(path, "name"), "unknown suite '" + r.name + "'");
      require(r.samples >= 1, join_path(path, "samples"), "must be >= 1");
      c.suites.push_back(r);
    }
  }

  if (j.contains("seed")) {
    require(j.at("seed").is_number_unsigned(), "seed", "expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    c.output_dir = detail::get_as<std::string>(j.at("output_dir"), "output_dir");
  }

  if (j.contains("kernel_eval")) {
    const auto& k = j.at("kernel_eval");
    detail::reject_unknown(k, "kernel_eval", {"domain", "radius", "pairs", "random_pairs"});
    read_opt(k, "kernel_eval", "domain", c.kernel_eval.domain);
    read_opt(k, "kernel_eval", "radius", c.kernel_eval.radius);
    read_opt(k, "kernel_eval", "random_pairs", c.kernel_eval.random_pairs);
    require(c.kernel_eval.domain == "ball" || c.kernel_eval.domain == "half-space" ||
                c.kernel_eval.domain == "ball-R",
            "kernel_eval.domain", "expected \"ball\", \"half-space\" or \"ball-R\"");
    require(c.kernel_eval.radius > 0.0, "kernel_eval.radius", "must be positive");
    require(c.kernel_eval.random_pairs >= 0, "kernel_eval.random_pairs", "must be >= 0");
    if (k.contains("pairs")) {
      const auto& ps = k.at("pairs");
      require(ps.is_array(), "kernel_eval.pairs", "expected an array");
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::string path = "kernel_eval.pairs[" + std::to_string(i) + "]";
        detail::reject_unknown(ps[i], path, {"x", "y"});
        require(ps[i].contains("x") && ps[i].contains("y"), path, "needs x and y");
        KernelPair kp{detail::read_list<double>(ps[i].at("x"), join_path(path, "x")),
                      detail::read_list<double>(ps[i].at("y"), join_path(path, "y"))};
        require(kp.x.size() == static_cast<std::size_t>(c.n), join_path(path, "x"),
                "needs n coordinates");
        require(kp.y.size() == static_cast<std::size_t>(c.n), join_path(path, "y"),
                "needs n coordinates");
        c.kernel_eval.pairs.push_back(std::move(kp));
      }
    }
  }
  return c;
}

inline Config parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<root>", std::string("JSON parse error: ") + e.what());
  }
  return config_from_json(j);
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fracgreen
