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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracgreen/config.hpp"
#include "fracgreen/errors.hpp"
#include "fracgreen/grid.hpp"
#include "fracgreen/kernel.hpp"
#include "fracgreen/rng.hpp"
#include "fracgreen/solver.hpp"
#include "fracgreen/sphere.hpp"
#include "fracgreen/verify.hpp"

namespace fracgreen {

/// Exit codes of run_command.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"kernel-eval",    "solve-ball", "moving-plane",
                                                 "liouville-scan", "verify",     "all"};
  return names;
}

// ---------------------------------------------------------------------------
// Writers. Numbers use %.17g so files round-trip and are byte-stable.

inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& body) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << body;
  if (!out) throw Error("write failed: " + path.string());
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline std::string field_csv(const Field& f) {
  const int n = f.grid->dim();
  std::string s;
  for (int k = 1; k <= n; ++k) s += "x" + std::to_string(k) + ",";
  s += "value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    for (double c : f.grid->points()[i]) s += fmt_num(c) + ",";
    s += fmt_num(f.values[i]) + "\n";
  }
  return s;
}

inline std::string sweep_csv(const SweepReport& r) {
  std::string s = "lambda,min_w,violations,sigma_size,interp_error,skipped\n";
  for (std::size_t k = 0; k < r.lambda_values.size(); ++k) {
    s += fmt_num(r.lambda_values[k]) + "," + fmt_num(r.min_w[k]) + "," +
         std::to_string(r.violation_counts[k]) + "," + std::to_string(r.sigma_sizes[k]) + "," +
         fmt_num(r.interp_error[k]) + "," + (r.skipped[k] ? "1" : "0") + "\n";
  }
  return s;
}

inline std::string summary_csv(const std::vector<SuiteReport>& reports) {
  std::string s = "suite,violations,worst_margin,runtime_ms\n";
  for (const auto& r : reports) {
    s += r.suite + "," + std::to_string(r.violations) + "," +
         fmt_num(std::isfinite(r.worst_margin) ? r.worst_margin : 0.0) + "," +
         std::to_string(r.runtime_ms) + "\n";
  }
  return s;
}

inline std::string scan_csv(const ScanReport& r) {
  std::string s = "n,alpha,p,m_min,e_m,tau_p,f_p,fprime_p,recursion_gap,ok\n";
  for (const auto& pt : r.points) {
    s += std::to_string(pt.n) + "," + fmt_num(pt.alpha) + "," + fmt_num(pt.p) + "," +
         std::to_string(pt.report.m_min) + "," + fmt_num(pt.report.exponents.back()) + "," +
         fmt_num(pt.report.tau_p) + "," + fmt_num(pt.report.f_p) + "," +
         fmt_num(pt.report.fprime_p) + "," + fmt_num(pt.recursion_gap) + "," +
         (pt.ok ? "1" : "0") + "\n";
  }
  return s;
}

inline nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json j;
  j["axis"] = r.axis;
  j["lambda0_estimate"] = r.lambda0_estimate;
  j["tolerance"] = r.tolerance;
  double mn = std::numeric_limits<double>::infinity(), ie = 0.0;
  long viol = 0;
  for (std::size_t k = 0; k < r.min_w.size(); ++k) {
    if (!r.skipped[k]) mn = std::min(mn, r.min_w[k]);
    ie = std::max(ie, r.interp_error[k]);
    viol += r.violation_counts[k];
  }
  j["min_w"] = std::isfinite(mn) ? nlohmann::json(mn) : nlohmann::json(nullptr);
  j["max_interp_error"] = ie;
  j["violations"] = viol;
  j["lambda_count"] = r.lambda_values.size();
  return j;
}

inline nlohmann::json to_json(const CascadeReport& r) {
  return {{"m_min", r.m_min},       {"p", r.p},         {"exponents", r.exponents},
          {"closed_form_e_m", r.closed_form_e_m}, {"tau_p", r.tau_p}, {"f_p", r.f_p},
          {"fprime_p", r.fprime_p}};
}

/// Writes suite reports and the summary table into dir.
inline void write_outputs(const std::vector<SuiteReport>& reports,
                          const std::filesystem::path& dir) {
  for (const auto& r : reports) write_json(dir / "reports" / (r.suite + ".json"), to_json(r));
  write_text(dir / "summary.csv", summary_csv(reports));
}

// ---------------------------------------------------------------------------

/// Runs commands against one Config; caches the ball solution so "all" does
/// not solve twice.
class App {
 public:
  explicit App(Config cfg, std::ostream& log = std::cerr) : cfg_(std::move(cfg)), log_(log) {
    if (const char* env = std::getenv("FRACGREEN_TEST_TAMPER_B")) b_scale_ = std::atof(env);
  }

  const Config& config() const { return cfg_; }

  int run(const std::string& cmd) {
    if (cmd == "kernel-eval") return kernel_eval();
    if (cmd == "solve-ball") return solve_ball();
    if (cmd == "moving-plane") return moving_plane();
    if (cmd == "liouville-scan") return liouville_scan_cmd();
    if (cmd == "verify") return verify();
    if (cmd == "all") {
      for (const char* c : {"verify", "solve-ball", "moving-plane", "liouville-scan"}) {
        const int rc = run(c);
        if (rc != kExitOk) return rc;
      }
      return kExitOk;
    }
    std::string list;
    for (const auto& c : command_names()) list += (list.empty() ? "" : ", ") + c;
    throw UsageError("unknown command '" + cmd + "'; valid commands: " + list);
  }

 private:
  GreenKernel kernel() const {
    const ModelParams params = cfg_.model();
    GreenConstants c = green_constants(params);
    c.B *= b_scale_;
    return GreenKernel(params, c, cfg_.quad.jacobi_nodes);
  }

  std::filesystem::path out() const { return cfg_.output_dir; }

  int kernel_eval() {
    const ModelParams params = cfg_.model();
    const GreenKernel K = kernel();
    const int n = params.n();
    const auto& ke = cfg_.kernel_eval;
    Domain dom = ke.domain == "ball"         ? Domain::unit_ball()
                 : ke.domain == "half-space" ? Domain::half_space()
                                             : Domain::ball_radius(ke.radius);
    std::vector<KernelPair> pairs = ke.pairs;
    if (pairs.empty()) {
      for (int i = 0; i < ke.random_pairs; ++i) {
        Rng rng = Rng::stream(cfg_.seed, static_cast<std::uint64_t>(i));
        auto draw = [&] {
          if (dom.kind() == Domain::Kind::HalfSpace) {
            Point p(n);
            for (int k = 0; k + 1 < n; ++k) p[k] = rng.uniform(-2.0, 2.0);
            p[n - 1] = rng.uniform(0.0, 2.0);
            return p;
          }
          Point p = rng.in_ball(n, dom.radius());
          if (dom.kind() == Domain::Kind::BallRadiusR) p[n - 1] += dom.radius();
          return p;
        };
        pairs.push_back({draw(), draw()});
      }
    }
    std::string s;
    for (int k = 1; k <= n; ++k) s += "x" + std::to_string(k) + ",";
    for (int k = 1; k <= n; ++k) s += "y" + std::to_string(k) + ",";
    s += "s,t,G\n";
    for (const auto& pr : pairs) {
      for (double c : pr.x) s += fmt_num(c) + ",";
      for (double c : pr.y) s += fmt_num(c) + ",";
      const KernelCoords kc = coords(dom, pr.x, pr.y);
      s += fmt_num(kc.s) + "," + fmt_num(kc.t) + "," + fmt_num(K.green(dom, pr.x, pr.y)) + "\n";
    }
    write_text(out() / "kernel_eval.csv", s);
    log_ << "kernel-eval: " << pairs.size() << " pairs on " << dom.name() << "\n";
    return kExitOk;
  }

  GridPtr solve_grid() const {
    const int n = cfg_.n;
    AngularRule rule = (n == 3 && cfg_.p)
                           ? icosahedral_rule()
                           : make_angular_rule(cfg_.ball.angular_kind, n, cfg_.ball.angular,
                                               cfg_.seed);
    const int radial = cfg_.p ? cfg_.ball.solve_radial : cfg_.ball.radial;
    return std::make_shared<const Grid>(Grid::ball(n, radial, std::move(rule)));
  }

  // Nonlinear solve when p is set; otherwise the potential of a centered bump.
  int ensure_solution() {
    if (solution_) return kExitOk;
    const GreenKernel K = kernel();
    const GridPtr grid = solve_grid();
    nlohmann::json info;
    info["grid"] = grid->describe();
    if (cfg_.p) {
      GreenOperator op(grid, K);
      try {
        PowerSolveResult r = nonlinear_power_solve(op, *cfg_.p, cfg_.solver);
        info["mode"] = "power";
        info["p"] = *cfg_.p;
        info["lambda_star"] = r.lambda_star;
        info["iterations"] = r.iterations;
        info["residual"] = r.residual;
        info["radial_fallback"] = r.used_radial_fallback;
        info["u_max"] = r.u.max_abs();
        solution_ = std::move(r.u);
      } catch (const NonConvergence& e) {
        info["mode"] = "power";
        info["error"] = e.what();
        info["residual_history"] = e.residual_history;
        write_json(out() / "solve.json", info);
        log_ << "solve-ball: " << e.what() << "\n";
        return kExitFailure;
      }
    } else {
      const Field psi = suites::bump_field(grid, Point(cfg_.n, 0.0), 0.5);
      solution_ = dirichlet_solve(psi, K);
      info["mode"] = "linear-bump";
      info["u_max"] = solution_->max_abs();
    }
    solve_info_ = info;
    return kExitOk;
  }

  int solve_ball() {
    const int rc = ensure_solution();
    if (rc != kExitOk) return rc;
    write_text(out() / "field_u.csv", field_csv(*solution_));
    write_json(out() / "solve.json", solve_info_);
    log_ << "solve-ball: " << solution_->grid->describe() << ", max u "
         << solution_->max_abs() << "\n";
    return kExitOk;
  }

  int moving_plane() {
    const int rc = ensure_solution();
    if (rc != kExitOk) return rc;
    std::vector<int> axes = cfg_.sweep.axes;
    if (axes.empty()) {
      for (int k = 1; k <= cfg_.n; ++k) axes.push_back(k);
    }
    nlohmann::json j = nlohmann::json::array();
    long violations = 0;
    for (int axis : axes) {
      const SweepReport r = moving_plane_sweep(*solution_, axis, cfg_.lambda_grid(),
                                               cfg_.model(), Domain::unit_ball(),
                                               cfg_.sweep.tolerance);
      write_text(out() / ("sweep_axis" + std::to_string(axis) + ".csv"), sweep_csv(r));
      j.push_back(to_json(r));
      for (int v : r.violation_counts) violations += v;
    }
    write_json(out() / "sweep.json", j);
    log_ << "moving-plane: " << axes.size() << " axes, " << violations << " violations\n";
    return violations == 0 ? kExitOk : kExitFailure;
  }

  int liouville_scan_cmd() {
    std::vector<double> alphas;
    for (int k = 1; k <= 9; ++k) alphas.push_back(0.2 * k);
    const ScanReport r = liouville_scan({3, 4, 5}, alphas, 50);
    write_text(out() / "liouville_scan.csv", scan_csv(r));
    if (cfg_.p) write_json(out() / "cascade.json", to_json(liouville_cascade(cfg_.model())));
    log_ << "liouville-scan: " << r.points.size() << " points, " << r.violations
         << " violations\n";
    return r.violations == 0 ? kExitOk : kExitFailure;
  }

  int verify() {
    SuiteContext ctx = cfg_.suite_context();
    ctx.b_scale = b_scale_;
    std::vector<SuiteReport> reports;
    bool ok = true;
    for (const auto& req : cfg_.suites) {
      SuiteReport r = run_suite(req.name, cfg_.model(), req.samples, cfg_.seed, ctx);
      log_ << "verify: " << r.suite << (r.passed ? " pass" : " FAIL") << ", "
           << r.violations << " violations\n";
      ok = ok && r.passed;
      reports.push_back(std::move(r));
    }
    write_outputs(reports, out());
    return ok ? kExitOk : kExitFailure;
  }

  Config cfg_;
  std::ostream& log_;
  double b_scale_ = 1.0;
  std::optional<Field> solution_;
  nlohmann::json solve_info_;
};

/// Runs one command and maps errors to exit codes: usage and configuration
/// problems give 2, everything else that goes wrong gives 1.
inline int run_command(const std::string& cmd, const Config& cfg, std::ostream& log = std::cerr) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error("cannot create output directory " + cfg.output_dir.string());
    App app(cfg, log);
    return app.run(cmd);
  } catch (const UsageError& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace fracgreen
