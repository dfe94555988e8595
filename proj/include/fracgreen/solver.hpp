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
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracgreen/errors.hpp"
#include "fracgreen/geom.hpp"
#include "fracgreen/grid.hpp"
#include "fracgreen/kernel.hpp"
#include "fracgreen/parallel.hpp"
#include "fracgreen/params.hpp"
#include "fracgreen/quadrature.hpp"

namespace fracgreen {

/// How the diagonal (x = y) cell of the Green operator is treated.
enum class DiagonalTreatment {
  /// Automatic: singularity subtraction on ball grids, self cell on slabs.
  Auto,
  /// u_i = sum_{j != i} w_j G_ij (g_j - g_i) + g_i int G(x_i, y) dy.
  Subtraction,
  /// u_i = sum_{j != i} w_j G_ij g_j + g_i A sigma r_i^alpha / alpha, the
  /// free-space singular part integrated over the volume-equivalent ball.
  SelfCell,
};

enum class OperatorStorage { Auto, Assembled, OnTheFly };

/// Discrete Green operator (Tg)(x_i) = sum_j M_ij g_j on a grid. Assembled
/// and on-the-fly storage compute each row with the same arithmetic, so
/// their results agree bit for bit.
class GreenOperator {
 public:
  GreenOperator(GridPtr grid, const GreenKernel& kernel,
                DiagonalTreatment diag = DiagonalTreatment::Auto,
                OperatorStorage storage = OperatorStorage::Auto)
      : grid_(std::move(grid)), kernel_(kernel) {
    if (!grid_) throw ParameterError("GreenOperator needs a grid");
    if (grid_->dim() != kernel_.params().n()) {
      throw ParameterError("grid dimension differs from n");
    }
    if (diag == DiagonalTreatment::Auto) {
      diag = grid_->kind() == Grid::Kind::Ball ? DiagonalTreatment::Subtraction
                                                : DiagonalTreatment::SelfCell;
    }
    if (diag == DiagonalTreatment::Subtraction && grid_->kind() != Grid::Kind::Ball) {
      throw ParameterError("singularity subtraction needs a ball grid");
    }
    diag_ = diag;
    const std::size_t N = grid_->size();
    if (storage == OperatorStorage::Auto) {
      storage = N <= 4096 ? OperatorStorage::Assembled : OperatorStorage::OnTheFly;
    }
    storage_ = storage;
    const Domain dom = grid_->domain();
    factor_.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      factor_[i] = dom.boundary_factor(grid_->points()[i]);
      if (dom.kind() == Domain::Kind::HalfSpace) factor_[i] *= 2.0;
      if (!(factor_[i] > 0.0)) throw DomainError("grid point on or outside the boundary");
    }
    diag_term_.resize(N);
    if (diag_ == DiagonalTreatment::Subtraction) {
      const std::size_t A = grid_->rays();
      const int n = grid_->dim();
      std::vector<double> shell_mass(grid_->shells());
      parallel_for(grid_->shells(), [&](std::size_t s) {
        Point x(n, 0.0);
        x[0] = grid_->radii()[s];
        shell_mass[s] = kernel_.ball_mass(x);
      });
      for (std::size_t i = 0; i < N; ++i) diag_term_[i] = shell_mass[i / A];
    } else {
      const double a = kernel_.params().alpha();
      const double area = sphere_area(grid_->dim());
      for (std::size_t i = 0; i < N; ++i) {
        diag_term_[i] =
            kernel_.constants().A * area * std::pow(grid_->cell_radius()[i], a) / a;
      }
    }
    if (storage_ == OperatorStorage::Assembled) {
      matrix_.assign(N * N, 0.0);
      parallel_for(N, [&](std::size_t i) { fill_row(i, &matrix_[i * N]); });
    }
  }

  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const GreenKernel& kernel() const { return kernel_; }
  DiagonalTreatment diagonal() const { return diag_; }
  OperatorStorage storage() const { return storage_; }

  std::vector<double> apply(const std::vector<double>& g) const {
    const std::size_t N = grid_->size();
    if (g.size() != N) throw ParameterError("operator input has the wrong length");
    std::vector<double> out(N);
    parallel_for(N, [&](std::size_t i) {
      std::vector<double> scratch;
      const double* row;
      if (storage_ == OperatorStorage::Assembled) {
        row = &matrix_[i * N];
      } else {
        scratch.resize(N);
        fill_row(i, scratch.data());
        row = scratch.data();
      }
      CompensatedSum acc;
      for (std::size_t j = 0; j < N; ++j) acc += row[j] * g[j];
      out[i] = acc.value();
    });
    return out;
  }

  Field apply(const Field& g) const {
    if (g.grid.get() != grid_.get() && g.grid->size() != grid_->size()) {
      throw ParameterError("field lives on a different grid");
    }
    return Field(grid_, apply(g.values));
  }

 private:
  double entry(std::size_t i, std::size_t j) const {
    const auto& p = grid_->points();
    const double s = detail::dist2(p[i], p[j]);
    const double t = factor_[i] * factor_[j];
    return grid_->weights()[j] * kernel_.green_st(s, t);
  }

  void fill_row(std::size_t i, double* row) const {
    const std::size_t N = grid_->size();
    CompensatedSum off;
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i) continue;
      row[j] = entry(i, j);
      off += row[j];
    }
    row[i] = diag_ == DiagonalTreatment::Subtraction ? diag_term_[i] - off.value()
                                                      : diag_term_[i];
  }

  GridPtr grid_;
  GreenKernel kernel_;
  DiagonalTreatment diag_ = DiagonalTreatment::SelfCell;
  OperatorStorage storage_ = OperatorStorage::Assembled;
  std::vector<double> factor_;
  std::vector<double> diag_term_;
  std::vector<double> matrix_;
};

/// u(x_i) = int G(x_i, y) g(y) dy on the field's grid.
inline Field dirichlet_solve(const Field& g, const GreenKernel& kernel,
                             DiagonalTreatment diag = DiagonalTreatment::Auto) {
  GreenOperator op(g.grid, kernel, diag);
  return op.apply(g);
}

struct SolveOptions {
  enum class Init { Flat, Bump, Custom };

  int max_iter = 500;
  double tol = 1e-10;
  double damping = 1.0;
  Init init = Init::Flat;
  std::optional<Field> custom;
  /// On non-convergence, retry with shell averaging (radial ansatz) on
  /// ball grids and accept if the full-grid residual meets tol.
  bool radial_fallback = true;

  void validate() const {
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
    if (!(tol > 0.0)) throw ParameterError("tol must be positive");
    if (!(damping > 0.0 && damping <= 1.0)) throw ParameterError("damping must lie in (0, 1]");
    if (init == Init::Custom && !custom) throw ParameterError("custom init needs a field");
  }
};

struct PowerSolveResult {
  Field u;
  double lambda_star = 0.0;
  int iterations = 0;
  /// ||u - T(u^p)||_inf / ||u||_inf, recomputed from the returned u.
  double residual = 0.0;
  std::vector<double> residual_history;
  bool used_radial_fallback = false;
};

namespace detail {

inline std::vector<double> shell_average(const Grid& grid, const std::vector<double>& v) {
  const std::size_t A = grid.rays();
  std::vector<double> out(v.size());
  for (std::size_t s = 0; s < grid.shells(); ++s) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < A; ++j) acc += v[s * A + j];
    const double m = acc.value() / A;
    for (std::size_t j = 0; j < A; ++j) out[s * A + j] = m;
  }
  return out;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// ||u - T(u^p)||_inf / ||u||_inf.
inline double power_residual(const GreenOperator& op, const std::vector<double>& u, double p) {
  std::vector<double> up(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) up[i] = std::pow(std::max(u[i], 0.0), p);
  const std::vector<double> tu = op.apply(up);
  double r = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) r = std::max(r, std::abs(u[i] - tu[i]));
  const double nu = detail::max_abs(u);
  if (!(nu > 0.0)) throw DegenerateError("zero solution");
  return r / nu;
}

/// Normalized power iteration for u = T(u^p). Because the nonlinearity is
/// homogeneous, v = N(T(v^p)) with N scaling to unit maximum has the same
/// fixed points up to scale, and u = lambda*^{-1/(p-1)} v with
/// lambda* = max T(v^p) solves the unscaled problem.
inline PowerSolveResult nonlinear_power_solve(const GreenOperator& op, double p,
                                              const SolveOptions& opts) {
  opts.validate();
  if (!(p > 1.0)) throw ParameterError("power p must exceed 1");
  const Grid& grid = op.grid();
  const std::size_t N = grid.size();
  std::vector<double> v(N);
  switch (opts.init) {
    case SolveOptions::Init::Flat:
      std::fill(v.begin(), v.end(), 1.0);
      break;
    case SolveOptions::Init::Bump: {
      const Domain d = grid.domain();
      for (std::size_t i = 0; i < N; ++i) {
        v[i] = std::max(0.0, d.boundary_factor(grid.points()[i]));
      }
      break;
    }
    case SolveOptions::Init::Custom:
      if (opts.custom->values.size() != N) {
        throw ParameterError("custom init field has the wrong length");
      }
      v = opts.custom->values;
      break;
  }

  auto run = [&](std::vector<double> v0, bool radial) {
    PowerSolveResult res;
    double m = 0.0;
    for (double x : v0) m = std::max(m, x);
    if (!(m > 0.0)) throw DegenerateError("initial iterate has no positive values");
    for (auto& x : v0) x /= m;
    std::vector<double> vp(N);
    double lambda = 0.0;
    for (int it = 1; it <= opts.max_iter; ++it) {
      for (std::size_t i = 0; i < N; ++i) vp[i] = std::pow(std::max(v0[i], 0.0), p);
      std::vector<double> y = op.apply(vp);
      if (radial) y = detail::shell_average(grid, y);
      lambda = *std::max_element(y.begin(), y.end());
      if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DegenerateError("iterate collapsed to zero");
      }
      double r = 0.0;
      for (std::size_t i = 0; i < N; ++i) r = std::max(r, std::abs(v0[i] - y[i] / lambda));
      res.residual_history.push_back(r);
      res.iterations = it;
      if (r <= 0.5 * opts.tol) break;
      double mx = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        v0[i] = (1.0 - opts.damping) * v0[i] + opts.damping * y[i] / lambda;
        mx = std::max(mx, v0[i]);
      }
      if (!(mx > 0.0)) throw DegenerateError("iterate collapsed to zero");
      for (auto& x : v0) x /= mx;
    }
    // Rescale the final normalized iterate; lambda* is recomputed from it.
    for (std::size_t i = 0; i < N; ++i) vp[i] = std::pow(std::max(v0[i], 0.0), p);
    const std::vector<double> y = op.apply(vp);
    lambda = *std::max_element(y.begin(), y.end());
    const double scale = std::pow(lambda, -1.0 / (p - 1.0));
    for (auto& x : v0) x *= scale;
    res.lambda_star = lambda;
    res.residual = power_residual(op, v0, p);
    res.u = Field(op.grid_ptr(), std::move(v0));
    return res;
  };

  PowerSolveResult res = run(v, false);
  if (res.residual <= opts.tol) return res;
  if (opts.radial_fallback && grid.kind() == Grid::Kind::Ball) {
    PowerSolveResult rad = run(detail::shell_average(grid, v), true);
    rad.used_radial_fallback = true;
    if (rad.residual <= opts.tol) return rad;
  }
  std::ostringstream os;
  os << "power iteration did not converge in " << opts.max_iter
     << " iterations (residual " << res.residual << ", tol " << opts.tol << ")";
  throw NonConvergence(os.str(), res.residual_history);
}

struct SweepReport {
  int axis = 1;
  std::vector<double> lambda_values;
  std::vector<double> min_w;
  std::vector<int> violation_counts;
  std::vector<int> sigma_sizes;
  /// Largest gap between the monotone and smooth interpolants at the
  /// reflected points (ball grids; 0 on slabs).
  std::vector<double> interp_error;
  std::vector<bool> skipped;
  double lambda0_estimate = 0.0;
  double tolerance = 0.0;
};

namespace detail {

struct SweepStep {
  double min_w = 0.0;
  int violations = 0;
  int sigma = 0;
  double interp_error = 0.0;
};

}  // namespace detail

/// Uniform lambda grid -1 + k/count, k = 1..count (ball sweeps).
inline std::vector<double> default_lambda_grid(int count = 64) {
  std::vector<double> g;
  for (int k = 1; k <= count; ++k) g.push_back(-1.0 + static_cast<double>(k) / count);
  return g;
}

/// For each lambda: min over grid points x in Sigma_lambda of
/// u(x^lambda) - u(x), with u(x^lambda) interpolated. A violation is a
/// point with w < -rel_tol ||u||_inf. lambda0 is the end of the leading run
/// of violation-free lambdas, refined by three bisection steps toward the
/// first failing value.
inline SweepReport moving_plane_sweep(const Field& u, int axis,
                                      const std::vector<double>& lambdas,
                                      const ModelParams& params, const Domain& domain,
                                      double rel_tol = 1e-6) {
  if (!u.grid) throw ParameterError("sweep needs a field on a grid");
  const Grid& grid = *u.grid;
  params.check_point(grid.points().front(), "grid point");
  if (axis < 1 || axis > params.n()) throw ParameterError("sweep axis out of range");
  if (lambdas.empty()) throw ParameterError("empty lambda grid");
  const double unorm = u.max_abs();
  const double thresh = -rel_tol * unorm;

  Evaluator mono, smooth;
  if (grid.kind() == Grid::Kind::Ball) {
    mono = BallInterpolant(u, BallInterpolant::Mode::Monotone).evaluator();
    smooth = BallInterpolant(u, BallInterpolant::Mode::Smooth).evaluator();
  } else {
    mono = SlabInterpolant(u).evaluator();
  }

  auto step = [&](double lam) {
    detail::SweepStep st;
    st.min_w = std::numeric_limits<double>::infinity();
    const Hyperplane plane{axis, lam};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point& x = grid.points()[i];
      if (!in_sigma(x, plane, domain)) continue;
      const Point xr = reflect(x, plane);
      const double ur = mono(xr);
      const double w = ur - u.values[i];
      ++st.sigma;
      st.min_w = std::min(st.min_w, w);
      if (w < thresh) ++st.violations;
      if (smooth) st.interp_error = std::max(st.interp_error, std::abs(smooth(xr) - ur));
    }
    return st;
  };

  SweepReport rep;
  rep.axis = axis;
  rep.tolerance = rel_tol;
  const std::size_t L = lambdas.size();
  std::vector<detail::SweepStep> steps(L);
  parallel_for(L, [&](std::size_t k) { steps[k] = step(lambdas[k]); });
  for (std::size_t k = 0; k < L; ++k) {
    rep.lambda_values.push_back(lambdas[k]);
    const bool empty = steps[k].sigma == 0;
    rep.skipped.push_back(empty);
    rep.min_w.push_back(empty ? 0.0 : steps[k].min_w);
    rep.violation_counts.push_back(steps[k].violations);
    rep.sigma_sizes.push_back(steps[k].sigma);
    rep.interp_error.push_back(steps[k].interp_error);
  }
  std::size_t good = 0;
  while (good < L && rep.violation_counts[good] == 0) ++good;
  if (good == 0) {
    rep.lambda0_estimate = lambdas.front();
  } else if (good == L) {
    rep.lambda0_estimate = lambdas.back();
  } else {
    double lo = lambdas[good - 1], hi = lambdas[good];
    for (int b = 0; b < 3; ++b) {
      const double mid = 0.5 * (lo + hi);
      if (step(mid).violations == 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    rep.lambda0_estimate = lo;
  }
  return rep;
}

struct CascadeReport {
  int m_min = 0;
  double p = 0.0;
  /// e_0 .. e_m, e_0 = alpha/2 - 1, e_{k+1} = p e_k + alpha.
  std::vector<double> exponents;
  /// p^m (alpha/2 - 1) + alpha (p^m - 1) / (p - 1).
  double closed_form_e_m = 0.0;
  double tau_p = 0.0;
  double f_p = 0.0;
  double fprime_p = 0.0;
};

inline int cascade_m_min(double alpha) {
  return static_cast<int>(std::floor((3.0 - alpha * alpha) / alpha)) + 1;
}

/// Exponent bootstrap of the half-space Liouville argument. The first lower
/// bound decays like x_n^{alpha/2 - 1}; each pass multiplies the exponent by
/// p and adds alpha, and after m_min passes the weight in the row integral
/// stops being integrable.
inline CascadeReport liouville_cascade(const ModelParams& params,
                                       std::optional<int> m_override = std::nullopt) {
  const double a = params.alpha(), p = params.p();
  CascadeReport r;
  r.p = p;
  r.m_min = cascade_m_min(a);
  const int m = m_override ? *m_override : r.m_min;
  if (m < 0) throw ParameterError("cascade depth must be >= 0");
  r.exponents.push_back(0.5 * a - 1.0);
  for (int k = 1; k <= m; ++k) r.exponents.push_back(p * r.exponents.back() + a);
  const double pm = std::pow(p, m);
  r.closed_form_e_m = pm * (0.5 * a - 1.0) + a * (pm - 1.0) / (p - 1.0);
  const double em = r.exponents.back();
  r.tau_p = em * p + 0.5 * a;
  r.f_p = r.tau_p * (p - 1.0);
  r.fprime_p = pm * ((m + 2) * (0.5 * a - 1.0) * p + (m + 1) * (0.5 * a + 1.0)) - 0.5 * a;
  return r;
}

struct ScanPoint {
  int n = 0;
  double alpha = 0.0;
  double p = 0.0;
  CascadeReport report;
  double recursion_gap = 0.0;
  bool ok = true;
};

struct ScanReport {
  std::vector<ScanPoint> points;
  int violations = 0;
  double min_tau = std::numeric_limits<double>::infinity();
  double min_fprime = std::numeric_limits<double>::infinity();
  double max_recursion_gap = 0.0;
};

/// Cascade over n in ns, alpha in alphas and p_count points
/// p_k = 1 + k (p_c - 1) / p_count, k = 1..p_count, p_c = (n+alpha)/(n-alpha).
inline ScanReport liouville_scan(const std::vector<int>& ns, const std::vector<double>& alphas,
                                 int p_count) {
  if (p_count < 1) throw ParameterError("p_count must be >= 1");
  ScanReport s;
  for (int n : ns) {
    for (double a : alphas) {
      const ModelParams base(n, a);
      const double pc = base.critical_exponent();
      for (int k = 1; k <= p_count; ++k) {
        const double p = k == p_count ? pc : 1.0 + k * (pc - 1.0) / p_count;
        ScanPoint pt;
        pt.n = n;
        pt.alpha = a;
        pt.p = p;
        pt.report = liouville_cascade(base.with_p(p));
        const double em = pt.report.exponents.back();
        pt.recursion_gap = std::abs(em - pt.report.closed_form_e_m) / std::max(1.0, std::abs(em));
        const int expected = cascade_m_min(a);
        pt.ok = pt.report.m_min == expected && pt.report.tau_p >= 0.0 &&
                pt.report.fprime_p > 0.0 && pt.recursion_gap <= 1e-12 &&
                std::abs(pt.report.exponents.front() - (0.5 * a - 1.0)) == 0.0;
        if (!pt.ok) ++s.violations;
        s.min_tau = std::min(s.min_tau, pt.report.tau_p);
        s.min_fprime = std::min(s.min_fprime, pt.report.fprime_p);
        s.max_recursion_gap = std::max(s.max_recursion_gap, pt.recursion_gap);
        s.points.push_back(std::move(pt));
      }
    }
  }
  return s;
}

/// Samples of a profile u(y_n) on (0, Y] with quadrature weights.
struct Profile {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> values;
};

/// Gauss-Legendre panels on (0, Y]: [0, first_break] and then geometric
/// panels with ratio 2, plus any extra breakpoints.
inline Profile make_profile_grid(double Y, std::vector<double> breaks, int per_panel = 16) {
  if (!(Y > 0.0)) throw ParameterError("profile extent must be positive");
  breaks.push_back(Y);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> edges{0.0};
  double lo = 0.0;
  for (double b : breaks) {
    if (!(b > lo) || b > Y) continue;
    double start = lo;
    if (start == 0.0) {
      edges.push_back(b);
      lo = b;
      continue;
    }
    while (start * 2.0 < b) {
      start *= 2.0;
      edges.push_back(start);
    }
    edges.push_back(b);
    lo = b;
  }
  const GaussRule gl = gauss_legendre(per_panel);
  Profile pr;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      pr.nodes.push_back(a + 0.5 * (b - a) * (1.0 + gl.nodes[k]));
      pr.weights.push_back(0.5 * (b - a) * gl.weights[k]);
    }
  }
  pr.values.assign(pr.nodes.size(), 0.0);
  return pr;
}

struct LowerBound {
  double value = 0.0;
  /// x_n coincided with a profile node, which was left out of the sum.
  bool node_excluded = false;
};

/// C0 x_n^{alpha/2} int u^p(y) y^{alpha/2} / |x_n - y| dy over the profile.
inline LowerBound halfspace_profile_lowerbound(const Profile& profile, double p,
                                               const ModelParams& params, double xn,
                                               double C0 = 1.0) {
  if (!(xn > 0.0)) throw ParameterError("x_n must be positive");
  if (profile.nodes.size() != profile.values.size() ||
      profile.nodes.size() != profile.weights.size()) {
    throw ParameterError("profile arrays differ in length");
  }
  const double h = 0.5 * params.alpha();
  LowerBound lb;
  CompensatedSum acc;
  for (std::size_t k = 0; k < profile.nodes.size(); ++k) {
    const double u = profile.values[k];
    if (u < 0.0) throw ParameterError("profile must be non-negative");
    if (u == 0.0) continue;
    const double y = profile.nodes[k];
    if (y == xn) {
      lb.node_excluded = true;
      continue;
    }
    acc += profile.weights[k] * std::pow(u, p) * std::pow(y, h) / std::abs(xn - y);
  }
  lb.value = C0 * std::pow(xn, h) * acc.value();
  return lb;
}

}  // namespace fracgreen
