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

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "fracgreen/errors.hpp"
#include "fracgreen/grid.hpp"
#include "fracgreen/parallel.hpp"
#include "fracgreen/params.hpp"
#include "fracgreen/quadrature.hpp"
#include "fracgreen/sphere.hpp"

namespace fracgreen {

/// C_{n,alpha} = 2^alpha Gamma((n+alpha)/2) / (pi^{n/2} |Gamma(-alpha/2)|),
/// the normalization for which the operator has Fourier symbol |xi|^alpha.
inline double fractional_constant(const ModelParams& params) {
  const double n = params.n(), a = params.alpha();
  return std::pow(2.0, a) * std::tgamma(0.5 * (n + a)) /
         (std::pow(std::numbers::pi, 0.5 * n) * std::abs(std::tgamma(-0.5 * a)));
}

/// Tg(x_i) = sum_{j != i} w_j |x_i - x_j|^{alpha-n} g_j plus the self cell,
/// integrated exactly over the volume-equivalent ball:
/// g_i sigma_{n-1} r_i^alpha / alpha.
inline Field riesz_apply(const Field& g, const ModelParams& params) {
  const Grid& grid = *g.grid;
  if (grid.dim() != params.n()) throw ParameterError("grid dimension differs from n");
  const std::size_t N = grid.size();
  const double half_expo = 0.5 * (params.alpha() - params.n());
  const double area = sphere_area(params.n());
  const double a = params.alpha();
  std::vector<double> out(N, 0.0);
  parallel_for(N, [&](std::size_t i) {
    const Point& xi = grid.points()[i];
    CompensatedSum acc;
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i || g.values[j] == 0.0) continue;
      acc += grid.weights()[j] * std::pow(detail::dist2(xi, grid.points()[j]), half_expo) *
             g.values[j];
    }
    acc += g.values[i] * area * std::pow(grid.cell_radius()[i], a) / a;
    out[i] = acc.value();
  });
  return Field(g.grid, std::move(out));
}

struct PVOptions {
  /// Below this radius the second difference is replaced by its Taylor term.
  double inner_radius = 1e-3;
  /// Quadrature runs on [inner_radius, outer_radius].
  double outer_radius = 10.0;
  /// If set, u vanishes outside the ball of this radius about the origin;
  /// the tail beyond outer_radius is then exact.
  std::optional<double> support_radius;
  /// Growth exponent gamma with |u(z)| = O(|z|^gamma); must be < alpha.
  /// Used when support_radius is unset.
  double growth = 0.0;
  int polar_nodes = 16;
  int azimuth_nodes = 32;
  int panel_nodes = 16;
  double panel_ratio = 2.0;
};

struct PVResult {
  double value = 0.0;
  /// Estimated magnitude of the neglected tail (0 when it is exact).
  double truncation_error = 0.0;
};

/// Hemisphere of a product rule (the second difference is even in omega),
/// with doubled weights.
inline AngularRule pv_directions(int n, int polar, int azimuth) {
  if (polar % 2) ++polar;
  if (azimuth % 2) ++azimuth;
  AngularRule full = product_rule(n, polar, azimuth);
  AngularRule half;
  half.dim = n;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (full.directions[i].back() > 0.0) {
      half.directions.push_back(full.directions[i]);
      half.weights.push_back(2.0 * full.weights[i]);
    }
  }
  return half;
}

/// Finite-difference Laplacian with step h.
template <class U>
double fd_laplacian(U&& u, PointView x, double h) {
  Point y(x.begin(), x.end());
  const double u0 = u(x);
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    y[k] = x[k] + h;
    const double up = u(PointView(y));
    y[k] = x[k] - h;
    const double um = u(PointView(y));
    y[k] = x[k];
    acc += up + um - 2.0 * u0;
  }
  return acc / (h * h);
}

/// C_{n,alpha} PV int (u(x) - u(z)) / |x - z|^{n+alpha} dz, written as
/// (C/2) int_{S} int_0^inf (2u(x) - u(x + rho w) - u(x - rho w)) rho^{-1-alpha}.
/// Geometric Gauss-Legendre panels cover [inner, outer]; the ball of radius
/// inner uses -Delta u(x) sigma eps^{2-alpha} / (2n (2-alpha)).
template <class U>
PVResult frac_laplacian_pv(U&& u, PointView x, const ModelParams& params,
                           const PVOptions& opt, const AngularRule* dirs_in = nullptr) {
  params.check_point(x);
  const int n = params.n();
  const double a = params.alpha();
  if (!(opt.inner_radius > 0.0) || !(opt.outer_radius > opt.inner_radius)) {
    throw ParameterError("PV radii must satisfy 0 < inner < outer");
  }
  double outer = opt.outer_radius;
  const bool compact = opt.support_radius.has_value();
  if (compact) {
    outer = std::max(outer, std::sqrt(detail::norm2(x)) + *opt.support_radius);
  } else if (!(opt.growth < a)) {
    std::ostringstream os;
    os << "tail not integrable: growth " << opt.growth << " >= alpha " << a;
    throw TruncationError(os.str());
  }
  AngularRule local;
  if (!dirs_in) local = pv_directions(n, opt.polar_nodes, opt.azimuth_nodes);
  const AngularRule& dirs = dirs_in ? *dirs_in : local;
  const double area = sphere_area(n);
  const double ux = u(x);

  // Radial nodes over geometric panels.
  const GaussRule gl = gauss_legendre(opt.panel_nodes);
  std::vector<double> rho, wrho;
  double lo = opt.inner_radius;
  while (lo < outer) {
    const double hi = std::min(outer, lo * opt.panel_ratio);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double r = lo + 0.5 * (hi - lo) * (1.0 + gl.nodes[k]);
      rho.push_back(r);
      wrho.push_back(0.5 * (hi - lo) * gl.weights[k] * std::pow(r, -1.0 - a));
    }
    lo = hi;
  }

  Point y(x.begin(), x.end());
  CompensatedSum total;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const Point& w = dirs.directions[d];
    CompensatedSum line;
    for (std::size_t k = 0; k < rho.size(); ++k) {
      for (int i = 0; i < n; ++i) y[i] = x[i] + rho[k] * w[i];
      const double up = u(PointView(y));
      for (int i = 0; i < n; ++i) y[i] = x[i] - rho[k] * w[i];
      const double um = u(PointView(y));
      line += wrho[k] * (2.0 * ux - up - um);
    }
    total += dirs.weights[d] * line.value();
  }
  // The hemisphere carries doubled weights, so the 1/2 of the symmetric form
  // is applied once here.
  double value = 0.5 * total.value();

  const double eps = opt.inner_radius;
  const double lap = fd_laplacian(u, x, eps);
  value += -lap * area * std::pow(eps, 2.0 - a) / (2.0 * n * (2.0 - a));

  // Beyond the outer radius u is replaced by its mean over the outer sphere,
  // which is exact for compact support and for functions constant far out.
  double err = 0.0, far_mean = 0.0;
  if (!compact) {
    CompensatedSum shell, mean;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const Point& w = dirs.directions[d];
      for (int i = 0; i < n; ++i) y[i] = x[i] + outer * w[i];
      const double up = u(PointView(y));
      for (int i = 0; i < n; ++i) y[i] = x[i] - outer * w[i];
      const double um = u(PointView(y));
      shell += dirs.weights[d] * 0.5 * (std::abs(up) + std::abs(um));
      mean += dirs.weights[d] * 0.5 * (up + um);
    }
    far_mean = mean.value() / area;
    err = shell.value() * std::pow(outer, -a) / (a - opt.growth);
  }
  value += (ux - far_mean) * area / (a * std::pow(outer, a));
  const double c = fractional_constant(params);
  return {c * value, c * err};
}

/// ||Tg||_{L^p} / ||g||_{L^{np/(n+alpha p)}} with grid quadrature.
inline double hls_ratio(const Field& g, double p, const ModelParams& params) {
  const double n = params.n(), a = params.alpha();
  const double pmin = n / (n - a);
  if (!(p > pmin) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "HLS exponent p must exceed n/(n-alpha) = " << pmin << " (got " << p << ")";
    throw ParameterError(os.str());
  }
  const double q = n * p / (n + a * p);
  const Field tg = riesz_apply(g, params);
  const Grid& grid = *g.grid;
  CompensatedSum np, nq;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    np += grid.weights()[i] * std::pow(std::abs(tg.values[i]), p);
    nq += grid.weights()[i] * std::pow(std::abs(g.values[i]), q);
  }
  if (!(nq.value() > 0.0)) throw DegenerateError("HLS ratio of the zero field");
  return std::pow(np.value(), 1.0 / p) / std::pow(nq.value(), 1.0 / q);
}

}  // namespace fracgreen
