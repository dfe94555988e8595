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
#include <sstream>
#include <utility>
#include <vector>

#include "fracgreen/errors.hpp"
#include "fracgreen/params.hpp"
#include "fracgreen/quadrature.hpp"

namespace fracgreen {

/// Normalization of G = A s^{-(n-alpha)/2} (1 - B I_1(s, t)).
struct GreenConstants {
  double A = 0.0;
  double B = 0.0;
};

/// B = 1 / int_0^inf b^{-alpha/2} / (1 + b) db = sin(pi alpha / 2) / pi, and
/// A is the Riesz kernel coefficient, so that G matches the free-space
/// fundamental solution as x -> y.
inline GreenConstants green_constants(const ModelParams& params) {
  const double n = params.n(), a = params.alpha();
  GreenConstants c;
  c.B = std::sin(0.5 * std::numbers::pi * a) / std::numbers::pi;
  c.A = std::tgamma(0.5 * (n - a)) /
        (std::pow(2.0, a) * std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(0.5 * a));
  return c;
}

struct KernelCoords {
  double s = 0.0;
  double t = 0.0;
};

/// (s, t) for a pair of points. t is the product of the two boundary
/// factors: 1 - |x|^2 on the ball, 2 x_n on the half-space (so t = 4 x_n y_n)
/// and the rescaled factor on B_R(P_R).
inline KernelCoords coords(const Domain& domain, PointView x, PointView y) {
  if (x.size() != y.size()) throw ParameterError("points have different dimensions");
  const double fx = domain.boundary_factor(x), fy = domain.boundary_factor(y);
  if (fx < -1e-14 || fy < -1e-14) {
    throw DomainError("point outside the closed " + domain.name());
  }
  KernelCoords c;
  c.s = detail::dist2(x, y);
  const double scale = domain.kind() == Domain::Kind::HalfSpace ? 2.0 : 1.0;
  c.t = std::max(fx, 0.0) * std::max(fy, 0.0) * scale * scale;
  if (domain.kind() == Domain::Kind::BallRadiusR) c.s /= domain.radius() * domain.radius();
  return c;
}

struct KernelPartials {
  double dH_ds = 0.0;
  double dH_dt = 0.0;
};

/// Evaluates the Green's functions through H(s, t) = s^{-(n-alpha)/2}
/// (1 - B I_1(s, t)).
///
/// I_1 is computed after the substitution b = (s/t) u, which leaves a
/// Jacobi weight u^{-alpha/2} (1-u)^{(n-2)/2} times 1/(1 + (s/t) u). That
/// factor is harmless for s <= t. For s > t the bracket is small and is
/// computed directly as B times the complement integral, split into the
/// tail beyond s/t and a body whose (n-2)/2 power is made polynomial by
/// u = 1 - sigma^2. Every piece has an analytic integrand on [0, 1] once
/// its Jacobi weight is removed.
class GreenKernel {
 public:
  explicit GreenKernel(const ModelParams& params, int nodes = 48)
      : GreenKernel(params, green_constants(params), nodes) {}

  GreenKernel(const ModelParams& params, GreenConstants constants, int nodes = 48)
      : params_(params), c_(constants), nodes_(nodes) {
    if (nodes < 2) throw ParameterError("kernel quadrature needs at least 2 nodes");
    const double a = params.alpha();
    k_ = 0.5 * (params.n() - 2);
    m_ = params.n() - 2;
    direct_ = JacobiRule(nodes, -0.5 * a, k_);
    tail_ = JacobiRule(nodes, 0.5 * a - 1.0, 0.0);
    body_ = JacobiRule(nodes, 0.0, -0.5 * a);
    body_factor_.resize(body_.size());
    for (std::size_t i = 0; i < body_.size(); ++i) {
      const double sg = body_.nodes()[i];
      body_factor_[i] = body_.weights()[i] * 2.0 * sg * std::pow(1.0 + sg, -0.5 * a);
    }
    deriv_beta_ = JacobiRule(nodes, -0.5 * a, k_ - 1.0).mass();
    expo_ = 0.5 * (params.n() - a);
  }

  const ModelParams& params() const { return params_; }
  const GreenConstants& constants() const { return c_; }
  int nodes() const { return nodes_; }

  /// I_1(s, t). Returns the limit 1/B at t = 0 and 0 at s = 0.
  double inner_integral(double s, double t) const {
    check_st(s, t);
    if (s == 0.0) return 0.0;
    if (t == 0.0) return 1.0 / c_.B;
    if (s <= t) return direct(s, t);
    return 1.0 / c_.B - complement(s, t);
  }

  /// True when inner_integral(s, t) returned a limit value instead of a
  /// quadrature result.
  static bool inner_integral_is_limit(double s, double t) { return s == 0.0 || t == 0.0; }

  /// 1 - B I_1(s, t), in [0, 1].
  double bracket(double s, double t) const {
    check_st(s, t);
    if (t == 0.0) return 0.0;
    if (s == 0.0) return 1.0;
    if (s <= t) return 1.0 - c_.B * direct(s, t);
    return c_.B * complement(s, t);
  }

  double H(double s, double t) const {
    if (!(s > 0.0)) throw SingularityError("H(s, t) is singular at s = 0");
    return std::pow(s, -expo_) * bracket(s, t);
  }

  /// A H(s, t).
  double green_st(double s, double t) const { return c_.A * H(s, t); }

  double green(const Domain& domain, PointView x, PointView y) const {
    params_.check_point(x, "x");
    params_.check_point(y, "y");
    if (!domain.contains_open(x) || !domain.contains_open(y)) return 0.0;
    const KernelCoords c = coords(domain, x, y);
    if (c.s == 0.0) throw SingularityError("Green's function evaluated at x = y");
    double g = green_st(c.s, c.t);
    if (domain.kind() == Domain::Kind::BallRadiusR) {
      g *= std::pow(domain.radius(), params_.alpha() - params_.n());
    }
    return g;
  }

  /// Green's function of B_R(P_R), P_R = (0, ..., 0, R).
  double green_scaled(double R, PointView x, PointView y) const {
    const Domain d = Domain::ball_radius(R);
    params_.check_point(x, "x");
    params_.check_point(y, "y");
    if (!d.contains_closed(x) || !d.contains_closed(y)) {
      throw DomainError("point outside B_R(P_R)");
    }
    return green(d, x, y);
  }

  /// Partial derivatives of H. Both follow from differentiating I_1 under
  /// the integral sign:
  ///   dI_1/ds =  k t (s+t)^{-n/2} Q,  dI_1/dt = -k s (s+t)^{-n/2} Q,
  ///   Q = (s/t)^{1-alpha/2} s^{k-1} Beta(1-alpha/2, k),  k = (n-2)/2.
  KernelPartials partials(double s, double t) const {
    if (!(s > 0.0) || !(t > 0.0)) {
      throw SingularityError("kernel partials need s > 0 and t > 0");
    }
    const double a = params_.alpha(), n = params_.n();
    const double q = std::pow(s / t, 1.0 - 0.5 * a) * std::pow(s, k_ - 1.0) * deriv_beta_;
    const double spt = std::pow(s + t, -0.5 * n);
    const double dI_ds = k_ * t * spt * q;
    const double dI_dt = -k_ * s * spt * q;
    const double se = std::pow(s, -expo_);
    KernelPartials p;
    p.dH_ds = -expo_ * se / s * bracket(s, t) - c_.B * se * dI_ds;
    p.dH_dt = -c_.B * se * dI_dt;
    return p;
  }

  /// G_inf s^{n/2} / t^{alpha/2} = A (1 - B I_1) (s/t)^{alpha/2}.
  double asymptotic_ratio(double s, double t) const {
    if (!(s > 0.0) || !(t > 0.0)) {
      throw SingularityError("asymptotic ratio needs s > 0 and t > 0");
    }
    return c_.A * bracket(s, t) * std::pow(s / t, 0.5 * params_.alpha());
  }

  /// int_{B_1} G_1(x, y) dy, integrated in polar coordinates about x. The
  /// radial factor rho^{alpha-1} (l - rho)^{alpha/2} is absorbed by a Jacobi
  /// rule, the polar angle by a Gegenbauer rule.
  double ball_mass(PointView x, int radial_nodes = 40, int angular_nodes = 40) const {
    params_.check_point(x, "x");
    const double r2 = detail::norm2(x);
    if (!(r2 < 1.0)) return 0.0;
    const int n = params_.n();
    const double a = params_.alpha();
    const double r = std::sqrt(r2);
    const double fx = 1.0 - r2;
    const JacobiRule rho_rule(radial_nodes, a - 1.0, 0.5 * a);
    const GaussRule mu_rule = gauss_jacobi(angular_nodes, 0.5 * (n - 3), 0.5 * (n - 3));
    CompensatedSum total;
    for (std::size_t i = 0; i < mu_rule.nodes.size(); ++i) {
      const double mu = mu_rule.nodes[i];
      const double disc = std::sqrt(r2 * mu * mu + fx);
      // Roots of 1 - |x + rho w|^2 = 0 in rho: ell ahead, -ell2 behind.
      const double ell2 = r * mu + disc;
      const double ell = fx / ell2;
      CompensatedSum inner;
      for (std::size_t j = 0; j < rho_rule.size(); ++j) {
        const double v = rho_rule.nodes()[j];
        const double rho = ell * v;
        const double fy = (ell - rho) * (rho + ell2);
        const double s = rho * rho;
        const double t = fx * fy;
        const double br = bracket(s, t);
        inner += rho_rule.weights()[j] * br / std::pow(1.0 - v, 0.5 * a);
      }
      total += mu_rule.weights[i] * std::pow(ell, a) * inner.value();
    }
    return c_.A * sphere_area(n - 1) * total.value();
  }

 private:
  static void check_st(double s, double t) {
    if (!(s >= 0.0) || !(t >= 0.0) || !std::isfinite(s) || !std::isfinite(t)) {
      std::ostringstream os;
      os << "kernel coordinates must be finite and non-negative (s=" << s << ", t=" << t
         << ")";
      throw ParameterError(os.str());
    }
  }

  // I_1 for 0 < s <= t.
  double direct(double s, double t) const {
    const double r = s / t;
    const std::vector<double>& u = direct_.nodes();
    const std::vector<double>& w = direct_.weights();
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] / (1.0 + r * u[i]);
    return std::pow(s / (s + t), k_) * std::pow(r, 1.0 - 0.5 * params_.alpha()) * acc.value();
  }

  // 1/B - I_1 for s > t.
  double complement(double s, double t) const {
    const double lam = t / s;
    const double a = params_.alpha();
    const double sa = std::sqrt(1.0 + lam);
    CompensatedSum tail;
    {
      const std::vector<double>& v = tail_.nodes();
      const std::vector<double>& w = tail_.weights();
      for (std::size_t i = 0; i < v.size(); ++i) tail += w[i] / (1.0 + lam * v[i]);
    }
    CompensatedSum body;
    {
      const std::vector<double>& v = body_.nodes();
      const double am = std::pow(sa, -m_);
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double sg = v[i];
        // (a^m - sigma^m) / (a - sigma) by Horner.
        double poly = 1.0, apow = 1.0;
        for (int j = 1; j < m_; ++j) {
          apow *= sa;
          poly = poly * sg + apow;
        }
        body += body_factor_[i] * am * poly / (sa + sg);
      }
    }
    return std::pow(lam, 0.5 * a) * (tail.value() + body.value());
  }

  ModelParams params_;
  GreenConstants c_;
  int nodes_;
  double k_ = 0.0;
  int m_ = 1;
  double expo_ = 0.0;
  double deriv_beta_ = 0.0;
  JacobiRule direct_, tail_, body_;
  std::vector<double> body_factor_;
};

}  // namespace fracgreen
