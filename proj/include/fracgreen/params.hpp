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
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fracgreen/errors.hpp"

namespace fracgreen {

/// Dense coordinates of a point in R^n. The dimension is carried by
/// ModelParams and checked at call sites.
using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Dimension n, order alpha of (-Delta)^{alpha/2}, optional power p.
class ModelParams {
 public:
  ModelParams(int n, double alpha, std::optional<double> p = std::nullopt)
      : n_(n), alpha_(alpha), p_(p) {
    if (n < 3) {
      throw ParameterError("n must be >= 3 (got " + std::to_string(n) + ")");
    }
    if (!(alpha > 0.0 && alpha < 2.0)) {
      std::ostringstream os;
      os << "alpha must lie in (0, 2) (got " << alpha << ")";
      throw ParameterError(os.str());
    }
    if (p_) {
      const double crit = critical_exponent();
      if (!(*p_ > 1.0 && *p_ <= crit * (1.0 + 1e-14))) {
        std::ostringstream os;
        os << "p must lie in (1, " << crit << "] (got " << *p_ << ")";
        throw ParameterError(os.str());
      }
    }
  }

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  bool has_p() const { return p_.has_value(); }
  double p() const {
    if (!p_) throw ParameterError("exponent p is required but not set");
    return *p_;
  }
  std::optional<double> p_opt() const { return p_; }

  /// (n + alpha) / (n - alpha).
  double critical_exponent() const { return (n_ + alpha_) / (n_ - alpha_); }

  ModelParams with_p(double p) const { return ModelParams(n_, alpha_, p); }

  void check_point(PointView x, const char* what = "point") const {
    if (static_cast<int>(x.size()) != n_) {
      throw ParameterError(std::string(what) + " has dimension " +
                           std::to_string(x.size()) + ", expected " +
                           std::to_string(n_));
    }
  }

 private:
  int n_;
  double alpha_;
  std::optional<double> p_;
};

/// Unit ball B_1(0), upper half-space {x_n > 0}, or the ball B_R(P_R) with
/// P_R = (0, ..., 0, R) that exhausts the half-space as R grows.
class Domain {
 public:
  enum class Kind { UnitBall, HalfSpace, BallRadiusR };

  static Domain unit_ball() { return Domain(Kind::UnitBall, 1.0); }
  static Domain half_space() { return Domain(Kind::HalfSpace, 0.0); }
  static Domain ball_radius(double R) {
    if (!(R > 0.0) || !std::isfinite(R)) {
      throw ParameterError("ball radius R must be positive and finite");
    }
    return Domain(Kind::BallRadiusR, R);
  }

  Kind kind() const { return kind_; }
  double radius() const { return radius_; }

  std::string name() const {
    switch (kind_) {
      case Kind::UnitBall:
        return "ball";
      case Kind::HalfSpace:
        return "half-space";
      case Kind::BallRadiusR:
        return "ball-R";
    }
    return "?";
  }

  /// Signed "distance-like" boundary factor: positive inside, zero on the
  /// boundary, negative outside. Ball: 1 - |x|^2; half-space: x_n;
  /// B_R(P_R): 2 x_n / R - |x|^2 / R^2.
  double boundary_factor(PointView x) const {
    switch (kind_) {
      case Kind::UnitBall: {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return 1.0 - r2;
      }
      case Kind::HalfSpace:
        return x.back();
      case Kind::BallRadiusR: {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return (2.0 * x.back() * radius_ - r2) / (radius_ * radius_);
      }
    }
    return 0.0;
  }

  bool contains_open(PointView x) const { return boundary_factor(x) > 0.0; }
  bool contains_closed(PointView x) const {
    return boundary_factor(x) >= -1e-14;
  }

 private:
  Domain(Kind k, double r) : kind_(k), radius_(r) {}

  Kind kind_;
  double radius_;
};

namespace detail {

inline double dot(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dist2(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double norm2(PointView a) { return dot(a, a); }

}  // namespace detail

/// Surface area of the unit sphere S^{n-1}.
inline double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace fracgreen
