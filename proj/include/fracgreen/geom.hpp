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
#include <string>

#include "fracgreen/errors.hpp"
#include "fracgreen/kernel.hpp"
#include "fracgreen/params.hpp"

namespace fracgreen {

/// The plane {x_axis = level}; `axis` is 1-based.
struct Hyperplane {
  int axis = 1;
  double level = 0.0;
};

inline void check_axis(const Hyperplane& plane, std::size_t dim) {
  if (plane.axis < 1 || plane.axis > static_cast<int>(dim)) {
    throw ParameterError("hyperplane axis " + std::to_string(plane.axis) +
                         " out of range for dimension " + std::to_string(dim));
  }
}

inline Point reflect(PointView x, const Hyperplane& plane) {
  check_axis(plane, x.size());
  Point r(x.begin(), x.end());
  const std::size_t i = plane.axis - 1;
  r[i] = 2.0 * plane.level - x[i];
  return r;
}

/// Sigma_lambda: interior points strictly below the plane (x_axis < level).
/// For half-space x_n sweeps this is the strip 0 < x_n < lambda.
inline bool in_sigma(PointView x, const Hyperplane& plane, const Domain& domain) {
  check_axis(plane, x.size());
  return domain.contains_open(x) && x[plane.axis - 1] < plane.level;
}

/// Center of inversion on the boundary of the half-space.
class InversionCenter {
 public:
  explicit InversionCenter(Point z0) : z0_(std::move(z0)) {
    if (z0_.empty() || z0_.back() != 0.0) {
      throw ParameterError("inversion center must lie on {x_n = 0}");
    }
  }
  const Point& point() const { return z0_; }

 private:
  Point z0_;
};

/// x^ = (x - z0) / |x - z0|^2 + z0.
inline Point kelvin_point(PointView x, const InversionCenter& c) {
  const Point& z = c.point();
  if (x.size() != z.size()) throw ParameterError("dimension mismatch in kelvin_point");
  const double d2 = detail::dist2(x, z);
  if (d2 == 0.0) throw SingularityError("Kelvin transform at its center");
  Point r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = (x[i] - z[i]) / d2 + z[i];
  return r;
}

/// |x - z0|^{alpha - n} u(x^), given u(x^).
inline double kelvin_value(double u_at_xhat, PointView x, const InversionCenter& c,
                           const ModelParams& params) {
  params.check_point(x);
  const double d2 = detail::dist2(x, c.point());
  if (d2 == 0.0) throw SingularityError("Kelvin transform at its center");
  return std::pow(d2, 0.5 * (params.alpha() - params.n())) * u_at_xhat;
}

/// Relative residual of G(x^, y^) = (|x - z0| |y - z0|)^{n - alpha} G(x, y)
/// on the half-space.
inline double kelvin_kernel_residual(PointView x, PointView y, const InversionCenter& c,
                                     const GreenKernel& kernel) {
  const ModelParams& params = kernel.params();
  params.check_point(x, "x");
  params.check_point(y, "y");
  const Domain h = Domain::half_space();
  if (!h.contains_open(x) || !h.contains_open(y)) {
    throw DomainError("kelvin_kernel_residual needs interior half-space points");
  }
  const Point xh = kelvin_point(x, c), yh = kelvin_point(y, c);
  const double lhs = kernel.green(h, xh, yh);
  const double dx = std::sqrt(detail::dist2(x, c.point()));
  const double dy = std::sqrt(detail::dist2(y, c.point()));
  const double rhs = std::pow(dx * dy, params.n() - params.alpha()) * kernel.green(h, x, y);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

/// beta = (n - alpha)(tau - p), the power of |y - z0|^{-1} that the Kelvin
/// transform attaches to the nonlinearity u^p.
inline double kelvin_beta(const ModelParams& params) {
  return (params.n() - params.alpha()) * (params.critical_exponent() - params.p());
}

}  // namespace fracgreen
