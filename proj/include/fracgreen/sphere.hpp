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

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "fracgreen/errors.hpp"
#include "fracgreen/params.hpp"
#include "fracgreen/quadrature.hpp"
#include "fracgreen/rng.hpp"

namespace fracgreen {

/// Directions on S^{n-1} with weights summing to the sphere's area.
struct AngularRule {
  int dim = 0;
  std::vector<Point> directions;
  std::vector<double> weights;

  std::size_t size() const { return directions.size(); }
};

enum class AngularKind { EqualArea, Icosahedral, Random, Product };

inline AngularKind parse_angular_kind(const std::string& s) {
  if (s == "equal-area") return AngularKind::EqualArea;
  if (s == "icosahedral") return AngularKind::Icosahedral;
  if (s == "random") return AngularKind::Random;
  if (s == "product") return AngularKind::Product;
  throw ParameterError("unknown angular rule '" + s +
                       "' (expected equal-area, icosahedral, random or product)");
}

/// Equal-area partition of S^2 into K latitude bands of equal height with
/// M = count / K staggered points per band; K is the divisor of count
/// closest to sqrt(count / 1.5).
inline AngularRule equal_area_rule(int count) {
  if (count < 2) throw ParameterError("angular count must be >= 2");
  const double target = std::sqrt(count / 1.5);
  int bands = 1;
  for (int d = 1; d <= count; ++d) {
    if (count % d == 0 && std::abs(d - target) < std::abs(bands - target)) bands = d;
  }
  const int per = count / bands;
  AngularRule r;
  r.dim = 3;
  const double w = 4.0 * std::numbers::pi / count;
  for (int k = 0; k < bands; ++k) {
    const double mu = -1.0 + (k + 0.5) * 2.0 / bands;
    const double sn = std::sqrt(1.0 - mu * mu);
    for (int m = 0; m < per; ++m) {
      const double ph = (m + 0.5 + 0.5 * (k % 2)) * 2.0 * std::numbers::pi / per;
      r.directions.push_back({sn * std::cos(ph), sn * std::sin(ph), mu});
      r.weights.push_back(w);
    }
  }
  return r;
}

namespace detail {

using Mat3 = std::array<double, 9>;

inline Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[3 * i + j] += a[3 * i + k] * b[3 * k + j];
  return c;
}

inline Mat3 rotation(std::array<double, 3> axis, double angle) {
  const double nrm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  for (auto& v : axis) v /= nrm;
  const double c = std::cos(angle), s = std::sin(angle), C = 1.0 - c;
  const double x = axis[0], y = axis[1], z = axis[2];
  return {c + x * x * C,     x * y * C - z * s, x * z * C + y * s,
          y * x * C + z * s, c + y * y * C,     y * z * C - x * s,
          z * x * C - y * s, z * y * C + x * s, c + z * z * C};
}

}  // namespace detail

/// Orbit of one point under the full icosahedral group (120 elements). The
/// group acts transitively on the nodes, so a function of |x| sampled on
/// this rule is exactly invariant under every symmetry of the rule,
/// including the three coordinate reflections. The generating point zeroes
/// the degree-6 invariant, making the rule exact through degree 9.
inline AngularRule icosahedral_rule() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const detail::Mat3 g1 = detail::rotation({0.0, 1.0, phi}, 2.0 * std::numbers::pi / 5.0);
  const detail::Mat3 g2 = detail::rotation({1.0, 1.0, 1.0}, 2.0 * std::numbers::pi / 3.0);
  std::vector<detail::Mat3> group{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
  std::vector<detail::Mat3> frontier = group;
  auto known = [&](const detail::Mat3& m) {
    for (const auto& g : group) {
      double d = 0.0;
      for (int i = 0; i < 9; ++i) d = std::max(d, std::abs(g[i] - m[i]));
      if (d < 1e-9) return true;
    }
    return false;
  };
  while (!frontier.empty()) {
    std::vector<detail::Mat3> next;
    for (const auto& a : frontier) {
      for (const auto* g : {&g1, &g2}) {
        const detail::Mat3 b = detail::mat_mul(*g, a);
        if (!known(b)) {
          group.push_back(b);
          next.push_back(b);
        }
      }
    }
    frontier = std::move(next);
  }
  const double p[3] = {-0.11145260605048898, 0.7825268122510968, -0.6125602865944635};
  const double pn = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  AngularRule r;
  r.dim = 3;
  for (double sign : {1.0, -1.0}) {
    for (const auto& g : group) {
      Point d(3);
      for (int i = 0; i < 3; ++i) {
        d[i] = sign * (g[3 * i] * p[0] + g[3 * i + 1] * p[1] + g[3 * i + 2] * p[2]) / pn;
      }
      r.directions.push_back(std::move(d));
    }
  }
  const double w = 4.0 * std::numbers::pi / r.directions.size();
  r.weights.assign(r.directions.size(), w);
  return r;
}

/// Seeded pseudo-random directions with equal weights (any dimension).
inline AngularRule random_rule(int n, int count, std::uint64_t seed) {
  if (count < 2) throw ParameterError("angular count must be >= 2");
  AngularRule r;
  r.dim = n;
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    r.directions.push_back(rng.direction(n));
  }
  r.weights.assign(count, sphere_area(n) / count);
  return r;
}

/// Product rule: Gegenbauer nodes in each polar angle, uniform azimuth.
/// Invariant under x -> -x when `azimuth` is even.
inline AngularRule product_rule(int n, int polar, int azimuth) {
  if (n < 2) throw ParameterError("product rule needs n >= 2");
  if (polar < 1 || azimuth < 2) throw ParameterError("product rule node counts too small");
  AngularRule r;
  r.dim = 2;
  for (int m = 0; m < azimuth; ++m) {
    const double ph = (m + 0.5) * 2.0 * std::numbers::pi / azimuth;
    r.directions.push_back({std::cos(ph), std::sin(ph)});
    r.weights.push_back(2.0 * std::numbers::pi / azimuth);
  }
  for (int d = 3; d <= n; ++d) {
    const GaussRule g = gauss_jacobi(polar, 0.5 * (d - 3), 0.5 * (d - 3));
    AngularRule next;
    next.dim = d;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double mu = g.nodes[i], sn = std::sqrt(1.0 - mu * mu);
      for (std::size_t j = 0; j < r.size(); ++j) {
        Point p(d);
        for (int k = 0; k < d - 1; ++k) p[k] = sn * r.directions[j][k];
        p[d - 1] = mu;
        next.directions.push_back(std::move(p));
        next.weights.push_back(g.weights[i] * r.weights[j]);
      }
    }
    r = std::move(next);
  }
  return r;
}

/// Rule used for ball grids. Equal-area partitions exist only on S^2; for
/// n > 3 it falls back to seeded random directions.
inline AngularRule make_angular_rule(AngularKind kind, int n, int count, std::uint64_t seed) {
  switch (kind) {
    case AngularKind::EqualArea:
      if (n == 3) return equal_area_rule(count);
      return random_rule(n, count, seed);
    case AngularKind::Icosahedral:
      if (n != 3 || count != 120) {
        throw ParameterError("icosahedral rule requires n = 3 and 120 directions");
      }
      return icosahedral_rule();
    case AngularKind::Random:
      return random_rule(n, count, seed);
    case AngularKind::Product: {
      const int polar = std::max(1, static_cast<int>(std::lround(
                                        std::pow(count / 2.0, 1.0 / (n - 1)))));
      int az = std::max(2, count / static_cast<int>(std::pow(polar, n - 2)));
      if (az % 2) ++az;
      return product_rule(n, polar, az);
    }
  }
  throw ParameterError("unknown angular rule");
}

}  // namespace fracgreen
