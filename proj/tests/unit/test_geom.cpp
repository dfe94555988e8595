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


#include <cmath>

#include <gtest/gtest.h>

#include "fracgreen/geom.hpp"
#include "fracgreen/rng.hpp"

namespace fracgreen {
namespace {

TEST(Reflect, ExampleAndInvolution) {
  const Hyperplane pl{1, 0.0};
  const Point r = reflect(Point{0.5, 0, 0}, pl);
  EXPECT_EQ(r, (Point{-0.5, 0, 0}));
  Rng rng = Rng::stream(3, 0);
  for (int i = 0; i < 100; ++i) {
    const Hyperplane q{1 + i % 3, rng.uniform(-1, 1)};
    const Point x = rng.in_ball(3, 2.0);
    const Point back = reflect(reflect(x, q), q);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(back[k], x[k], 1e-15);
  }
}

TEST(Reflect, DistanceIdentities) {
  Rng rng = Rng::stream(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const Hyperplane pl{1, rng.uniform(-1, 0)};
    const Point x = rng.in_ball(4), y = rng.in_ball(4);
    const Point xl = reflect(x, pl), yl = reflect(y, pl);
    EXPECT_NEAR(detail::dist2(xl, y), detail::dist2(x, yl), 1e-14);
    EXPECT_NEAR(detail::dist2(xl, yl), detail::dist2(x, y), 1e-14);
  }
}

TEST(Reflect, BoundaryFactorOrderingInSigma) {
  // For x, y in Sigma_lambda: t(x^l,y^l) > max(t(x,y^l), t(x^l,y)) >= min(...) > t(x,y).
  for (const bool ball : {true, false}) {
    const Domain dom = ball ? Domain::unit_ball() : Domain::half_space();
    int checked = 0;
    for (int i = 0; checked < 1000; ++i) {
      Rng rng = Rng::stream(9, static_cast<std::uint64_t>(i));
      const int n = 3;
      Hyperplane pl;
      Point x(n), y(n);
      if (ball) {
        pl = {1, rng.uniform(-1, 0)};
        x = rng.in_ball(n);
        y = rng.in_ball(n);
      } else {
        pl = {n, rng.uniform(0.1, 3.0)};
        for (int k = 0; k < n; ++k) {
          x[k] = rng.uniform(-2, 2);
          y[k] = rng.uniform(-2, 2);
        }
        x[n - 1] = rng.uniform(0, pl.level);
        y[n - 1] = rng.uniform(0, pl.level);
      }
      if (!in_sigma(x, pl, dom) || !in_sigma(y, pl, dom)) continue;
      ++checked;
      auto t = [&](const Point& a, const Point& b) { return coords(dom, a, b).t; };
      const Point xl = reflect(x, pl), yl = reflect(y, pl);
      const double tll = t(xl, yl), t1 = t(x, yl), t2 = t(xl, y), t0 = t(x, y);
      EXPECT_GT(tll, std::max(t1, t2));
      EXPECT_GT(std::min(t1, t2), t0);
    }
  }
}

TEST(InSigma, Examples) {
  const Domain ball = Domain::unit_ball();
  EXPECT_TRUE(in_sigma(Point{-0.7, 0, 0}, Hyperplane{1, -0.5}, ball));
  EXPECT_FALSE(in_sigma(Point{0, 0, 0}, Hyperplane{1, -0.5}, ball));
  EXPECT_FALSE(in_sigma(Point{-1.0, 0, 0}, Hyperplane{1, -0.5}, ball));
  EXPECT_FALSE(in_sigma(Point{-0.5, 0, 0}, Hyperplane{1, -0.5}, ball));
  EXPECT_TRUE(in_sigma(Point{0, 0, 0.5}, Hyperplane{3, 1.0}, Domain::half_space()));
  EXPECT_FALSE(in_sigma(Point{0, 0, 1.5}, Hyperplane{3, 1.0}, Domain::half_space()));
}

TEST(Kelvin, PointExamples) {
  const InversionCenter c(Point{0, 0, 0});
  const Point k = kelvin_point(Point{0, 0, 2}, c);
  EXPECT_NEAR(k[2], 0.5, 1e-16);
  EXPECT_THROW(kelvin_point(Point{0, 0, 0}, c), SingularityError);
  EXPECT_THROW(InversionCenter(Point{0, 0, 0.1}), ParameterError);
}

TEST(Kelvin, InvolutionAndHalfSpacePreserved) {
  Rng rng = Rng::stream(11, 0);
  for (int i = 0; i < 1000; ++i) {
    const InversionCenter c(Point{rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0});
    Point x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(1e-3, 3)};
    const Point k = kelvin_point(x, c);
    EXPECT_GT(k[2], 0.0);
    const Point back = kelvin_point(k, c);
    for (int d = 0; d < 3; ++d) EXPECT_NEAR(back[d], x[d], 1e-10 * (1 + std::abs(x[d])));
  }
}

TEST(Kelvin, ValueExamples) {
  const ModelParams P(3, 1.0);
  const InversionCenter c(Point{0.2, -0.1, 0.0});
  const Point& z = c.point();
  auto u = [&](const Point& y) { return std::pow(detail::dist2(y, z), 0.5 * (1.0 - 3.0)); };
  Rng rng = Rng::stream(13, 0);
  for (int i = 0; i < 100; ++i) {
    const Point x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.1, 2)};
    EXPECT_NEAR(kelvin_value(u(kelvin_point(x, c)), x, c, P), 1.0, 1e-12);
    // Applying the transform twice recovers u.
    auto v = [&](const Point& y) {
      const double w = std::sin(y[0]) + y[2] * y[2];
      return w;
    };
    auto vbar = [&](const Point& y) { return kelvin_value(v(kelvin_point(y, c)), y, c, P); };
    EXPECT_NEAR(kelvin_value(vbar(kelvin_point(x, c)), x, c, P), v(x), 1e-10 * (1 + std::abs(v(x))));
  }
  // On the unit sphere about z0 the prefactor is 1.
  const Point s{z[0] + 0.6, z[1], 0.8};
  EXPECT_NEAR(kelvin_value(3.5, s, c, P), 3.5, 1e-14);
  EXPECT_THROW(kelvin_value(1.0, z, c, P), SingularityError);
}

TEST(Kelvin, KernelResidual) {
  const GreenKernel K(ModelParams(3, 1.0));
  const InversionCenter c(Point{0, 0, 0});
  // Unit-sphere points: both sides coincide.
  EXPECT_NEAR(kelvin_kernel_residual(Point{0.6, 0, 0.8}, Point{0, 0.28, 0.96}, c, K), 0.0, 1e-14);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng = Rng::stream(21, static_cast<std::uint64_t>(i));
    const Point x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.01, 2)};
    const Point y{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.01, 2)};
    const double r = kelvin_kernel_residual(x, y, c, K);
    EXPECT_DOUBLE_EQ(r, kelvin_kernel_residual(y, x, c, K));
    worst = std::max(worst, r);
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Kelvin, Beta) {
  const ModelParams crit(3, 1.0, 2.0);
  EXPECT_NEAR(kelvin_beta(crit), 0.0, 1e-15);
  EXPECT_NEAR(kelvin_beta(ModelParams(3, 1.0, 1.5)), 2.0 * 0.5, 1e-15);
  for (double p : {1.1, 1.5, 1.9}) EXPECT_GT(kelvin_beta(ModelParams(3, 1.0, p)), 0.0);
}

}  // namespace
}  // namespace fracgreen
