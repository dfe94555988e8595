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
#include <numbers>

#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "fracgreen/kernel.hpp"
#include "fracgreen/rng.hpp"

namespace fracgreen {
namespace {

constexpr double kPi = std::numbers::pi;

// Regression anchors, n = 3, alpha = 1. Both agree with the defining-integral
// oracle in oracles.hpp to better than 1e-14.
constexpr double kInnerAnchor = 0.920151184510611;   // I_1(1, 1)
constexpr double kGreenAnchor = 0.1708439798630253;  // G((0.3,0,0), (-0.2,0.1,0))

TEST(Constants, BIsReciprocalOfDefiningIntegral) {
  for (double a : {0.3, 0.5, 1.0, 1.5, 1.9}) {
    const GreenConstants c = green_constants(ModelParams(3, a));
    EXPECT_NEAR(c.B * oracle::b_integral(a), 1.0, 1e-10) << a;
  }
  EXPECT_NEAR(green_constants(ModelParams(3, 1.0)).B, 1.0 / kPi, 1e-15);
  EXPECT_NEAR(1.0 / oracle::b_integral(1.0), 0.3183099, 1e-7);
}

TEST(Constants, ARieszCoefficient) {
  EXPECT_NEAR(green_constants(ModelParams(3, 1.0)).A, 1.0 / (2 * kPi * kPi), 1e-15);
  EXPECT_NEAR(green_constants(ModelParams(3, 1.0)).A, 0.0506606, 1e-7);
}

TEST(Constants, SingularityMatchesFreeSpace) {
  // G s^{(n-alpha)/2} -> A as s -> 0 with t fixed.
  for (double a : {0.5, 1.0, 1.5}) {
    const ModelParams P(4, a);
    const GreenKernel K(P);
    const double t = 0.5;
    EXPECT_NEAR(K.green_st(1e-10, t) * std::pow(1e-10, 0.5 * (4 - a)) / K.constants().A, 1.0,
                1e-3);
  }
}

TEST(Coords, Examples) {
  const KernelCoords o = coords(Domain::unit_ball(), Point{0, 0, 0}, Point{0, 0, 0});
  EXPECT_EQ(o.s, 0.0);
  EXPECT_EQ(o.t, 1.0);
  const KernelCoords h = coords(Domain::half_space(), Point{0, 0, 1}, Point{0, 0, 2});
  EXPECT_EQ(h.s, 1.0);
  EXPECT_EQ(h.t, 8.0);
  const KernelCoords b = coords(Domain::unit_ball(), Point{1, 0, 0}, Point{0.2, 0.1, 0});
  EXPECT_EQ(b.t, 0.0);
}

TEST(Coords, SymmetricAndOutsideRejected) {
  const Point x{0.1, 0.2, 0.3}, y{-0.4, 0.0, 0.5};
  const KernelCoords a = coords(Domain::unit_ball(), x, y), b = coords(Domain::unit_ball(), y, x);
  EXPECT_EQ(a.s, b.s);
  EXPECT_EQ(a.t, b.t);
  EXPECT_THROW(coords(Domain::unit_ball(), Point{1.2, 0, 0}, y), DomainError);
  EXPECT_THROW(coords(Domain::half_space(), Point{0, 0, -0.1}, y), DomainError);
}

TEST(InnerIntegral, Limits) {
  const GreenKernel K(ModelParams(3, 1.0));
  EXPECT_EQ(K.inner_integral(0.0, 1.0), 0.0);
  EXPECT_NEAR(K.inner_integral(1e-14, 1.0), 0.0, 1e-6);
  EXPECT_EQ(K.inner_integral(1.0, 0.0), kPi);
  EXPECT_TRUE(GreenKernel::inner_integral_is_limit(1.0, 0.0));
  EXPECT_FALSE(GreenKernel::inner_integral_is_limit(1.0, 1.0));
  // Near-boundary value against the defining integral at t = 1e-8.
  const double ref = oracle::inner_integral(3, 1.0, 1.0, 1e-8);
  EXPECT_NEAR(K.inner_integral(1.0, 1e-8), ref, 1e-10 * ref);
  EXPECT_NEAR(ref, kPi, 1e-3);
}

TEST(InnerIntegral, Anchor) {
  const GreenKernel K(ModelParams(3, 1.0));
  EXPECT_NEAR(oracle::inner_integral(3, 1.0, 1.0, 1.0), kInnerAnchor, 1e-13);
  EXPECT_NEAR(K.inner_integral(1.0, 1.0), kInnerAnchor, 1e-13);
}

TEST(InnerIntegral, MatchesOracleOnLogGrid) {
  for (int n : {3, 4, 5}) {
    for (double a : {0.5, 1.0, 1.5}) {
      const GreenKernel K(ModelParams(n, a));
      double worst = 0.0;
      for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
          const double s = std::pow(10.0, -3.0 + 6.0 * i / 19);
          const double t = std::pow(10.0, -3.0 + 6.0 * j / 19);
          worst = std::max(worst,
                           oracle::rel(K.inner_integral(s, t), oracle::inner_integral(n, a, s, t)));
        }
      }
      EXPECT_LE(worst, 1e-10) << "n=" << n << " alpha=" << a;
    }
  }
}

TEST(Green, SingularAndExterior) {
  const GreenKernel K(ModelParams(3, 1.0));
  const Point x{0.1, 0.2, 0.3};
  EXPECT_THROW(K.green(Domain::unit_ball(), x, x), SingularityError);
  EXPECT_EQ(K.green(Domain::unit_ball(), x, Point{1.0, 0, 0}), 0.0);
  EXPECT_EQ(K.green(Domain::unit_ball(), x, Point{0.9, 0.9, 0}), 0.0);
  EXPECT_EQ(K.green(Domain::half_space(), x, Point{0, 0, -1.0}), 0.0);
}

TEST(Green, Anchor) {
  const GreenKernel K(ModelParams(3, 1.0));
  const Point x{0.3, 0, 0}, y{-0.2, 0.1, 0};
  EXPECT_NEAR(oracle::green_ball(3, 1.0, x, y), kGreenAnchor, 1e-14);
  EXPECT_NEAR(K.green(Domain::unit_ball(), x, y), kGreenAnchor, 1e-14);
}

TEST(Green, SymmetricPositiveAndBounded) {
  for (int n : {3, 5}) {
    const ModelParams P(n, 1.2);
    const GreenKernel K(P);
    const double e = 0.5 * (n - 1.2);
    for (const Domain& d : {Domain::unit_ball(), Domain::half_space()}) {
      for (int i = 0; i < 10000; ++i) {
        Rng r = Rng::stream(17, static_cast<std::uint64_t>(i));
        Point x, y;
        if (d.kind() == Domain::Kind::UnitBall) {
          x = r.in_ball(n);
          y = r.in_ball(n);
        } else {
          x = r.in_ball(n, 3.0);
          y = r.in_ball(n, 3.0);
          x[n - 1] = std::abs(x[n - 1]);
          y[n - 1] = std::abs(y[n - 1]);
        }
        const double g = K.green(d, x, y);
        ASSERT_EQ(g, K.green(d, y, x));
        ASSERT_GT(g, 0.0);
        ASSERT_LT(g, K.constants().A * std::pow(detail::dist2(x, y), -e));
      }
    }
  }
}

TEST(Bracket, RangeAndLimits) {
  const GreenKernel K(ModelParams(3, 1.0));
  for (double s : {1e-6, 1e-2, 1.0, 1e2, 1e6}) {
    for (double t : {1e-6, 1e-2, 1.0, 1e2, 1e6}) {
      const double b = K.bracket(s, t);
      EXPECT_GT(b, 0.0);
      EXPECT_LT(b, 1.0);
    }
  }
  EXPECT_GT(K.bracket(1e-6, 1.0), 0.99);
  EXPECT_LT(K.bracket(1.0, 1e-6), 0.01);
}

TEST(Partials, MatchFiniteDifferencesAtUnitPoint) {
  const GreenKernel K(ModelParams(3, 1.0));
  const KernelPartials p = K.partials(1.0, 1.0);
  const double fs = oracle::fd5([&](double s) { return K.H(s, 1.0); }, 1.0, 1e-3);
  const double ft = oracle::fd5([&](double t) { return K.H(1.0, t); }, 1.0, 1e-3);
  EXPECT_LE(oracle::rel(p.dH_ds, fs), 1e-4);
  EXPECT_LE(oracle::rel(p.dH_dt, ft), 1e-4);
  EXPECT_LT(p.dH_ds, 0.0);
  EXPECT_GT(p.dH_dt, 0.0);
}

TEST(Partials, SignsOverGrid) {
  for (int n : {3, 4, 6}) {
    for (double a : {0.2, 1.0, 1.8}) {
      const GreenKernel K(ModelParams(n, a));
      for (int i = 0; i < 13; ++i) {
        for (int j = 0; j < 13; ++j) {
          const KernelPartials p =
              K.partials(std::pow(10.0, -3.0 + 0.5 * i), std::pow(10.0, -3.0 + 0.5 * j));
          ASSERT_LT(p.dH_ds, 0.0);
          ASSERT_GT(p.dH_dt, 0.0);
        }
      }
    }
  }
}

TEST(GreenScaled, UnitRadiusIsTranslatedBall) {
  const GreenKernel K(ModelParams(3, 1.0));
  const Point x{0.1, 0.2, 1.3}, y{-0.3, 0.0, 0.6};
  const Point xs{0.1, 0.2, 0.3}, ys{-0.3, 0.0, -0.4};
  EXPECT_NEAR(K.green_scaled(1.0, x, y), K.green(Domain::unit_ball(), xs, ys), 1e-15);
}

TEST(GreenScaled, ScalingIdentity) {
  const GreenKernel K(ModelParams(3, 1.0));
  for (double R : {2.0, 10.0, 300.0}) {
    const Point a{0.1, -0.2, 0.3}, b{0.4, 0.1, -0.5};
    Point x(3), y(3);
    for (int k = 0; k < 3; ++k) {
      x[k] = R * a[k] + (k == 2 ? R : 0.0);
      y[k] = R * b[k] + (k == 2 ? R : 0.0);
    }
    EXPECT_NEAR(K.green_scaled(R, x, y) * std::pow(R, 2.0) / K.green(Domain::unit_ball(), a, b),
                1.0, 1e-12);
  }
  EXPECT_THROW(K.green_scaled(10.0, Point{0, 0, 25.0}, Point{0, 0, 1}), DomainError);
}

TEST(GreenScaled, ConvergesToHalfSpace) {
  const GreenKernel K(ModelParams(3, 1.0));
  const Point x{0, 0, 1}, y{0, 0, 2};
  const double ginf = K.green(Domain::half_space(), x, y);
  double prev = std::numeric_limits<double>::infinity();
  for (double R : {10.0, 100.0, 1000.0}) {
    const double gap = std::abs(K.green_scaled(R, x, y) - ginf) / ginf;
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LE(prev, 1e-2);
}

TEST(AsymptoticRatio, BandAndTNormalization) {
  const GreenKernel K(ModelParams(3, 1.0));
  double lo = 1e300, hi = 0.0;
  for (double s : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double q = K.asymptotic_ratio(s, 1.0);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  EXPECT_LE(hi / lo, 2.0);
  const double r1 = K.asymptotic_ratio(1e6, 1.0);
  EXPECT_NEAR(K.asymptotic_ratio(1e6, 2.0) / r1, 1.0, 0.1);
  EXPECT_NEAR(K.asymptotic_ratio(1e6, 4.0) / r1, 1.0, 0.1);
  // Outside the asymptotic regime the ratio leaves the band: it behaves like
  // A (s/t)^{alpha/2} and tends to 0.
  EXPECT_LT(K.asymptotic_ratio(1e-8, 1.0), 1e-3 * r1);
}

TEST(BallMass, MatchesTorsionFunction) {
  for (int n : {3, 4}) {
    for (double a : {0.5, 1.0, 1.5}) {
      const GreenKernel K(ModelParams(n, a));
      for (double r : {0.0, 0.3, 0.7, 0.95}) {
        Point x(n, 0.0);
        x[0] = r * 0.6;
        x[1] = r * 0.8;
        EXPECT_NEAR(K.ball_mass(x) / oracle::torsion(n, a, r * r), 1.0, 1e-8)
            << "n=" << n << " alpha=" << a << " r=" << r;
      }
    }
  }
}

TEST(ModelParams, Validation) {
  EXPECT_THROW(ModelParams(2, 1.0), ParameterError);
  EXPECT_THROW(ModelParams(3, 0.0), ParameterError);
  EXPECT_THROW(ModelParams(3, 2.0), ParameterError);
  EXPECT_THROW(ModelParams(3, 1.0, 1.0), ParameterError);
  EXPECT_THROW(ModelParams(3, 1.0, 2.01), ParameterError);
  EXPECT_NO_THROW(ModelParams(3, 1.0, 2.0));
  EXPECT_THROW(ModelParams(3, 1.0).p(), ParameterError);
}

}  // namespace
}  // namespace fracgreen
