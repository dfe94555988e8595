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

#include "fracgreen/quadrature.hpp"
#include "fracgreen/rng.hpp"

namespace fracgreen {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(JacobiRule, LegendreWeightHasUnitMass) {
  const JacobiRule r = jacobi_rule(8, 0.0, 0.0);
  EXPECT_NEAR(r.apply([](double) { return 1.0; }), 1.0, 1e-14);
}

TEST(JacobiRule, InverseSqrtAtZero) {
  EXPECT_NEAR(jacobi_rule(8, -0.5, 0.0).mass(), 2.0, 1e-13);
}

TEST(JacobiRule, BetaHalfThreeHalves) {
  EXPECT_NEAR(jacobi_rule(16, -0.5, 0.5).mass(), kPi / 2, 1e-13);
}

TEST(JacobiRule, MassMatchesBetaFunction) {
  for (double a : {-0.9, -0.5, 0.0, 0.3, 1.7}) {
    for (double b : {-0.75, -0.25, 0.5, 2.0}) {
      const JacobiRule r = jacobi_rule(24, a, b);
      const double beta = std::exp(std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
      EXPECT_NEAR(r.mass() / beta, 1.0, 1e-12) << a << " " << b;
    }
  }
}

TEST(JacobiRule, ExactForPolynomialsUpToDegree2mMinus1) {
  // int_0^1 u^{a+j} (1-u)^b du = Beta(a+j+1, b+1).
  const int m = 6;
  const double a = -0.3, b = 0.7;
  const JacobiRule r = jacobi_rule(m, a, b);
  for (int j = 0; j <= 2 * m - 1; ++j) {
    const double exact =
        std::exp(std::lgamma(a + j + 1) + std::lgamma(b + 1) - std::lgamma(a + b + j + 2));
    EXPECT_NEAR(r.apply([j](double u) { return std::pow(u, j); }) / exact, 1.0, 1e-12) << j;
  }
}

TEST(JacobiRule, NodesInsideAndWeightsPositive) {
  const JacobiRule r = jacobi_rule(64, -0.5, -0.5);
  ASSERT_EQ(r.nodes().size(), r.weights().size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    EXPECT_GT(r.nodes()[k], 0.0);
    EXPECT_LT(r.nodes()[k], 1.0);
    EXPECT_GT(r.weights()[k], 0.0);
  }
}

TEST(JacobiRule, NonIntegrableExponentRejected) {
  EXPECT_THROW(jacobi_rule(8, -1.0, 0.0), ParameterError);
  EXPECT_THROW(jacobi_rule(8, 0.0, -1.5), ParameterError);
}

TEST(AdaptiveQuad, Constant) {
  EXPECT_NEAR(adaptive_quad([](double) { return 1.0; }, 0.0, 1.0, 1e-12), 1.0, 1e-14);
}

TEST(AdaptiveQuad, EndpointSingularity) {
  const double v = adaptive_quad([](double u) { return 1.0 / (std::sqrt(u) * (1.0 + u)); }, 0.0,
                                 1.0, 1e-10, 20000);
  EXPECT_NEAR(v, kPi / 2, 1e-8);
}

TEST(AdaptiveQuad, InfiniteRange) {
  const double inf = std::numeric_limits<double>::infinity();
  const double v = adaptive_quad([](double b) { return 1.0 / (std::sqrt(b) * (1.0 + b)); }, 0.0,
                                 inf, 1e-10, 20000);
  EXPECT_NEAR(v, kPi, 1e-8);
}

TEST(AdaptiveQuad, ReportedErrorWithinTolerance) {
  const QuadResult r = adaptive_quad_ex([](double x) { return std::exp(x); }, 0.0, 2.0, 1e-12);
  EXPECT_LE(r.error, 1e-12 * std::abs(r.value) + 1e-300);
  EXPECT_NEAR(r.value, std::exp(2.0) - 1.0, 1e-12);
}

TEST(AdaptiveQuad, BudgetExhaustionThrows) {
  auto wild = [](double x) { return std::sin(1.0 / x) / x; };
  EXPECT_THROW(adaptive_quad(wild, 1e-6, 1.0, 1e-14, 20), QuadratureError);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  EXPECT_EQ(s.value(), 1.0);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::stream(42, 7), b = Rng::stream(42, 7), c = Rng::stream(42, 8);
  const double x = a.uniform();
  EXPECT_EQ(x, b.uniform());
  EXPECT_NE(x, c.uniform());
}

TEST(Rng, InBallStaysInside) {
  Rng r = Rng::stream(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const Point p = r.in_ball(4, 0.5);
    EXPECT_LT(detail::norm2(p), 0.25);
  }
}

}  // namespace
}  // namespace fracgreen
