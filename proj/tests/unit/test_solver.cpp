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
#include <memory>

#include <gtest/gtest.h>

#include "fracgreen/solver.hpp"
#include "fracgreen/sphere.hpp"

namespace fracgreen {
namespace {

// Potential at the origin of the bump exp(1 - 1/(1 - 4|x|^2)) on the unit
// ball, n = 3, alpha = 1, from the refined 32x192 grid.
constexpr double kBumpPotentialAnchor = 0.188225807561;

GridPtr ico_grid(int radial) {
  return std::make_shared<const Grid>(Grid::ball(3, radial, icosahedral_rule()));
}

GridPtr ea_grid(int radial, int angular) {
  return std::make_shared<const Grid>(Grid::ball(3, radial, equal_area_rule(angular)));
}

double bump(const Point& x) {
  const double q = 4.0 * detail::norm2(x);
  return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
}

TEST(Dirichlet, ZeroAndLinear) {
  const GreenKernel K(ModelParams(3, 1.0));
  auto g = ea_grid(6, 24);
  const Field z = dirichlet_solve(Field::sample(g, [](const Point&) { return 0.0; }), K);
  for (double v : z.values) EXPECT_EQ(v, 0.0);
  const Field f = Field::sample(g, [](const Point& x) { return 1.0 + x[0]; });
  Field f2 = f;
  for (double& v : f2.values) v *= -2.5;
  const Field a = dirichlet_solve(f, K), b = dirichlet_solve(f2, K);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(b.values[i], -2.5 * a.values[i], 1e-12);
}

TEST(Dirichlet, RadialDataGivesRadialSolution) {
  const GreenKernel K(ModelParams(3, 1.0));
  auto g = ico_grid(8);
  const Field u = dirichlet_solve(Field::sample(g, bump), K);
  const std::size_t A = g->rays();
  for (std::size_t s = 0; s < g->shells(); ++s) {
    for (std::size_t j = 1; j < A; ++j) {
      EXPECT_NEAR(u.values[s * A + j], u.values[s * A], 1e-10 * u.max_abs());
    }
  }
}

TEST(Dirichlet, StorageModesAgreeBitwise) {
  const GreenKernel K(ModelParams(3, 0.7));
  auto g = ea_grid(5, 24);
  const Field f = Field::sample(g, [](const Point& x) { return std::cos(x[0]) + x[1]; });
  const GreenOperator a(g, K, DiagonalTreatment::Auto, OperatorStorage::Assembled);
  const GreenOperator b(g, K, DiagonalTreatment::Auto, OperatorStorage::OnTheFly);
  EXPECT_EQ(a.apply(f).values, b.apply(f).values);
}

TEST(Dirichlet, TorsionFunction) {
  // G applied to 1 is kappa (1 - |x|^2)^{alpha/2}.
  for (double a : {0.6, 1.0, 1.4}) {
    const ModelParams P(3, a);
    const GreenKernel K(P);
    auto g = ea_grid(16, 96);
    const Field u = dirichlet_solve(Field::sample(g, [](const Point&) { return 1.0; }), K);
    const double kappa = std::tgamma(1.5) / (std::pow(2.0, a) * std::tgamma(1 + a / 2) *
                                              std::tgamma((3 + a) / 2));
    double worst = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double ex = kappa * std::pow(1 - detail::norm2(g->points()[i]), a / 2);
      worst = std::max(worst, std::abs(u.values[i] - ex) / kappa);
    }
    EXPECT_LE(worst, 0.02) << a;
  }
}

TEST(Dirichlet, BumpPotentialAnchor) {
  const GreenKernel K(ModelParams(3, 1.0));
  auto g = ea_grid(24, 96);
  const Field u = dirichlet_solve(Field::sample(g, bump), K);
  const BallInterpolant I(u, BallInterpolant::Mode::Smooth);
  EXPECT_NEAR(I(Point{0, 0, 0}) / kBumpPotentialAnchor, 1.0, 1e-4);
}

TEST(PowerSolve, ZeroInitIsDegenerate) {
  const GreenKernel K(ModelParams(3, 1.0, 1.8));
  GreenOperator op(ico_grid(6), K);
  SolveOptions o;
  o.init = SolveOptions::Init::Custom;
  o.custom = Field::sample(op.grid_ptr(), [](const Point&) { return 0.0; });
  EXPECT_THROW(nonlinear_power_solve(op, 1.8, o), DegenerateError);
}

TEST(PowerSolve, ConvergesRadialAndDecreasing) {
  const GreenKernel K(ModelParams(3, 1.0, 1.8));
  GreenOperator op(ico_grid(10), K);
  const PowerSolveResult r = nonlinear_power_solve(op, 1.8, SolveOptions{});
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_LE(power_residual(op, r.u.values, 1.8), 1e-10);
  EXPECT_FALSE(r.residual_history.empty());
  const std::size_t A = op.grid().rays();
  const double nu = r.u.max_abs();
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < op.grid().shells(); ++s) {
    double mn = 1e300, mx = -1e300;
    for (std::size_t j = 0; j < A; ++j) {
      mn = std::min(mn, r.u.values[s * A + j]);
      mx = std::max(mx, r.u.values[s * A + j]);
    }
    EXPECT_LE((mx - mn) / nu, 1e-3);
    EXPECT_LT(mx, prev);
    prev = mn;
  }
  // Homogeneity: lambda* relates the normalized iterate to u.
  EXPECT_NEAR(std::pow(r.lambda_star, -1.0 / 0.8), nu, 1e-8 * nu);
}

TEST(PowerSolve, ScalingCovariance) {
  const GreenKernel K(ModelParams(3, 1.0, 1.5));
  GreenOperator op(ico_grid(8), K);
  SolveOptions o;
  o.tol = 1e-11;
  const PowerSolveResult r = nonlinear_power_solve(op, 1.5, o);
  for (double c : {0.3, 4.0}) {
    SolveOptions o2 = o;
    o2.init = SolveOptions::Init::Custom;
    Field init = r.u;
    for (double& v : init.values) v *= c;
    o2.custom = init;
    const PowerSolveResult r2 = nonlinear_power_solve(op, 1.5, o2);
    double d = 0.0;
    for (std::size_t i = 0; i < init.values.size(); ++i) {
      d = std::max(d, std::abs(r2.u.values[i] - r.u.values[i]));
    }
    EXPECT_LE(d / r.u.max_abs(), 10 * o.tol);
  }
}

TEST(PowerSolve, IterationBudgetRaisesWithHistory) {
  const GreenKernel K(ModelParams(3, 1.0, 1.8));
  GreenOperator op(ico_grid(6), K);
  SolveOptions o;
  o.max_iter = 2;
  o.radial_fallback = false;
  try {
    (void)nonlinear_power_solve(op, 1.8, o);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.residual_history.size(), 2u);
  }
}

TEST(PowerSolve, OptionValidation) {
  SolveOptions o;
  o.tol = 0.0;
  EXPECT_THROW(o.validate(), ParameterError);
  o = {};
  o.max_iter = 0;
  EXPECT_THROW(o.validate(), ParameterError);
  o = {};
  o.damping = 1.5;
  EXPECT_THROW(o.validate(), ParameterError);
}

class SweepTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const GreenKernel K(ModelParams(3, 1.0, 1.8));
    GreenOperator op(ico_grid(12), K);
    solution_ = new Field(nonlinear_power_solve(op, 1.8, SolveOptions{}).u);
  }
  static void TearDownTestSuite() { delete solution_; }
  static Field* solution_;
};
Field* SweepTest::solution_ = nullptr;

TEST_F(SweepTest, RadialSolutionPassesOnEveryAxis) {
  const ModelParams P(3, 1.0, 1.8);
  const double nu = solution_->max_abs();
  for (int axis = 1; axis <= 3; ++axis) {
    const SweepReport r =
        moving_plane_sweep(*solution_, axis, default_lambda_grid(64), P, Domain::unit_ball());
    ASSERT_EQ(r.lambda_values.size(), 64u);
    ASSERT_EQ(r.min_w.size(), 64u);
    for (std::size_t k = 0; k < 64; ++k) {
      if (!r.skipped[k]) EXPECT_GE(r.min_w[k], -1e-6 * nu);
      EXPECT_EQ(r.violation_counts[k], 0);
    }
    EXPECT_LE(std::abs(r.lambda0_estimate), 1.0 / 64 + 1e-12);
    // Thin-slab start.
    EXPECT_GE(r.min_w.front(), -1e-6 * nu);
  }
}

TEST_F(SweepTest, CounterexampleIsDetected) {
  const ModelParams P(3, 1.0);
  // 2 - x_1 decreases in x_1, so w = u(x^lambda) - u(x) = 2 (x_1 - lambda) < 0 on Sigma_lambda.
  const Field u =
      Field::sample(solution_->grid, [](const Point& x) { return 2.0 - x[0]; });
  const SweepReport r = moving_plane_sweep(u, 1, default_lambda_grid(64), P, Domain::unit_ball());
  for (std::size_t k = 0; k + 1 < r.lambda_values.size(); ++k) {
    if (!r.skipped[k]) EXPECT_LT(r.min_w[k], 0.0);
  }
  EXPECT_LT(r.lambda0_estimate, -0.9);
  // The increasing field passes, as w = 2 (lambda - x_1) > 0 there.
  const Field v = Field::sample(solution_->grid, [](const Point& x) { return x[0] + 2.0; });
  const SweepReport q = moving_plane_sweep(v, 1, default_lambda_grid(64), P, Domain::unit_ball());
  for (std::size_t k = 0; k + 1 < q.lambda_values.size(); ++k) {
    if (!q.skipped[k]) EXPECT_GE(q.min_w[k], -1e-12);
  }
}

TEST(Sweep, SlabGridWorks) {
  const ModelParams P(3, 1.0);
  auto g = std::make_shared<const Grid>(Grid::slab({-1, -1, 0}, {1, 1, 2}, {8, 8, 8}));
  // Decreasing in x_3 away from the plane x_3 = 0: reflection about x_3 = lambda
  // maps Sigma up, so w = u(x^l) - u(x) < 0.
  const Field u = Field::sample(g, [](const Point& x) { return std::exp(-x[2]); });
  const SweepReport r = moving_plane_sweep(u, 3, {0.5, 1.0}, P, Domain::half_space());
  EXPECT_LT(r.min_w[0], 0.0);
  EXPECT_EQ(r.interp_error[0], 0.0);
}

TEST(Cascade, Examples) {
  EXPECT_EQ(cascade_m_min(1.0), 3);
  const CascadeReport r = liouville_cascade(ModelParams(3, 1.0, 2.0));
  EXPECT_EQ(r.m_min, 3);
  ASSERT_EQ(r.exponents.size(), 4u);
  EXPECT_NEAR(r.exponents.back(), 3.0, 1e-14);
  EXPECT_NEAR(r.tau_p, 6.5, 1e-14);
  EXPECT_NEAR(r.f_p, 6.5, 1e-14);
  for (double a : {0.2, 0.9, 1.7}) {
    const double p = 1.0 + 0.5 * (ModelParams(4, a).critical_exponent() - 1.0);
    const CascadeReport q = liouville_cascade(ModelParams(4, a, p));
    EXPECT_EQ(q.exponents.front(), a / 2 - 1);
    EXPECT_NEAR(q.exponents.back(), q.closed_form_e_m, 1e-12);
  }
  EXPECT_THROW(liouville_cascade(ModelParams(3, 1.0)), ParameterError);
}

TEST(Cascade, FPrimeMatchesDerivativeOfF) {
  const ModelParams P(3, 0.8);
  const int m = cascade_m_min(0.8);
  auto f = [&](double p) { return liouville_cascade(P.with_p(p)).f_p; };
  for (double p : {1.2, 1.5, 1.7}) {
    const double h = 1e-4;
    const double fd = (f(p - 2 * h) - 8 * f(p - h) + 8 * f(p + h) - f(p + 2 * h)) / (12 * h);
    EXPECT_NEAR(liouville_cascade(P.with_p(p), m).fprime_p, fd, 1e-8 * (1 + std::abs(fd)));
  }
}

TEST(Cascade, FullScanHasNoViolations) {
  std::vector<double> alphas;
  for (int k = 1; k <= 9; ++k) alphas.push_back(0.2 * k);
  const ScanReport s = liouville_scan({3, 4, 5}, alphas, 50);
  EXPECT_EQ(s.points.size(), 3u * 9u * 50u);
  EXPECT_EQ(s.violations, 0);
  EXPECT_GE(s.min_tau, 0.0);
  EXPECT_GT(s.min_fprime, 0.0);
  EXPECT_LE(s.max_recursion_gap, 1e-12);
}

TEST(LowerBound, ZeroMonotoneAndSlope) {
  const ModelParams P(3, 1.0, 1.8);
  Profile pr = make_profile_grid(1.0, {}, 16);
  EXPECT_EQ(halfspace_profile_lowerbound(pr, 1.8, P, 3.0).value, 0.0);
  for (double& v : pr.values) v = 1.0;
  Profile bigger = pr;
  for (std::size_t k = 0; k < bigger.values.size(); ++k) bigger.values[k] += 0.1 * k;
  for (double x : {0.5, 2.0, 50.0}) {
    EXPECT_GE(halfspace_profile_lowerbound(bigger, 1.8, P, x).value,
              halfspace_profile_lowerbound(pr, 1.8, P, x).value);
  }
  const LowerBound hit = halfspace_profile_lowerbound(pr, 1.8, P, pr.nodes[3]);
  EXPECT_TRUE(hit.node_excluded);
  EXPECT_THROW(halfspace_profile_lowerbound(pr, 1.8, P, 0.0), ParameterError);
}

}  // namespace
}  // namespace fracgreen
