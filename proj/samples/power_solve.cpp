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


// Solves u = G(u^p) on the unit ball and checks the moving-plane sweep.

#include <cstdio>
#include <memory>

#include "fracgreen/solver.hpp"
#include "fracgreen/sphere.hpp"

int main() {
  using namespace fracgreen;
  const ModelParams params(3, 1.0, 1.8);
  const GreenKernel K(params);
  auto grid = std::make_shared<const Grid>(Grid::ball(3, 16, icosahedral_rule()));
  GreenOperator op(grid, K);
  const PowerSolveResult r = nonlinear_power_solve(op, 1.8, SolveOptions{});
  std::printf("iterations %d, residual %.3e, max u %.6f\n", r.iterations, r.residual,
              r.u.max_abs());
  for (int axis = 1; axis <= 3; ++axis) {
    const SweepReport s =
        moving_plane_sweep(r.u, axis, default_lambda_grid(64), params, Domain::unit_ball());
    std::printf("axis %d: lambda0 %.4f\n", axis, s.lambda0_estimate);
  }
}
