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


// Evaluates the ball and half-space Green functions along a ray and prints
// the boundary-correction factor next to the free-space singularity.

#include <cmath>
#include <cstdio>

#include "fracgreen/kernel.hpp"

int main() {
  using namespace fracgreen;
  const ModelParams params(3, 1.0);
  const GreenKernel K(params);
  const Point x = {0.0, 0.0, 0.2};
  std::printf("%8s %14s %14s %10s\n", "y3", "G_ball", "G_half", "bracket");
  for (double y3 : {0.3, 0.5, 0.7, 0.9, 0.99}) {
    const Point y = {0.0, 0.0, y3};
    const KernelCoords c = coords(Domain::unit_ball(), x, y);
    std::printf("%8.3f %14.6e %14.6e %10.6f\n", y3, K.green(Domain::unit_ball(), x, y),
                K.green(Domain::half_space(), Point{0, 0, 1.0}, Point{0, 0, 1.0 + y3}),
                K.bracket(c.s, c.t));
  }
}
