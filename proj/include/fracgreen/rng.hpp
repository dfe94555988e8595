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
#include <cstdint>
#include <numbers>

#include "fracgreen/params.hpp"

namespace fracgreen {

/// SplitMix64 generator. Distributions are implemented here rather than
/// through <random> so that sample streams are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for sample `index` of a run seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ 0x6a09e667f3bcc909ULL);
    const std::uint64_t a = mix.next();
    Rng mix2(a + 0x9e3779b97f4a7c15ULL * (index + 1));
    return Rng(mix2.next());
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller (one variate per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform direction on S^{n-1}.
  Point direction(int n) {
    Point p(n);
    double r2 = 0.0;
    while (r2 == 0.0) {
      for (auto& v : p) v = normal();
      r2 = detail::norm2(p);
    }
    const double inv = 1.0 / std::sqrt(r2);
    for (auto& v : p) v *= inv;
    return p;
  }

  /// Uniform point in the ball of radius `radius` about the origin.
  Point in_ball(int n, double radius = 1.0) {
    Point p = direction(n);
    const double r = radius * std::pow(uniform(), 1.0 / n);
    for (auto& v : p) v *= r;
    return p;
  }

 private:
  std::uint64_t state_;
};

}  // namespace fracgreen
