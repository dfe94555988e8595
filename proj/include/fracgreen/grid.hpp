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

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "fracgreen/errors.hpp"
#include "fracgreen/params.hpp"
#include "fracgreen/quadrature.hpp"
#include "fracgreen/sphere.hpp"

namespace fracgreen {

/// Quadrature grid on the unit ball (radial x angular tensor) or on an
/// axis-aligned box (midpoint cells). Ball points are stored shell-major:
/// index = shell * angular_count + ray.
class Grid {
 public:
  enum class Kind { Ball, Slab };

  /// Gauss-Legendre radii mapped to (0, 1) with weight r^{n-1}, tensored
  /// with `rule`.
  static Grid ball(int n, int radial, AngularRule rule) {
    if (radial < 2) throw ParameterError("radial resolution must be >= 2");
    if (rule.size() < 2) throw ParameterError("angular resolution must be >= 2");
    if (rule.dim != n) throw ParameterError("angular rule dimension mismatch");
    Grid g;
    g.kind_ = Kind::Ball;
    g.n_ = n;
    const GaussRule gl = gauss_legendre(radial);
    for (int i = 0; i < radial; ++i) {
      const double r = 0.5 * (1.0 + gl.nodes[i]);
      g.radii_.push_back(r);
      g.radial_weights_.push_back(0.5 * gl.weights[i] * std::pow(r, n - 1));
    }
    g.rule_ = std::move(rule);
    for (int i = 0; i < radial; ++i) {
      for (std::size_t j = 0; j < g.rule_.size(); ++j) {
        Point p = g.rule_.directions[j];
        for (auto& v : p) v *= g.radii_[i];
        g.points_.push_back(std::move(p));
        g.weights_.push_back(g.radial_weights_[i] * g.rule_.weights[j]);
      }
    }
    g.finish();
    return g;
  }

  /// Box [lo, hi] split into counts[k] cells per axis; nodes at cell
  /// centers. A box with lo_n = 0 discretizes a slab of the half-space.
  static Grid slab(std::vector<double> lo, std::vector<double> hi, std::vector<int> counts) {
    const std::size_t n = lo.size();
    if (n < 3 || hi.size() != n || counts.size() != n) {
      throw ParameterError("slab grid needs matching lo/hi/counts of dimension >= 3");
    }
    if (lo[n - 1] < 0.0) throw ParameterError("slab grid must lie in the half-space x_n >= 0");
    Grid g;
    g.kind_ = Kind::Slab;
    g.n_ = static_cast<int>(n);
    double cell = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (counts[k] < 2) throw ParameterError("slab resolution must be >= 2 per axis");
      if (!(hi[k] > lo[k])) throw ParameterError("slab box must have hi > lo");
      g.step_.push_back((hi[k] - lo[k]) / counts[k]);
      cell *= g.step_.back();
    }
    g.lo_ = std::move(lo);
    g.hi_ = std::move(hi);
    g.counts_ = std::move(counts);
    std::size_t total = 1;
    for (int c : g.counts_) total *= c;
    std::vector<int> idx(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (std::size_t k = n; k-- > 0;) {
        idx[k] = static_cast<int>(rem % g.counts_[k]);
        rem /= g.counts_[k];
      }
      Point p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = g.lo_[k] + (idx[k] + 0.5) * g.step_[k];
      g.points_.push_back(std::move(p));
      g.weights_.push_back(cell);
    }
    g.finish();
    return g;
  }

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& cell_radius() const { return cell_radius_; }

  /// Domain the grid discretizes: the unit ball, or the half-space for a
  /// slab whose lower x_n face is 0 (any other box is treated as part of
  /// the half-space too when lo_n >= 0).
  Domain domain() const {
    return kind_ == Kind::Ball ? Domain::unit_ball() : Domain::half_space();
  }

  double volume() const {
    CompensatedSum s;
    for (double w : weights_) s += w;
    return s.value();
  }

  // Ball layout.
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& radial_weights() const { return radial_weights_; }
  const AngularRule& angular() const { return rule_; }
  std::size_t shells() const { return radii_.size(); }
  std::size_t rays() const { return rule_.size(); }

  // Slab layout.
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<int>& counts() const { return counts_; }
  const std::vector<double>& step() const { return step_; }

  std::string describe() const {
    if (kind_ == Kind::Ball) {
      return "ball " + std::to_string(radii_.size()) + "x" + std::to_string(rule_.size());
    }
    std::string s = "slab";
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      s += (k ? "x" : " ") + std::to_string(counts_[k]);
    }
    return s;
  }

 private:
  void finish() {
    const double area = sphere_area(n_);
    cell_radius_.resize(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      cell_radius_[i] = std::pow(weights_[i] * n_ / area, 1.0 / n_);
    }
  }

  Kind kind_ = Kind::Ball;
  int n_ = 0;
  std::vector<Point> points_;
  std::vector<double> weights_;
  std::vector<double> cell_radius_;
  std::vector<double> radii_, radial_weights_;
  AngularRule rule_;
  std::vector<double> lo_, hi_, step_;
  std::vector<int> counts_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Values sampled on a grid.
struct Field {
  GridPtr grid;
  std::vector<double> values;

  Field() = default;
  Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw ParameterError("field without a grid");
    if (values.size() != grid->size()) {
      throw ParameterError("field has " + std::to_string(values.size()) +
                           " values for a grid of " + std::to_string(grid->size()));
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw ParameterError("field values must be finite");
    }
  }

  template <class F>
  static Field sample(GridPtr g, F&& f) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) v[i] = f(g->points()[i]);
    return Field(std::move(g), std::move(v));
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// Evaluator on R^n built from a grid field.
using Evaluator = std::function<double(PointView)>;

/// Interpolant of a ball field. Each ray carries a cubic Hermite profile in
/// r over the knots (-r_N .. -r_1, r_1 .. r_N, 1): the even reflection makes
/// the profile flat at the origin and the last knot pins u(1) = 0. Outside
/// the ball the value is 0.
///
/// Monotone mode uses PCHIP slopes (no new extrema along a ray) and the
/// nearest ray in angle; it is meant for moving-plane comparisons. Smooth
/// mode uses natural-spline slopes and blends nearby rays with compactly
/// supported Wendland weights, giving a C^1 function away from the origin.
class BallInterpolant {
 public:
  enum class Mode { Monotone, Smooth };

  BallInterpolant(const Field& f, Mode mode, bool zero_boundary = true)
      : grid_(f.grid), mode_(mode), zero_boundary_(zero_boundary) {
    if (!grid_ || grid_->kind() != Grid::Kind::Ball) {
      throw ParameterError("BallInterpolant needs a ball grid");
    }
    const std::size_t N = grid_->shells(), A = grid_->rays();
    const std::vector<double>& r = grid_->radii();
    knots_.clear();
    for (std::size_t i = N; i-- > 0;) knots_.push_back(-r[i]);
    for (std::size_t i = 0; i < N; ++i) knots_.push_back(r[i]);
    if (zero_boundary_) knots_.push_back(1.0);
    const std::size_t K = knots_.size();
    vals_.assign(A * K, 0.0);
    slopes_.assign(A * K, 0.0);
    std::vector<double> y(K), d(K);
    for (std::size_t j = 0; j < A; ++j) {
      for (std::size_t i = 0; i < N; ++i) {
        const double v = f.values[i * A + j];
        y[N - 1 - i] = v;
        y[N + i] = v;
      }
      if (zero_boundary_) y[K - 1] = 0.0;
      if (mode_ == Mode::Monotone) {
        pchip_slopes(knots_, y, d);
      } else {
        spline_slopes(knots_, y, d);
      }
      std::copy(y.begin(), y.end(), vals_.begin() + j * K);
      std::copy(d.begin(), d.end(), slopes_.begin() + j * K);
    }
    const double spacing = std::sqrt(sphere_area(grid_->dim()) / A);
    support_ = 2.0 * spacing;
    all_rays_.resize(A);
    for (std::size_t j = 0; j < A; ++j) all_rays_[j] = j;
    if (mode_ == Mode::Smooth && grid_->dim() == 3) build_bins();
  }

  double operator()(PointView x) const {
    const double r = std::sqrt(detail::norm2(x));
    const double rmax = zero_boundary_ ? 1.0 : knots_.back();
    if (r >= 1.0) return 0.0;
    const double rr = std::min(r, rmax);
    // Hermite basis on the enclosing interval.
    const std::size_t K = knots_.size();
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(knots_.begin(), knots_.end(), rr) - knots_.begin());
    i = std::clamp<std::size_t>(i, 1, K - 1) - 1;
    const double h = knots_[i + 1] - knots_[i];
    const double tt = std::clamp((rr - knots_[i]) / h, 0.0, 1.0);
    const double t2 = tt * tt, t3 = t2 * tt;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = (t3 - 2 * t2 + tt) * h;
    const double h01 = -2 * t3 + 3 * t2, h11 = (t3 - t2) * h;
    auto ray_value = [&](std::size_t j) {
      const double* y = &vals_[j * K];
      const double* d = &slopes_[j * K];
      return h00 * y[i] + h10 * d[i] + h01 * y[i + 1] + h11 * d[i + 1];
    };
    const std::size_t A = grid_->rays();
    if (r == 0.0) {
      CompensatedSum s;
      for (std::size_t j = 0; j < A; ++j) s += ray_value(j);
      return s.value() / A;
    }
    const auto& dirs = grid_->angular().directions;
    if (mode_ == Mode::Monotone) {
      std::size_t best = 0;
      double bd = -2.0;
      for (std::size_t j = 0; j < A; ++j) {
        const double d = detail::dot(x, dirs[j]);
        if (d > bd) {
          bd = d;
          best = j;
        }
      }
      return ray_value(best);
    }
    const std::vector<std::size_t>* cand = &all_rays_;
    if (!bins_.empty()) cand = &bins_[bin_of(x, r)];
    double num = 0.0, den = 0.0;
    for (std::size_t j : *cand) {
      const double c2 = std::max(0.0, 2.0 - 2.0 * detail::dot(x, dirs[j]) / r);
      const double q = std::sqrt(c2) / support_;
      if (q >= 1.0) continue;
      const double w1 = 1.0 - q, w = w1 * w1 * w1 * w1 * (4.0 * q + 1.0);
      num += w * ray_value(j);
      den += w;
    }
    if (den == 0.0) {
      std::size_t best = 0;
      double bd = -2.0;
      for (std::size_t j = 0; j < A; ++j) {
        const double d = detail::dot(x, dirs[j]);
        if (d > bd) {
          bd = d;
          best = j;
        }
      }
      return ray_value(best);
    }
    return num / den;
  }

  Evaluator evaluator() const {
    auto self = std::make_shared<BallInterpolant>(*this);
    return [self](PointView x) { return (*self)(x); };
  }

 private:
  static void pchip_slopes(const std::vector<double>& x, const std::vector<double>& y,
                           std::vector<double>& d) {
    const std::size_t K = x.size();
    std::vector<double> h(K - 1), del(K - 1);
    for (std::size_t i = 0; i + 1 < K; ++i) {
      h[i] = x[i + 1] - x[i];
      del[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < K; ++i) {
      if (del[i - 1] * del[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (s * d0 <= 0.0) return 0.0;
      if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3 * d0)) return 3 * d0;
      return s;
    };
    d[0] = K > 2 ? end_slope(h[0], h[1], del[0], del[1]) : del[0];
    d[K - 1] = K > 2 ? end_slope(h[K - 2], h[K - 3], del[K - 2], del[K - 3]) : del[0];
  }

  // Natural cubic spline written in Hermite form.
  static void spline_slopes(const std::vector<double>& x, const std::vector<double>& y,
                            std::vector<double>& d) {
    const std::size_t K = x.size();
    std::vector<double> a(K, 0.0), b(K, 1.0), c(K, 0.0), rhs(K, 0.0), M(K, 0.0);
    for (std::size_t i = 1; i + 1 < K; ++i) {
      const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
      a[i] = h0 / 6.0;
      b[i] = (h0 + h1) / 3.0;
      c[i] = h1 / 6.0;
      rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    // Thomas algorithm.
    for (std::size_t i = 1; i < K; ++i) {
      const double m = a[i] / b[i - 1];
      b[i] -= m * c[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    M[K - 1] = rhs[K - 1] / b[K - 1];
    for (std::size_t i = K - 1; i-- > 0;) M[i] = (rhs[i] - c[i] * M[i + 1]) / b[i];
    for (std::size_t i = 0; i + 1 < K; ++i) {
      const double h = x[i + 1] - x[i];
      d[i] = (y[i + 1] - y[i]) / h - h * (2.0 * M[i] + M[i + 1]) / 6.0;
    }
    const double h = x[K - 1] - x[K - 2];
    d[K - 1] = (y[K - 1] - y[K - 2]) / h + h * (M[K - 2] + 2.0 * M[K - 1]) / 6.0;
  }

  static constexpr int kMuBins = 24;
  static constexpr int kPhiBins = 48;

  std::size_t bin_of(PointView x, double r) const {
    const double mu = std::clamp(x[2] / r, -1.0, 1.0);
    double ph = std::atan2(x[1], x[0]);
    if (ph < 0) ph += 2.0 * std::numbers::pi;
    const int bm = std::min(kMuBins - 1, static_cast<int>((mu + 1.0) * 0.5 * kMuBins));
    const int bp = std::min(kPhiBins - 1,
                            static_cast<int>(ph / (2.0 * std::numbers::pi) * kPhiBins));
    return static_cast<std::size_t>(bm * kPhiBins + bp);
  }

  // Candidate rays per (mu, phi) bin: every ray within the Wendland support
  // of some point of the bin.
  void build_bins() {
    const auto& dirs = grid_->angular().directions;
    bins_.assign(kMuBins * kPhiBins, {});
    for (int bm = 0; bm < kMuBins; ++bm) {
      const double mu0 = -1.0 + 2.0 * bm / kMuBins, mu1 = -1.0 + 2.0 * (bm + 1) / kMuBins;
      for (int bp = 0; bp < kPhiBins; ++bp) {
        const double p0 = 2.0 * std::numbers::pi * bp / kPhiBins;
        const double p1 = 2.0 * std::numbers::pi * (bp + 1) / kPhiBins;
        // Sample the bin boundary and center; the bin radius bounds the
        // distance from any interior point to the nearest sample.
        std::vector<Point> samples;
        double radius = 0.0;
        const int S = 4;
        for (int a = 0; a <= S; ++a) {
          for (int b = 0; b <= S; ++b) {
            const double mu = mu0 + (mu1 - mu0) * a / S, ph = p0 + (p1 - p0) * b / S;
            const double sn = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            samples.push_back({sn * std::cos(ph), sn * std::sin(ph), mu});
          }
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
          for (std::size_t k = i + 1; k < samples.size(); ++k) {
            radius = std::max(radius, std::sqrt(detail::dist2(samples[i], samples[k])));
          }
        }
        auto& list = bins_[bm * kPhiBins + bp];
        for (std::size_t j = 0; j < dirs.size(); ++j) {
          double best = 4.0;
          for (const auto& s : samples) best = std::min(best, detail::dist2(s, dirs[j]));
          if (std::sqrt(best) < support_ + radius) list.push_back(j);
        }
      }
    }
  }

  GridPtr grid_;
  Mode mode_;
  bool zero_boundary_;
  std::vector<double> knots_;
  std::vector<double> vals_, slopes_;
  double support_ = 0.0;
  std::vector<std::vector<std::size_t>> bins_;
  std::vector<std::size_t> all_rays_;
};

/// Multilinear interpolant of a slab field on its cell-center lattice.
/// Points beyond the outermost centers take the nearest center's value
/// along that axis; the value is 0 for x_n <= 0.
class SlabInterpolant {
 public:
  explicit SlabInterpolant(const Field& f) : grid_(f.grid), values_(f.values) {
    if (!grid_ || grid_->kind() != Grid::Kind::Slab) {
      throw ParameterError("SlabInterpolant needs a slab grid");
    }
  }

  double operator()(PointView x) const {
    const int n = grid_->dim();
    if (x[n - 1] <= 0.0) return 0.0;
    const auto& lo = grid_->lo();
    const auto& step = grid_->step();
    const auto& counts = grid_->counts();
    std::vector<int> base(n);
    std::vector<double> frac(n);
    for (int k = 0; k < n; ++k) {
      double q = (x[k] - lo[k]) / step[k] - 0.5;
      q = std::clamp(q, 0.0, static_cast<double>(counts[k] - 1));
      int b = std::min(static_cast<int>(q), counts[k] - 2);
      base[k] = b;
      frac[k] = q - b;
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
      double w = 1.0;
      std::size_t flat = 0;
      for (int k = 0; k < n; ++k) {
        const int bit = (corner >> k) & 1;
        w *= bit ? frac[k] : 1.0 - frac[k];
        flat = flat * counts[k] + static_cast<std::size_t>(base[k] + bit);
      }
      if (w != 0.0) acc += w * values_[flat];
    }
    return acc;
  }

  Evaluator evaluator() const {
    auto self = std::make_shared<SlabInterpolant>(*this);
    return [self](PointView x) { return (*self)(x); };
  }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

}  // namespace fracgreen
