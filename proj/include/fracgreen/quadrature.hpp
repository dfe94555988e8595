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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include "fracgreen/errors.hpp"

namespace fracgreen {

/// Neumaier compensated summation. Reductions that go through this class
/// are insensitive to summation order up to a few ulps.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Gauss rule on [-1, 1] for the weight (1-x)^a (1+x)^b.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Three-term recurrence of the monic Jacobi polynomials: diagonal a_k and
// squared off-diagonal b_k (k >= 1).
inline void jacobi_recurrence(int m, double a, double b,
                              std::vector<double>& diag,
                              std::vector<double>& off2) {
  diag.assign(m, 0.0);
  off2.assign(m, 0.0);
  const double ab = a + b;
  diag[0] = (b - a) / (ab + 2.0);
  for (int k = 1; k < m; ++k) {
    const double c = 2.0 * k + ab;
    diag[k] = (b * b - a * a) / (c * (c + 2.0));
  }
  if (m > 1) off2[1] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
  for (int k = 2; k < m; ++k) {
    const double c = 2.0 * k + ab;
    off2[k] = 4.0 * k * (k + a) * (k + b) * (k + ab) /
              (c * c * (c + 1.0) * (c - 1.0));
  }
}

}  // namespace detail

/// Golub-Welsch eigenvalue solve followed by Newton polishing of each node on
/// the orthonormal recurrence; weights come from the Christoffel function.
inline GaussRule gauss_jacobi(int m, double a, double b) {
  if (m < 1) throw ParameterError("quadrature rule needs at least one node");
  if (!(a > -1.0) || !(b > -1.0)) {
    std::ostringstream os;
    os << "Jacobi exponents must exceed -1 (got " << a << ", " << b << ")";
    throw ParameterError(os.str());
  }
  std::vector<double> diag, off2;
  detail::jacobi_recurrence(m + 1, a, b, diag, off2);
  const double log_mu0 = (a + b + 1.0) * std::log(2.0) + detail::log_beta(a + 1.0, b + 1.0);
  const double p0 = std::exp(-0.5 * log_mu0);

  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  if (m == 1) {
    rule.nodes[0] = diag[0];
  } else {
    Eigen::VectorXd d(m), e(m - 1);
    for (int k = 0; k < m; ++k) d[k] = diag[k];
    for (int k = 1; k < m; ++k) e[k - 1] = std::sqrt(off2[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    for (int k = 0; k < m; ++k) rule.nodes[k] = es.eigenvalues()[k];
  }

  // Orthonormal values p_0..p_m and derivative of p_m at x.
  auto eval = [&](double x, double& pm, double& dpm, double& christoffel) {
    double pprev = 0.0, p = p0, dprev = 0.0, dp = 0.0;
    double csum = p * p;
    for (int k = 0; k < m; ++k) {
      const double bk = std::sqrt(off2[k]);
      const double bnext = std::sqrt(off2[k + 1]);
      const double pn = ((x - diag[k]) * p - bk * pprev) / bnext;
      const double dn = (p + (x - diag[k]) * dp - bk * dprev) / bnext;
      pprev = p;
      p = pn;
      dprev = dp;
      dp = dn;
      if (k + 1 < m) csum += p * p;
    }
    pm = p;
    dpm = dp;
    christoffel = csum;
  };

  for (int k = 0; k < m; ++k) {
    double x = rule.nodes[k];
    double pm, dpm, cs;
    for (int it = 0; it < 3; ++it) {
      eval(x, pm, dpm, cs);
      if (dpm == 0.0) break;
      const double step = pm / dpm;
      x -= step;
      if (std::abs(step) < 1e-17) break;
    }
    x = std::clamp(x, -1.0, 1.0);
    eval(x, pm, dpm, cs);
    rule.nodes[k] = x;
    rule.weights[k] = 1.0 / cs;
  }
  return rule;
}

inline GaussRule gauss_legendre(int m) { return gauss_jacobi(m, 0.0, 0.0); }

/// Gauss-Jacobi rule on (0,1) for the weight u^exp_at_zero (1-u)^exp_at_one.
class JacobiRule {
 public:
  JacobiRule() = default;
  JacobiRule(int m, double exp_at_zero, double exp_at_one)
      : exp0_(exp_at_zero), exp1_(exp_at_one) {
    if (!(exp_at_zero > -1.0) || !(exp_at_one > -1.0)) {
      std::ostringstream os;
      os << "Jacobi exponents must exceed -1 (got " << exp_at_zero << ", "
         << exp_at_one << ")";
      throw ParameterError(os.str());
    }
    // On [-1,1] the exponent at x = +1 maps to u = 1.
    GaussRule g = gauss_jacobi(m, exp_at_one, exp_at_zero);
    const double scale = std::pow(2.0, -(exp0_ + exp1_ + 1.0));
    nodes_.resize(m);
    weights_.resize(m);
    for (int k = 0; k < m; ++k) {
      nodes_[k] = 0.5 * (1.0 + g.nodes[k]);
      weights_[k] = g.weights[k] * scale;
    }
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double exp_at_zero() const { return exp0_; }
  double exp_at_one() const { return exp1_; }

  /// Sum of the weights, i.e. Beta(exp_at_zero + 1, exp_at_one + 1).
  double mass() const {
    CompensatedSum s;
    for (double w : weights_) s += w;
    return s.value();
  }

  template <class F>
  double apply(F&& f) const {
    CompensatedSum s;
    for (std::size_t k = 0; k < nodes_.size(); ++k) s += weights_[k] * f(nodes_[k]);
    return s.value();
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double exp0_ = 0.0;
  double exp1_ = 0.0;
};

inline JacobiRule jacobi_rule(int m, double exp_at_zero, double exp_at_one) {
  if (m < 1) throw ParameterError("quadrature rule needs at least one node");
  return JacobiRule(m, exp_at_zero, exp_at_one);
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

struct KronrodSegment {
  double a, b, value, error;
  bool operator<(const KronrodSegment& o) const { return error < o.error; }
};

template <class F>
KronrodSegment gk15(F& f, double a, double b) {
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wgk[7] * fc, g = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * xgk[j]);
    const double f2 = f(c + h * xgk[j]);
    k += wgk[j] * (f1 + f2);
    if (j % 2 == 1) g += wg[j / 2] * (f1 + f2);
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

template <class F>
QuadResult adaptive_finite(F& f, double lo, double hi, double tol, int budget) {
  std::priority_queue<KronrodSegment> heap;
  KronrodSegment first = gk15(f, lo, hi);
  heap.push(first);
  double total = first.value, err = first.error;
  int count = 1;
  while (err > std::max(tol * std::abs(total), 1e-300)) {
    if (count >= budget) {
      std::ostringstream os;
      os << "adaptive quadrature did not reach tol " << tol << " within " << budget
         << " intervals (error estimate " << err << ")";
      throw QuadratureError(os.str());
    }
    KronrodSegment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) {
      // Interval exhausted at machine resolution; accept its estimate.
      err -= s.error;
      s.error = 0.0;
      heap.push(s);
      continue;
    }
    KronrodSegment l = gk15(f, s.a, mid), r = gk15(f, mid, s.b);
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++count;
    if (count % 64 == 0) {
      // Re-sum to keep the running totals free of drift.
      auto copy = heap;
      CompensatedSum tv, te;
      while (!copy.empty()) {
        tv += copy.top().value;
        te += copy.top().error;
        copy.pop();
      }
      total = tv.value();
      err = te.value();
    }
  }
  auto copy = heap;
  CompensatedSum tv, te;
  while (!copy.empty()) {
    tv += copy.top().value;
    te += copy.top().error;
    copy.pop();
  }
  return {tv.value(), te.value(), count};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature with a global error queue.
/// `hi` may be +infinity: the tail beyond lo + 1 is mapped to (0, 1] by
/// x = lo + 1/v, v in (0, 1]. The tolerance is relative to the integral's magnitude.
template <class F>
QuadResult adaptive_quad_ex(F&& f, double lo, double hi, double tol,
                            int budget = 4000) {
  if (!(tol > 0.0)) throw ParameterError("adaptive_quad tolerance must be positive");
  if (!(hi > lo)) {
    if (hi == lo) return {};
    throw ParameterError("adaptive_quad needs lo < hi");
  }
  if (std::isinf(hi)) {
    if (std::isinf(lo)) throw ParameterError("adaptive_quad needs a finite lower limit");
    const double c = lo + 1.0;
    auto head = [&](double x) { return f(x); };
    auto tail = [&](double v) {
      if (v <= 0.0) return 0.0;
      return f(c + (1.0 - v) / v) / (v * v);
    };
    QuadResult h = detail::adaptive_finite(head, lo, c, tol, budget);
    QuadResult t = detail::adaptive_finite(tail, 0.0, 1.0, tol, budget);
    return {h.value + t.value, h.error + t.error, h.intervals + t.intervals};
  }
  auto g = [&](double x) { return f(x); };
  return detail::adaptive_finite(g, lo, hi, tol, budget);
}

template <class F>
double adaptive_quad(F&& f, double lo, double hi, double tol, int budget = 4000) {
  return adaptive_quad_ex(std::forward<F>(f), lo, hi, tol, budget).value;
}

}  // namespace fracgreen
