/*
Copyright 2026 The srnglab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// f-divergences D_f(P||Q) = sum_z Q(z) f(P(z)/Q(z)) with the zero conventions
//   0 f(0/0) = 0,  f(0) = lim_{t->0} f(t),  0 f(a/0) = a lim_{u->inf} f(u)/u.

#ifndef SRNG_FDIVERGENCE_HPP_
#define SRNG_FDIVERGENCE_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srng/numeric.hpp"
#include "srng/probability.hpp"

namespace srng {

enum class CurveKind { kVariational, kReverseKl, kHellinger, kEGamma, kKl, kCustom };

// Analytic pass/fail of the admissibility conditions:
//   monotone   f nonincreasing on (0, inf)
//   tail       f(e^{-nb}) / e^{na} -> 0 for all a, b > 0
//   vanishing  lim_{u->inf} f(u)/u = 0
struct CurveConditions {
  bool monotone = false;
  bool tail = false;
  bool vanishing = false;
};

// A convex generator f with f(1) = 0. Continuity on (0, inf) is assumed for
// every registered curve.
class FCurve {
 public:
  static FCurve variational();
  static FCurve reverse_kl();
  static FCurve hellinger();
  // f(t) = (gamma - t)^+ + 1 - gamma, gamma >= 1.
  static FCurve e_gamma(double gamma);
  static FCurve kl();
  // A user curve evaluated in double precision; f^{-1} falls back to
  // bisection on (0, 1].
  static FCurve custom(std::string name, std::function<double(double)> f, double f_at_zero,
                       double slope_at_infinity, CurveConditions conditions);

  // Accepts "variational", "reverse_kl", "hellinger", "e_gamma:<g>", "kl".
  static FCurve parse(std::string_view name);

  const std::string& name() const { return name_; }
  CurveKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double f_at_zero() const { return f_at_zero_; }
  double slope_at_infinity() const { return slope_at_infinity_; }
  const CurveConditions& conditions() const { return conditions_; }
  bool admissible() const {
    return conditions_.monotone && conditions_.tail && conditions_.vanishing;
  }
  bool piecewise_linear() const {
    return kind_ == CurveKind::kVariational || kind_ == CurveKind::kEGamma;
  }

  // f(t) for t >= 0; t = 0 yields f_at_zero.
  template <EvalScalar E>
  E operator()(const E& t) const;

  // Exact value for piecewise-linear curves, nullopt otherwise.
  std::optional<Rational> exact(const Rational& t) const;

  // min{t : f(t) = level}. Throws kOutOfRange unless 0 <= level < f(0).
  template <EvalScalar E>
  E inverse(const E& level) const;

  // Exact f^{-1} where it is rational on rational levels (variational,
  // E_gamma, Hellinger); nullopt otherwise. Same range check as inverse().
  std::optional<Rational> inverse_exact(const Rational& level) const;

 private:
  FCurve() = default;

  std::string name_;
  CurveKind kind_ = CurveKind::kVariational;
  double gamma_ = 1.0;
  double f_at_zero_ = 1.0;
  double slope_at_infinity_ = 0.0;
  CurveConditions conditions_;
  std::function<double(double)> custom_;
};

// D_f(P||Q) over two mass vectors of equal length. +inf is a value, not an
// error.
template <MassType T>
EvalType<T> divergence(const FCurve& f, std::span<const T> p, std::span<const T> q);

template <MassType T>
EvalType<T> divergence(const FCurve& f, const BasicDistribution<T>& p,
                       const BasicDistribution<T>& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "distributions over different outcome sets");
  }
  return divergence<T>(f, p.masses(), q.masses());
}

// Exact D_f for piecewise-linear curves.
std::optional<Rational> divergence_exact(const FCurve& f, std::span<const Rational> p,
                                         std::span<const Rational> q);

// (1/2) sum |p - q|.
template <MassType T>
T half_l1(std::span<const T> p, std::span<const T> q);

// sum over p > gamma q of (p - gamma q).
template <MassType T>
T e_gamma_direct(std::span<const T> p, std::span<const T> q, const T& gamma);

struct ConditionGrid {
  std::vector<double> t_grid;        // monotonicity probes, t > 0
  std::vector<double> a_values;      // tail probes
  std::vector<double> b_values;
  std::vector<int> n_values;         // increasing
  double tail_threshold = 1e-6;      // |ratio| at the largest n
  double vanishing_probe = 1e12;     // u for f(u)/u
  double vanishing_threshold = 1e-6;

  static ConditionGrid defaults();
};

struct TailWitness {
  double a = 0.0;
  double b = 0.0;
  int n = 0;
  double ratio = 0.0;
};

struct ConditionReport {
  CurveConditions analytic;
  CurveConditions numeric;
  std::optional<TailWitness> tail_witness;  // worst (a, b) at the largest n
  bool consistent() const {
    return analytic.monotone == numeric.monotone && analytic.tail == numeric.tail &&
           analytic.vanishing == numeric.vanishing;
  }
  // Analytic flags are authoritative.
  const CurveConditions& verdict() const { return analytic; }
};

ConditionReport check_conditions(const FCurve& f, const ConditionGrid& grid = ConditionGrid::defaults());

// Jensen / log-sum property: sum b f(a/b) >= (sum b) f(sum a / sum b).
bool log_sum_check(const FCurve& f, std::span<const double> a, std::span<const double> b);

}  // namespace srng

#endif  // SRNG_FDIVERGENCE_HPP_
