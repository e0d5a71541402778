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

#include "srng/fdivergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace srng {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <EvalScalar E>
E infinity() {
  return E(kInf);
}

double parse_gamma(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double g = 0.0;
  try {
    g = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw Error(ErrorKind::kConfig, "bad e_gamma parameter '" + s + "'");
  }
  return g;
}

}  // namespace

FCurve FCurve::variational() {
  FCurve f;
  f.name_ = "variational";
  f.kind_ = CurveKind::kVariational;
  f.f_at_zero_ = 1.0;
  f.slope_at_infinity_ = 0.0;
  f.conditions_ = {true, true, true};
  return f;
}

FCurve FCurve::reverse_kl() {
  FCurve f;
  f.name_ = "reverse_kl";
  f.kind_ = CurveKind::kReverseKl;
  f.f_at_zero_ = kInf;
  f.slope_at_infinity_ = 0.0;
  f.conditions_ = {true, true, true};
  return f;
}

FCurve FCurve::hellinger() {
  FCurve f;
  f.name_ = "hellinger";
  f.kind_ = CurveKind::kHellinger;
  f.f_at_zero_ = 1.0;
  f.slope_at_infinity_ = 0.0;
  f.conditions_ = {true, true, true};
  return f;
}

FCurve FCurve::e_gamma(double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::kOutOfRange, "E_gamma requires gamma >= 1");
  }
  FCurve f;
  f.name_ = "e_gamma:" + format_double(gamma);
  f.kind_ = CurveKind::kEGamma;
  f.gamma_ = gamma;
  f.f_at_zero_ = 1.0;
  f.slope_at_infinity_ = 0.0;
  f.conditions_ = {true, true, true};
  return f;
}

FCurve FCurve::kl() {
  FCurve f;
  f.name_ = "kl";
  f.kind_ = CurveKind::kKl;
  f.f_at_zero_ = 0.0;
  f.slope_at_infinity_ = kInf;
  f.conditions_ = {false, true, false};
  return f;
}

FCurve FCurve::custom(std::string name, std::function<double(double)> fn, double f_at_zero,
                      double slope_at_infinity, CurveConditions conditions) {
  FCurve f;
  f.name_ = std::move(name);
  f.kind_ = CurveKind::kCustom;
  f.f_at_zero_ = f_at_zero;
  f.slope_at_infinity_ = slope_at_infinity;
  f.conditions_ = conditions;
  f.custom_ = std::move(fn);
  return f;
}

FCurve FCurve::parse(std::string_view name) {
  if (name == "variational") return variational();
  if (name == "reverse_kl") return reverse_kl();
  if (name == "hellinger") return hellinger();
  if (name == "kl") return kl();
  constexpr std::string_view kPrefix = "e_gamma:";
  if (name.substr(0, kPrefix.size()) == kPrefix) {
    return e_gamma(parse_gamma(name.substr(kPrefix.size())));
  }
  throw Error(ErrorKind::kConfig, "unknown curve '" + std::string(name) + "'");
}

template <EvalScalar E>
E FCurve::operator()(const E& t) const {
  using std::log;
  using std::sqrt;
  if (t == 0) return E(f_at_zero_);
  switch (kind_) {
    case CurveKind::kVariational:
      return t >= 1 ? E(0) : E(1 - t);
    case CurveKind::kReverseKl:
      return E(-log(t));
    case CurveKind::kHellinger:
      return E(1 - sqrt(t));
    case CurveKind::kEGamma: {
      const E g(gamma_);
      const E hinge = g - t;
      return (hinge > 0 ? hinge : E(0)) + (E(1) - g);
    }
    case CurveKind::kKl:
      return E(t * log(t));
    case CurveKind::kCustom:
      return E(custom_(to_double(t)));
  }
  return E(0);
}

std::optional<Rational> FCurve::exact(const Rational& t) const {
  switch (kind_) {
    case CurveKind::kVariational:
      return t >= 1 ? Rational(0) : Rational(1 - t);
    case CurveKind::kEGamma: {
      const Rational g(gamma_);
      const Rational hinge = g - t;
      return (hinge > 0 ? hinge : Rational(0)) + (Rational(1) - g);
    }
    default:
      return std::nullopt;
  }
}

std::optional<Rational> FCurve::inverse_exact(const Rational& level) const {
  if (level < 0 || !(Real(level) < Real(f_at_zero_))) {
    throw Error(ErrorKind::kOutOfRange, "f^{-1}(" + format_rational(level) + ") outside [0, f(0)) for " + name_);
  }
  switch (kind_) {
    case CurveKind::kVariational:
    case CurveKind::kEGamma:
      return Rational(1 - level);
    case CurveKind::kHellinger:
      return Rational((1 - level) * (1 - level));
    default:
      return std::nullopt;
  }
}

template <EvalScalar E>
E FCurve::inverse(const E& level) const {
  using std::exp;
  if (level < 0 || !(level < E(f_at_zero_))) {
    throw Error(ErrorKind::kOutOfRange,
                "f^{-1}(" + format_double(to_double(level)) + ") outside [0, f(0)) for " + name_);
  }
  switch (kind_) {
    case CurveKind::kVariational:
    case CurveKind::kEGamma:
      return E(1 - level);
    case CurveKind::kReverseKl:
      return E(exp(-level));
    case CurveKind::kHellinger:
      return E((1 - level) * (1 - level));
    case CurveKind::kKl:
    case CurveKind::kCustom:
      break;
  }
  // Bisection on (0, 1]: f(lo) > level >= f(hi). Returns the smallest t up to
  // 1e-12, which is the minimal solution when f is flat at `level`.
  const double target = to_double(level);
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return E(hi);
}

template double FCurve::operator()(const double&) const;
template Real FCurve::operator()(const Real&) const;
template double FCurve::inverse(const double&) const;
template Real FCurve::inverse(const Real&) const;

template <MassType T>
EvalType<T> divergence(const FCurve& f, std::span<const T> p, std::span<const T> q) {
  using E = EvalType<T>;
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "mass vectors of different lengths");
  }
  if constexpr (std::same_as<T, Rational>) {
    // No transcendentals involved: round once at the end.
    if (f.piecewise_linear()) return Real(*divergence_exact(f, p, q));
  }
  E total(0);
  for (std::size_t z = 0; z < p.size(); ++z) {
    if (q[z] == 0) {
      if (p[z] == 0) continue;
      if (f.slope_at_infinity() == 0) continue;
      if (std::isinf(f.slope_at_infinity())) return infinity<E>();
      total += to_eval(p[z]) * E(f.slope_at_infinity());
    } else if (p[z] == 0) {
      if (std::isinf(f.f_at_zero())) return infinity<E>();
      total += to_eval(q[z]) * E(f.f_at_zero());
    } else {
      const T ratio = p[z] / q[z];
      total += to_eval(q[z]) * f(to_eval(ratio));
    }
  }
  return total;
}

template double divergence(const FCurve&, std::span<const double>, std::span<const double>);
template Real divergence(const FCurve&, std::span<const Rational>, std::span<const Rational>);

std::optional<Rational> divergence_exact(const FCurve& f, std::span<const Rational> p,
                                         std::span<const Rational> q) {
  if (!f.piecewise_linear()) return std::nullopt;
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "mass vectors of different lengths");
  }
  // Piecewise-linear built-ins have f(0) = 1 and zero slope at infinity.
  Rational total(0);
  for (std::size_t z = 0; z < p.size(); ++z) {
    if (q[z] == 0) continue;
    if (p[z] == 0) {
      total += q[z];
    } else {
      total += q[z] * *f.exact(p[z] / q[z]);
    }
  }
  return total;
}

template <MassType T>
T half_l1(std::span<const T> p, std::span<const T> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "mass vectors of different lengths");
  }
  T total(0);
  for (std::size_t z = 0; z < p.size(); ++z) total += p[z] > q[z] ? T(p[z] - q[z]) : T(q[z] - p[z]);
  return total / 2;
}

template <MassType T>
T e_gamma_direct(std::span<const T> p, std::span<const T> q, const T& gamma) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "mass vectors of different lengths");
  }
  T total(0);
  for (std::size_t z = 0; z < p.size(); ++z) {
    const T excess = p[z] - gamma * q[z];
    if (excess > 0) total += excess;
  }
  return total;
}

template double half_l1(std::span<const double>, std::span<const double>);
template Rational half_l1(std::span<const Rational>, std::span<const Rational>);
template double e_gamma_direct(std::span<const double>, std::span<const double>, const double&);
template Rational e_gamma_direct(std::span<const Rational>, std::span<const Rational>,
                                 const Rational&);

ConditionGrid ConditionGrid::defaults() {
  ConditionGrid grid;
  constexpr int kPoints = 241;
  for (int i = 0; i < kPoints; ++i) {
    // 1e-6 .. 1e6, geometric.
    grid.t_grid.push_back(std::pow(10.0, -6.0 + 12.0 * i / (kPoints - 1)));
  }
  grid.a_values = {0.05, 0.5, 2.0};
  grid.b_values = {0.05, 0.5, 2.0};
  grid.n_values = {10, 100, 1000, 10000};
  grid.vanishing_probe = 1e16;
  return grid;
}

ConditionReport check_conditions(const FCurve& f, const ConditionGrid& grid) {
  ConditionReport report;
  report.analytic = f.conditions();

  auto t_grid = grid.t_grid;
  std::sort(t_grid.begin(), t_grid.end());
  bool monotone = true;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const double prev = f(t_grid[i - 1]);
    const double cur = f(t_grid[i]);
    if (cur > prev + 1e-12 * std::max(1.0, std::abs(prev))) {
      monotone = false;
      break;
    }
  }
  report.numeric.monotone = monotone;

  bool tail = !grid.n_values.empty();
  TailWitness worst;
  worst.ratio = -1.0;
  for (double a : grid.a_values) {
    for (double b : grid.b_values) {
      Real previous(kInf);
      Real last(0);
      bool decreasing_at_end = true;
      for (int n : grid.n_values) {
        const Real arg = exp(Real(-n * b));
        const Real ratio = abs(f(arg)) / exp(Real(n * a));
        decreasing_at_end = ratio <= previous;
        previous = ratio;
        last = ratio;
      }
      const double last_d = to_double(last);
      if (!(last_d < grid.tail_threshold) || !decreasing_at_end) tail = false;
      if (last_d > worst.ratio || std::isnan(last_d)) {
        worst = {a, b, grid.n_values.empty() ? 0 : grid.n_values.back(), last_d};
      }
    }
  }
  report.numeric.tail = tail;
  if (worst.ratio >= 0.0 || std::isnan(worst.ratio)) report.tail_witness = worst;

  const double u = grid.vanishing_probe;
  report.numeric.vanishing = std::abs(f(u) / u) < grid.vanishing_threshold;
  return report;
}

bool log_sum_check(const FCurve& f, std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "mass vectors of different lengths");
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t z = 0; z < a.size(); ++z) {
    sum_a += a[z];
    sum_b += b[z];
  }
  if (!(sum_b > 0)) throw Error(ErrorKind::kOutOfRange, "b must not vanish on the tested set");
  const double lhs = divergence<double>(f, a, b);
  const double rhs = sum_b * f(sum_a / sum_b);
  if (std::isinf(lhs) && lhs > 0) return true;
  return lhs >= rhs - 1e-12 * (1.0 + std::abs(rhs));
}

}  // namespace srng
