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

#include "srng/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <tuple>

namespace srng {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

template <MassType T>
double neg_log(const T& p) {
  if constexpr (std::same_as<T, double>) {
    return -std::log(p);
  } else {
    return to_double(Real(-log(Real(p))));
  }
}

template <MassType T>
bool same_mass(const T& a, const T& b) {
  if constexpr (std::same_as<T, double>) {
    return std::abs(a - b) <= 1e-12 * std::max(a, b);
  } else {
    return a == b;
  }
}

// Walks the descending order and stops at the first prefix for which
// `reached(cumulative)` holds. Zero-mass outcomes are never selected.
template <MassType T, class Reached>
SmoothSet<T> greedy_prefix(const BasicDistribution<T>& dist, Reached reached) {
  SmoothSet<T> out;
  out.mass = T(0);
  for (std::size_t id : sort_descending(dist)) {
    if (!(dist[id] > 0)) break;
    out.ids.push_back(id);
    out.mass += dist[id];
    if (reached(out.mass)) break;
  }
  out.log_size = std::log(static_cast<double>(out.ids.size()));
  return out;
}

void check_probability_level(double x, const char* what) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw Error(ErrorKind::kOutOfRange, std::string(what) + " must lie in [0, 1)");
  }
}

// Compositions of n into `parts` nonnegative parts, in lexicographic order.
void for_each_composition(int n, int parts, std::size_t max_count,
                          const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> counts(static_cast<std::size_t>(parts), 0);
  std::size_t visited = 0;
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == parts - 1) {
      counts[static_cast<std::size_t>(pos)] = remaining;
      if (++visited > max_count) {
        throw Error(ErrorKind::kCapExceeded, "type-class count exceeds cap");
      }
      visit(counts);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      counts[static_cast<std::size_t>(pos)] = k;
      rec(pos + 1, remaining - k);
    }
  };
  rec(0, n);
}

}  // namespace

template <MassType T>
ProbabilityFloor<T>::ProbabilityFloor(std::size_t m, double exponent)
    : base_(make_fraction<T>(1, static_cast<std::int64_t>(m))),
      exponent_(exponent),
      log_threshold_(exponent - std::log(static_cast<double>(m))) {
  using std::exp;
  if (m == 0) throw Error(ErrorKind::kOutOfRange, "M must be positive");
  threshold_ = to_eval(base_) * exp(EvalType<T>(exponent));
}

template <MassType T>
bool ProbabilityFloor<T>::admits(const T& p) const {
  if (exponent_ == 0.0) return p >= base_;
  return to_eval(p) >= threshold_;
}

template <MassType T>
BasicSpectrum<T>::BasicSpectrum(std::vector<SpectrumPoint<T>> points, int n)
    : points_(std::move(points)), n_(n) {
  if (points_.empty()) throw Error(ErrorKind::kInvalidModel, "empty spectrum");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].mass > 0)) throw Error(ErrorKind::kInvalidModel, "nonpositive spectrum mass");
    if (i > 0 && points_[i].value < points_[i - 1].value) {
      throw Error(ErrorKind::kInvalidModel, "spectrum values must increase");
    }
  }
  tails_.assign(points_.size(), T(0));
  for (std::size_t i = points_.size() - 1; i > 0; --i) {
    tails_[i - 1] = tails_[i] + points_[i].mass;
  }
}

template <MassType T>
T BasicSpectrum<T>::cdf_at_rate(double rate) const {
  const auto it = std::upper_bound(points_.begin(), points_.end(), rate,
                                   [](double r, const SpectrumPoint<T>& p) { return r < p.value; });
  if (it == points_.begin()) return T(0);
  return cdf(static_cast<std::size_t>(std::distance(points_.begin(), it)) - 1);
}

template <MassType T>
T BasicSpectrum<T>::mass_at_least(const ProbabilityFloor<T>& floor) const {
  T total(0);
  for (const auto& p : points_) {
    const bool in = p.atom_mass > 0 ? floor.admits(p.atom_mass)
                                    : floor.admits_log(-static_cast<double>(n_) * p.value);
    if (!in) break;
    total += p.mass;
  }
  return total;
}

template <MassType T>
BasicSpectrum<T> spectrum_cdf(const BasicDistribution<T>& dist) {
  std::vector<SpectrumPoint<T>> points;
  std::size_t count = 0;
  for (std::size_t id : sort_descending(dist)) {
    const T& m = dist[id];
    if (!(m > 0)) break;
    if (!points.empty() && same_mass(points.back().atom_mass, m)) {
      points.back().mass += m;
      ++count;
      points.back().log_count = std::log(static_cast<double>(count));
      continue;
    }
    SpectrumPoint<T> p;
    p.atom_mass = m;
    p.mass = m;
    p.value = neg_log(m) / dist.n();
    p.log_count = 0.0;
    points.push_back(std::move(p));
    count = 1;
  }
  return BasicSpectrum<T>(std::move(points), dist.n());
}

template <MassType T>
FloatSpectrum type_class_spectrum(const BasicSourceModel<T>& model, std::size_t max_types) {
  model.validate();
  struct Component {
    double log_weight;
    std::vector<double> log_pmf;
  };
  std::vector<Component> components;
  auto log_pmf = [](const std::vector<T>& pmf) {
    std::vector<double> out;
    for (const auto& p : pmf) out.push_back(p > 0 ? std::log(to_double(p)) : kNegInf);
    return out;
  };
  if (const auto* iid = std::get_if<IidModel<T>>(&model.variant)) {
    components.push_back({0.0, log_pmf(iid->pmf)});
  } else if (const auto* mix = std::get_if<MixtureModel<T>>(&model.variant)) {
    for (const auto& c : mix->components) {
      components.push_back({std::log(to_double(c.weight)), log_pmf(c.pmf)});
    }
  } else {
    throw Error(ErrorKind::kInvalidModel, "type classes need an IID or mixture source");
  }

  const int n = model.n;
  const double log_n_fact = std::lgamma(n + 1.0);
  struct Class {
    double log_atom;
    double log_count;
  };
  std::vector<Class> classes;
  for_each_composition(n, model.alphabet_size, max_types, [&](const std::vector<int>& k) {
    double log_atom = kNegInf;
    for (const auto& c : components) {
      double lp = c.log_weight;
      for (std::size_t a = 0; a < k.size(); ++a) {
        if (k[a] == 0) continue;
        lp += k[a] * c.log_pmf[a];
      }
      log_atom = log_add(log_atom, lp);
    }
    if (log_atom == kNegInf) return;
    double log_count = log_n_fact;
    for (int ka : k) log_count -= std::lgamma(ka + 1.0);
    classes.push_back({log_atom, log_count});
  });

  std::sort(classes.begin(), classes.end(),
            [](const Class& a, const Class& b) { return a.log_atom > b.log_atom; });
  std::vector<SpectrumPoint<double>> points;
  double log_total = kNegInf;
  for (const auto& c : classes) {
    const double value = -c.log_atom / n;
    if (!points.empty() && std::abs(points.back().value - value) <= 1e-12 * std::max(1.0, value)) {
      points.back().log_count = log_add(points.back().log_count, c.log_count);
    } else {
      SpectrumPoint<double> p;
      p.value = value;
      p.atom_mass = std::exp(c.log_atom);
      p.log_count = c.log_count;
      points.push_back(p);
    }
    log_total = log_add(log_total, c.log_atom + c.log_count);
  }
  std::vector<SpectrumPoint<double>> kept;
  for (auto& p : points) {
    p.mass = std::exp(p.log_count - p.value * n - log_total);
    if (p.mass > 0) kept.push_back(p);
  }
  return FloatSpectrum(std::move(kept), n);
}

template <MassType T>
RatePoint sup_entropy_quantile(const BasicSpectrum<T>& spec, const EvalType<T>& eps) {
  if (!(eps >= 0 && eps < 1)) throw Error(ErrorKind::kOutOfRange, "eps must lie in [0, 1)");
  if constexpr (std::same_as<T, Rational>) {
    return sup_entropy_quantile_exact(spec, exact_rational(eps));
  } else {
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (spec.tail_after(i) <= eps) return {i, spec.points()[i].value};
    }
    return {spec.size() - 1, spec.points().back().value};
  }
}

template <MassType T>
RatePoint k_f_rate(const BasicSpectrum<T>& spec, const FCurve& f, const EvalType<T>& delta) {
  if (!(delta >= 0) || !(delta < EvalType<T>(f.f_at_zero()))) {
    throw Error(ErrorKind::kOutOfRange, "Delta must lie in [0, f(0)) for " + f.name());
  }
  if constexpr (std::same_as<T, Rational>) {
    return k_f_rate_exact(spec, f, exact_rational(delta));
  }
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (f(to_eval(spec.cdf(i))) <= delta) return {i, spec.points()[i].value};
  }
  // f(1) = 0 <= delta at the last point.
  throw Error(ErrorKind::kUnachievable, "no spectrum point satisfies f(F) <= Delta");
}

RatePoint sup_entropy_quantile_exact(const ExactSpectrum& spec, const Rational& eps) {
  if (!(eps >= 0 && eps < 1)) throw Error(ErrorKind::kOutOfRange, "eps must lie in [0, 1)");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec.tail_after(i) <= eps) return {i, spec.points()[i].value};
  }
  return {spec.size() - 1, spec.points().back().value};
}

RatePoint k_f_rate_exact(const ExactSpectrum& spec, const FCurve& f, const Rational& delta) {
  if (!(delta >= 0) || !(Real(delta) < Real(f.f_at_zero()))) {
    throw Error(ErrorKind::kOutOfRange, "Delta must lie in [0, f(0)) for " + f.name());
  }
  // For nonincreasing continuous f, f(F) <= Delta exactly when F >= f^{-1}(Delta).
  std::optional<Rational> floor;
  if (f.conditions().monotone && f.kind() != CurveKind::kCustom) {
    floor = f.inverse_exact(delta);
    if (!floor) floor = exact_rational(f.inverse(Real(delta)));
  }
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Rational cdf = spec.cdf(i);
    const bool ok = floor ? cdf >= *floor : f(Real(cdf)) <= Real(delta);
    if (ok) return {i, spec.points()[i].value};
  }
  throw Error(ErrorKind::kUnachievable, "no spectrum point satisfies f(F) <= Delta");
}

template <MassType T>
SmoothSet<T> smooth_max_entropy(const BasicDistribution<T>& dist, double delta) {
  check_probability_level(delta, "delta");
  const T coverage = T(1) - from_double<T>(delta);
  return greedy_prefix(dist, [&](const T& cum) { return cum >= coverage; });
}

template <MassType T>
SmoothSet<T> smooth_set_for_coverage(const BasicDistribution<T>& dist,
                                     const EvalType<T>& coverage) {
  if (!(coverage > 0 && coverage <= 1)) {
    throw Error(ErrorKind::kOutOfRange, "coverage must lie in (0, 1]");
  }
  return greedy_prefix(dist, [&](const T& cum) { return to_eval(cum) >= coverage; });
}

double smooth_max_entropy(const FloatSpectrum& spec, double delta) {
  check_probability_level(delta, "delta");
  const double coverage = 1.0 - delta;
  const double n = spec.n();
  double cumulative = 0.0;
  double log_size = kNegInf;
  const auto points = spec.points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const double need = coverage - cumulative;
    const bool last = i + 1 == points.size();
    if (p.mass < need && !last) {
      cumulative += p.mass;
      log_size = log_add(log_size, p.log_count);
      continue;
    }
    // Partial class: ceil(need / atom) outcomes, at most the whole class.
    double log_take = 0.0;
    const double ratio = p.atom_mass > 0 ? need / p.atom_mass : 0.0;
    if (p.atom_mass > 0 && std::isfinite(ratio) && ratio < 0x1p52) {
      log_take = std::log(std::max(1.0, std::ceil(ratio)));
    } else {
      log_take = std::log(need) + n * p.value;
    }
    log_size = log_add(log_size, std::min(log_take, p.log_count));
    break;
  }
  return log_size;
}

template <MassType T>
SweepResult rate_convergence_sweep(const BasicSourceModel<T>& model, const SweepRequest& request) {
  const FCurve& f = request.curve;
  struct Level {
    double delta;
    double nu;
  };
  std::vector<Level> levels;
  for (double nu : request.nus) {
    for (double delta : request.deltas) {
      if (delta + nu >= 0 && delta + nu < f.f_at_zero()) levels.push_back({delta, nu});
    }
  }

  auto rows_for = [&](int n) {
    std::vector<SweepRow> rows;
    const auto instance = with_blocklength(model, n);
    auto emit = [&](const Level& lv, const char* quantity, double value) {
      rows.push_back({n, lv.nu, lv.delta, quantity, value, f.name()});
    };
    if (instance.is_iid() || instance.is_mixture()) {
      const auto spec = type_class_spectrum(instance, request.cap);
      for (const auto& lv : levels) {
        const double level = lv.delta + lv.nu;
        const double delta_h0 = 1.0 - f.inverse(level);
        emit(lv, "h0_rate", smooth_max_entropy(spec, std::clamp(delta_h0, 0.0, std::nextafter(1.0, 0.0))) / n);
        emit(lv, "k_f_rate", k_f_rate(spec, f, level).value);
      }
    } else {
      const auto dist = expand(instance, request.cap);
      const auto spec = spectrum_cdf(dist);
      for (const auto& lv : levels) {
        const EvalType<T> level(lv.delta + lv.nu);
        const auto set = smooth_set_for_coverage(dist, f.inverse(level));
        emit(lv, "h0_rate", set.log_size / n);
        emit(lv, "k_f_rate", k_f_rate(spec, f, level).value);
      }
    }
    return rows;
  };

  std::vector<int> blocklengths = request.blocklengths;
  std::sort(blocklengths.begin(), blocklengths.end());
  blocklengths.erase(std::unique(blocklengths.begin(), blocklengths.end()), blocklengths.end());
  std::vector<std::future<std::vector<SweepRow>>> tasks;
  for (int n : blocklengths) tasks.push_back(std::async(std::launch::async, rows_for, n));

  SweepResult result;
  for (auto& t : tasks) {
    auto rows = t.get();
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  auto key = [](const SweepRow& r) { return std::tie(r.n, r.nu, r.delta, r.quantity); };
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [&](const SweepRow& a, const SweepRow& b) { return key(a) < key(b); });

  std::map<std::tuple<std::string, double, double>, std::vector<double>> series;
  for (const auto& r : result.rows) series[{r.quantity, r.delta, r.nu}].push_back(r.value);
  for (const auto& [k, values] : series) {
    TrendFlag flag;
    std::tie(flag.quantity, flag.delta, flag.nu) = k;
    flag.last = values.back();
    flag.step = values.size() > 1 ? std::abs(values.back() - values[values.size() - 2]) : 0.0;
    flag.settled = values.size() > 1 && flag.step <= request.trend_tolerance;
    result.trends.push_back(flag);
  }
  return result;
}

template class ProbabilityFloor<double>;
template class ProbabilityFloor<Rational>;
template class BasicSpectrum<double>;
template class BasicSpectrum<Rational>;
template FloatSpectrum spectrum_cdf(const FloatDistribution&);
template ExactSpectrum spectrum_cdf(const ExactDistribution&);
template FloatSpectrum type_class_spectrum(const FloatSourceModel&, std::size_t);
template FloatSpectrum type_class_spectrum(const ExactSourceModel&, std::size_t);
template RatePoint sup_entropy_quantile(const FloatSpectrum&, const double&);
template RatePoint sup_entropy_quantile(const ExactSpectrum&, const Real&);
template RatePoint k_f_rate(const FloatSpectrum&, const FCurve&, const double&);
template RatePoint k_f_rate(const ExactSpectrum&, const FCurve&, const Real&);
template SmoothSet<double> smooth_max_entropy(const FloatDistribution&, double);
template SmoothSet<Rational> smooth_max_entropy(const ExactDistribution&, double);
template SmoothSet<double> smooth_set_for_coverage(const FloatDistribution&, const double&);
template SmoothSet<Rational> smooth_set_for_coverage(const ExactDistribution&, const Real&);
template SweepResult rate_convergence_sweep(const FloatSourceModel&, const SweepRequest&);
template SweepResult rate_convergence_sweep(const ExactSourceModel&, const SweepRequest&);

}  // namespace srng
