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

#include "srng/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

namespace srng {
namespace {

template <MassType T>
nlohmann::json mass_json(const T& x) {
  if constexpr (std::same_as<T, double>) {
    return x;
  } else {
    return format_rational(x);
  }
}

void check_gamma(double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::kOutOfRange, "gamma must be positive and finite");
  }
}

// Pool outcomes ordered by descending mass, ties by ascending id, so that
// lower_bound({cap, 0}) is the largest element not exceeding cap.
template <MassType T>
struct PoolOrder {
  bool operator()(const std::pair<T, std::size_t>& a, const std::pair<T, std::size_t>& b) const {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  }
};

// Shared allocation. The first `conditioned.size()` representatives receive
// pool outcomes greedily (largest fit first) until the pool no longer
// overshoots the representative's target, or until the last conditioned
// representative, which then absorbs the whole remainder.
template <MassType T>
MappingPair allocate(const BasicDistribution<T>& dist, std::size_t m,
                     ConstructionTrace<T>& trace, const std::vector<std::size_t>& zero_mass) {
  MappingPair mapping;
  mapping.phi.assign(dist.size(), 0);
  const auto& reps = trace.representatives;
  for (std::size_t i = 0; i < reps.size(); ++i) mapping.phi[reps[i]] = i;

  std::set<std::pair<T, std::size_t>, PoolOrder<T>> pool;
  T remaining(0);
  for (std::size_t id : trace.pool) {
    pool.emplace(dist[id], id);
    remaining += dist[id];
  }

  const std::size_t conditioned = trace.conditioned.size();
  for (std::size_t i = 0; i < conditioned; ++i) {
    AllocationStep<T> step;
    step.representative = reps[i];
    step.target = trace.conditioned[i];
    step.cumulative = dist[reps[i]];
    const bool last = i + 1 == conditioned;
    if (last || step.cumulative + remaining <= step.target) {
      for (const auto& [mass, id] : pool) {
        step.allocated.push_back(id);
        step.cumulative += mass;
      }
      pool.clear();
      trace.stop_index = i;
      trace.steps.push_back(std::move(step));
      break;
    }
    T cap = step.target - step.cumulative;
    for (auto it = pool.lower_bound({cap, 0}); it != pool.end(); it = pool.lower_bound({cap, 0})) {
      cap -= it->first;
      remaining -= it->first;
      step.cumulative += it->first;
      step.allocated.push_back(it->second);
      pool.erase(it);
    }
    trace.steps.push_back(std::move(step));
  }

  for (const auto& step : trace.steps) {
    const std::size_t index = mapping.phi[step.representative];
    for (std::size_t id : step.allocated) mapping.phi[id] = index;
  }
  for (std::size_t id : zero_mass) mapping.phi[id] = trace.stop_index;

  mapping.psi.assign(m, reps.front());
  for (std::size_t i = 0; i < reps.size(); ++i) mapping.psi[i] = reps[i];
  return mapping;
}

template <MassType T>
std::vector<std::size_t> zero_mass_ids(const BasicDistribution<T>& dist) {
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < dist.size(); ++id) {
    if (!(dist[id] > 0)) out.push_back(id);
  }
  return out;
}

template <MassType T>
void condition_high(const BasicDistribution<T>& dist, ConstructionTrace<T>& trace) {
  trace.high_mass = T(0);
  for (std::size_t id : trace.high) trace.high_mass += dist[id];
  trace.conditioned.clear();
  for (std::size_t id : trace.high) trace.conditioned.push_back(dist[id] / trace.high_mass);
}

// Sends everything outside the representatives to representative 0.
template <MassType T>
MappingPair collapse_to_first(const BasicDistribution<T>& dist, std::size_t m,
                              const std::vector<std::size_t>& reps) {
  MappingPair mapping;
  mapping.phi.assign(dist.size(), 0);
  for (std::size_t i = 0; i < reps.size(); ++i) mapping.phi[reps[i]] = i;
  mapping.psi.assign(m, reps.front());
  for (std::size_t i = 0; i < reps.size(); ++i) mapping.psi[i] = reps[i];
  return mapping;
}

}  // namespace

MappingPair MappingPair::identity(std::size_t size) {
  MappingPair mapping;
  mapping.phi.resize(size);
  std::iota(mapping.phi.begin(), mapping.phi.end(), std::size_t{0});
  mapping.psi = mapping.phi;
  return mapping;
}

template <MassType T>
Construction<T> build_threshold_mapping(const BasicDistribution<T>& dist, std::size_t m,
                                        double gamma) {
  check_gamma(gamma);
  if (m == 0) throw Error(ErrorKind::kOutOfRange, "M must be positive");
  Construction<T> out;
  auto& trace = out.trace;
  trace.kind = ConstructionKind::kThreshold;
  trace.n = dist.n();
  trace.m = m;
  trace.gamma = gamma;

  const ProbabilityFloor<T> high_floor(m, dist.n() * gamma);
  const ProbabilityFloor<T> middle_floor(m, 0.0);
  const auto order = sort_descending(dist);
  for (std::size_t id : order) {
    if (!(dist[id] > 0)) break;
    if (high_floor.admits(dist[id])) {
      trace.high.push_back(id);
    } else if (middle_floor.admits(dist[id])) {
      trace.middle.push_back(id);
    } else {
      trace.pool.push_back(id);
    }
  }
  // Floating rounding could admit one outcome too many at exactly 1/M.
  while (trace.high.size() + trace.middle.size() > m) {
    trace.pool.insert(trace.pool.begin(), trace.middle.back());
    trace.middle.pop_back();
  }
  trace.representatives = trace.high;
  trace.representatives.insert(trace.representatives.end(), trace.middle.begin(),
                               trace.middle.end());

  if (trace.high.empty()) {
    trace.degenerate = true;
    trace.high_mass = T(0);
    if (trace.representatives.empty()) trace.representatives.push_back(order.front());
    out.mapping = collapse_to_first(dist, m, trace.representatives);
    return out;
  }
  condition_high(dist, trace);
  out.mapping = allocate(dist, m, trace, zero_mass_ids(dist));
  return out;
}

template <MassType T>
Construction<T> build_smooth_set_mapping(const BasicDistribution<T>& dist, const FCurve& f,
                                         double delta, double gamma) {
  check_gamma(gamma);
  const auto coverage = f.inverse(EvalType<T>(delta));
  const auto smooth = smooth_set_for_coverage(dist, coverage);
  const std::size_t support = dist.support_size();

  const double target = std::log(static_cast<double>(smooth.ids.size())) + dist.n() * gamma;
  const double m_real = std::ceil(std::exp(target));
  const bool covers = !(m_real < static_cast<double>(support));

  Construction<T> out;
  auto& trace = out.trace;
  trace.kind = ConstructionKind::kSmoothSet;
  trace.n = dist.n();
  trace.gamma = gamma;
  trace.high = smooth.ids;
  const auto order = sort_descending(dist);
  if (covers) {
    // M reaches the support: keep every outcome as its own representative.
    trace.identity = true;
    trace.m = support;
    trace.representatives.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(support));
    trace.middle.assign(trace.representatives.begin() + static_cast<std::ptrdiff_t>(trace.high.size()),
                        trace.representatives.end());
    condition_high(dist, trace);
    out.mapping = collapse_to_first(dist, support, trace.representatives);
    return out;
  }
  const auto m = static_cast<std::size_t>(m_real);
  trace.m = m;
  trace.representatives.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  trace.middle.assign(trace.representatives.begin() + static_cast<std::ptrdiff_t>(trace.high.size()),
                      trace.representatives.end());
  for (std::size_t i = m; i < support; ++i) trace.pool.push_back(order[i]);
  condition_high(dist, trace);
  out.mapping = allocate(dist, m, trace, zero_mass_ids(dist));
  return out;
}

template <MassType T>
Construction<T> build_naive_mapping(const BasicDistribution<T>& dist, std::size_t m,
                                    double gamma) {
  auto out = build_threshold_mapping(dist, m, gamma);
  auto& trace = out.trace;
  trace.kind = ConstructionKind::kNaive;
  trace.steps.clear();
  trace.stop_index = 0;
  if (!trace.degenerate) {
    trace.representatives = trace.high;
    trace.pool.insert(trace.pool.end(), trace.middle.begin(), trace.middle.end());
    trace.middle.clear();
  }
  out.mapping = collapse_to_first(dist, m, trace.representatives);
  return out;
}

template <MassType T>
BasicDistribution<T> apply_mapping(const MappingPair& mapping, const BasicDistribution<T>& dist) {
  if (mapping.phi.size() != dist.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "encoder length differs from the outcome count");
  }
  std::vector<T> q(dist.size(), T(0));
  for (std::size_t id = 0; id < dist.size(); ++id) {
    const std::size_t index = mapping.phi[id];
    if (index >= mapping.m() || mapping.psi[index] >= dist.size()) {
      throw Error(ErrorKind::kDimensionMismatch, "mapping index out of range");
    }
    q[mapping.psi[index]] += dist[id];
  }
  if constexpr (std::same_as<T, double>) {
    const double sum = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& x : q) x /= sum;
  }
  return BasicDistribution<T>(std::move(q), dist.alphabet_size(), dist.n());
}

template <MassType T>
BoundValue<T> achievability_bound(const BasicSpectrum<T>& spec, const FCurve& f, std::size_t m,
                                  double gamma) {
  using E = EvalType<T>;
  using std::exp;
  check_gamma(gamma);
  const double exponent = spec.n() * gamma;
  const E slack = exp(E(-exponent));
  const E arg = to_eval(spec.mass_at_least(ProbabilityFloor<T>(m, exponent))) - slack;
  if (!(arg > 0)) return {f(E(0)), true};
  return {f(arg) + slack * f(to_eval(make_fraction<T>(1, static_cast<std::int64_t>(m)))), false};
}

template <MassType T>
BoundValue<T> converse_bound(const BasicSpectrum<T>& spec, const FCurve& f, std::size_t m,
                             double gamma) {
  using E = EvalType<T>;
  using std::exp;
  check_gamma(gamma);
  const double exponent = spec.n() * gamma;
  const E arg = to_eval(spec.mass_at_least(ProbabilityFloor<T>(m, -exponent))) + exp(E(-exponent));
  if (arg >= 1) return {E(0), true};
  return {f(arg), false};
}

template <MassType T>
EvalType<T> smooth_set_slack(const BasicDistribution<T>& dist, const ConstructionTrace<T>& trace,
                             const FCurve& f) {
  using E = EvalType<T>;
  using std::exp;
  const E scale = exp(E(-trace.n * trace.gamma));
  const E covered = to_eval(trace.high_mass);
  const E stop_mass = to_eval(dist[trace.representatives[trace.stop_index]]);
  return f(E((1 - scale) * covered)) - f(covered) + scale * f(stop_mass);
}

template <MassType T>
EvalType<T> mapping_divergence(const FCurve& f, const MappingPair& mapping,
                               const BasicDistribution<T>& dist) {
  return divergence(f, dist, apply_mapping(mapping, dist));
}

std::string to_string(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::kThreshold: return "threshold";
    case ConstructionKind::kSmoothSet: return "smooth_set";
    case ConstructionKind::kNaive: return "naive";
  }
  return "unknown";
}

nlohmann::json to_json(const MappingPair& mapping) {
  return {{"m", mapping.m()}, {"phi", mapping.phi}, {"psi", mapping.psi}};
}

template <MassType T>
nlohmann::json to_json(const ConstructionTrace<T>& trace) {
  const bool smooth = trace.kind == ConstructionKind::kSmoothSet;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"representative", s.representative},
                     {"allocated", s.allocated},
                     {"target", mass_json(s.target)},
                     {"cumulative", mass_json(s.cumulative)}});
  }
  nlohmann::json conditioned = nlohmann::json::array();
  for (const auto& c : trace.conditioned) conditioned.push_back(mass_json(c));
  return {{"kind", to_string(trace.kind)},
          {"n", trace.n},
          {"m", trace.m},
          {"gamma", trace.gamma},
          {smooth ? "smooth_set" : "high", trace.high},
          {smooth ? "top_m_rest" : "middle", trace.middle},
          {"pool", trace.pool},
          {"representatives", trace.representatives},
          {"conditioned", conditioned},
          {"high_mass", mass_json(trace.high_mass)},
          {"steps", steps},
          {"stop_index", trace.stop_index},
          {"degenerate", trace.degenerate},
          {"identity", trace.identity}};
}

#define SRNG_INSTANTIATE(T)                                                                     \
  template Construction<T> build_threshold_mapping(const BasicDistribution<T>&, std::size_t,   \
                                                   double);                                     \
  template Construction<T> build_smooth_set_mapping(const BasicDistribution<T>&, const FCurve&, \
                                                    double, double);                            \
  template Construction<T> build_naive_mapping(const BasicDistribution<T>&, std::size_t,       \
                                               double);                                         \
  template BasicDistribution<T> apply_mapping(const MappingPair&, const BasicDistribution<T>&); \
  template BoundValue<T> achievability_bound(const BasicSpectrum<T>&, const FCurve&,           \
                                             std::size_t, double);                              \
  template BoundValue<T> converse_bound(const BasicSpectrum<T>&, const FCurve&, std::size_t,   \
                                        double);                                                \
  template EvalType<T> smooth_set_slack(const BasicDistribution<T>&,                           \
                                        const ConstructionTrace<T>&, const FCurve&);            \
  template EvalType<T> mapping_divergence(const FCurve&, const MappingPair&,                   \
                                          const BasicDistribution<T>&);                         \
  template nlohmann::json to_json(const ConstructionTrace<T>&);

SRNG_INSTANTIATE(double)
SRNG_INSTANTIATE(Rational)
#undef SRNG_INSTANTIATE

}  // namespace srng
