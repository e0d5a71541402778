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

#include "srng/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace srng {
namespace {

template <MassType T>
bool sums_to_one(std::span<const T> values) {
  T total = 0;
  for (const auto& v : values) total += v;
  if constexpr (std::same_as<T, double>) {
    return std::abs(total - 1.0) <= kFloatSumTolerance;
  } else {
    return total == 1;
  }
}

template <MassType T>
void validate_pmf(std::span<const T> pmf, std::size_t alphabet, const std::string& what) {
  if (pmf.size() != alphabet) {
    throw Error(ErrorKind::kInvalidModel,
                what + " has " + std::to_string(pmf.size()) + " entries, expected " +
                    std::to_string(alphabet));
  }
  for (const auto& p : pmf) {
    if (p < 0) throw Error(ErrorKind::kInvalidModel, what + " has a negative entry");
  }
  if (!sums_to_one(pmf)) throw Error(ErrorKind::kInvalidModel, what + " does not sum to 1");
}

// alphabet^n, or 0 on overflow past `cap`.
std::size_t checked_power(int alphabet, int n, std::size_t cap) {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > cap / static_cast<std::size_t>(alphabet)) return 0;
    total *= static_cast<std::size_t>(alphabet);
  }
  return total <= cap ? total : 0;
}

// Extends an IID product by one symbol: ids are appended as the least
// significant digit.
template <MassType T>
std::vector<T> iid_product(std::span<const T> pmf, int n) {
  std::vector<T> current{T(1)};
  for (int step = 0; step < n; ++step) {
    std::vector<T> next;
    next.reserve(current.size() * pmf.size());
    for (const auto& mass : current) {
      for (const auto& p : pmf) next.push_back(mass * p);
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace

Outcome outcome_from_id(std::size_t id, int alphabet_size, int n) {
  Outcome out;
  out.id = id;
  out.symbols.assign(static_cast<std::size_t>(n), 0);
  for (int i = n - 1; i >= 0; --i) {
    out.symbols[static_cast<std::size_t>(i)] = static_cast<int>(id % static_cast<std::size_t>(alphabet_size));
    id /= static_cast<std::size_t>(alphabet_size);
  }
  return out;
}

std::size_t outcome_id(std::span<const int> symbols, int alphabet_size) {
  std::size_t id = 0;
  for (int s : symbols) id = id * static_cast<std::size_t>(alphabet_size) + static_cast<std::size_t>(s);
  return id;
}

template <MassType T>
BasicDistribution<T>::BasicDistribution(std::vector<T> masses, int alphabet_size, int n)
    : masses_(std::move(masses)), alphabet_size_(alphabet_size), n_(n) {
  if (alphabet_size < 1 || n < 1) {
    throw Error(ErrorKind::kInvalidModel, "alphabet size and blocklength must be positive");
  }
  const std::size_t expected = checked_power(alphabet_size, n, masses_.size());
  if (expected != masses_.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "distribution has " + std::to_string(masses_.size()) +
                    " atoms, which is not alphabet_size^n");
  }
  for (const auto& m : masses_) {
    if (m < 0) throw Error(ErrorKind::kInvalidModel, "negative mass");
  }
  if (!sums_to_one<T>(masses_)) {
    throw Error(ErrorKind::kInvalidModel, "masses do not sum to 1");
  }
}

template <MassType T>
BasicDistribution<T> BasicDistribution<T>::from_masses(std::vector<T> masses) {
  const int size = static_cast<int>(masses.size());
  return BasicDistribution(std::move(masses), size, 1);
}

template <MassType T>
std::size_t BasicDistribution<T>::support_size() const {
  return static_cast<std::size_t>(
      std::count_if(masses_.begin(), masses_.end(), [](const T& m) { return m > 0; }));
}

template <MassType T>
void BasicSourceModel<T>::validate() const {
  if (alphabet_size < 1) throw Error(ErrorKind::kInvalidModel, "alphabet size must be positive");
  if (n < 1) throw Error(ErrorKind::kInvalidModel, "blocklength must be positive");
  const auto alphabet = static_cast<std::size_t>(alphabet_size);
  if (const auto* iid = std::get_if<IidModel<T>>(&variant)) {
    validate_pmf<T>(iid->pmf, alphabet, "pmf");
  } else if (const auto* markov = std::get_if<MarkovModel<T>>(&variant)) {
    validate_pmf<T>(markov->initial, alphabet, "initial pmf");
    if (markov->transition.size() != alphabet) {
      throw Error(ErrorKind::kInvalidModel, "transition matrix must have one row per symbol");
    }
    for (std::size_t a = 0; a < alphabet; ++a) {
      validate_pmf<T>(markov->transition[a], alphabet, "transition row " + std::to_string(a));
    }
  } else {
    const auto& mixture = std::get<MixtureModel<T>>(variant);
    if (mixture.components.empty()) {
      throw Error(ErrorKind::kInvalidModel, "mixture needs at least one component");
    }
    std::vector<T> weights;
    for (std::size_t c = 0; c < mixture.components.size(); ++c) {
      const auto& comp = mixture.components[c];
      if (!(comp.weight > 0)) {
        throw Error(ErrorKind::kInvalidModel, "mixture weights must be positive");
      }
      weights.push_back(comp.weight);
      validate_pmf<T>(comp.pmf, alphabet, "component " + std::to_string(c) + " pmf");
    }
    if (!sums_to_one<T>(weights)) {
      throw Error(ErrorKind::kInvalidModel, "mixture weights do not sum to 1");
    }
  }
}

template <MassType T>
BasicSourceModel<T> iid_source(std::vector<T> pmf, int n) {
  BasicSourceModel<T> model;
  model.alphabet_size = static_cast<int>(pmf.size());
  model.n = n;
  model.variant = IidModel<T>{std::move(pmf)};
  model.validate();
  return model;
}

FloatSourceModel to_floating(const ExactSourceModel& model) {
  auto conv = [](const std::vector<Rational>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_double(x));
    return out;
  };
  FloatSourceModel out;
  out.alphabet_size = model.alphabet_size;
  out.n = model.n;
  if (const auto* iid = std::get_if<IidModel<Rational>>(&model.variant)) {
    out.variant = IidModel<double>{conv(iid->pmf)};
  } else if (const auto* markov = std::get_if<MarkovModel<Rational>>(&model.variant)) {
    MarkovModel<double> m;
    m.initial = conv(markov->initial);
    for (const auto& row : markov->transition) m.transition.push_back(conv(row));
    out.variant = std::move(m);
  } else {
    MixtureModel<double> m;
    for (const auto& c : std::get<MixtureModel<Rational>>(model.variant).components) {
      m.components.push_back({to_double(c.weight), conv(c.pmf)});
    }
    out.variant = std::move(m);
  }
  return out;
}

FloatDistribution to_floating(const ExactDistribution& dist) {
  std::vector<double> masses;
  masses.reserve(dist.size());
  for (const auto& m : dist.masses()) masses.push_back(to_double(m));
  return FloatDistribution(std::move(masses), dist.alphabet_size(), dist.n());
}

template <MassType T>
BasicDistribution<T> expand(const BasicSourceModel<T>& model, std::size_t cap) {
  model.validate();
  const std::size_t total = checked_power(model.alphabet_size, model.n, cap);
  if (total == 0) {
    throw Error(ErrorKind::kCapExceeded, std::to_string(model.alphabet_size) + "^" +
                                             std::to_string(model.n) + " outcomes exceed cap " +
                                             std::to_string(cap));
  }
  const auto alphabet = static_cast<std::size_t>(model.alphabet_size);
  std::vector<T> masses;
  if (const auto* iid = std::get_if<IidModel<T>>(&model.variant)) {
    masses = iid_product<T>(iid->pmf, model.n);
  } else if (const auto* markov = std::get_if<MarkovModel<T>>(&model.variant)) {
    masses = markov->initial;
    for (int step = 1; step < model.n; ++step) {
      std::vector<T> next;
      next.reserve(masses.size() * alphabet);
      for (std::size_t id = 0; id < masses.size(); ++id) {
        const auto& row = markov->transition[id % alphabet];
        for (const auto& p : row) next.push_back(masses[id] * p);
      }
      masses = std::move(next);
    }
  } else {
    const auto& mixture = std::get<MixtureModel<T>>(model.variant);
    masses.assign(total, T(0));
    for (const auto& comp : mixture.components) {
      const auto product = iid_product<T>(comp.pmf, model.n);
      for (std::size_t id = 0; id < total; ++id) masses[id] += comp.weight * product[id];
    }
  }
  if constexpr (std::same_as<T, double>) {
    // Renormalize accumulated rounding so the distribution invariant holds.
    const double sum = std::accumulate(masses.begin(), masses.end(), 0.0);
    for (auto& m : masses) m /= sum;
  }
  return BasicDistribution<T>(std::move(masses), model.alphabet_size, model.n);
}

template <MassType T>
std::vector<std::size_t> sort_descending(const BasicDistribution<T>& dist) {
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
  return order;
}

template <MassType T>
double self_information(const BasicDistribution<T>& dist, std::size_t id) {
  if (id >= dist.size()) throw Error(ErrorKind::kDimensionMismatch, "outcome id out of range");
  if (!(dist[id] > 0)) {
    throw Error(ErrorKind::kZeroMassOutcome, "outcome " + std::to_string(id) + " has zero mass");
  }
  if constexpr (std::same_as<T, double>) {
    return -std::log(dist[id]) / dist.n();
  } else {
    return to_double(Real(-log(Real(dist[id]))) / dist.n());
  }
}

double entropy(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf) {
    if (p > 0) h -= p * std::log(p);
  }
  return h;
}

template class BasicDistribution<double>;
template class BasicDistribution<Rational>;
template struct BasicSourceModel<double>;
template struct BasicSourceModel<Rational>;
template BasicSourceModel<double> iid_source(std::vector<double>, int);
template BasicSourceModel<Rational> iid_source(std::vector<Rational>, int);
template BasicDistribution<double> expand(const BasicSourceModel<double>&, std::size_t);
template BasicDistribution<Rational> expand(const BasicSourceModel<Rational>&, std::size_t);
template std::vector<std::size_t> sort_descending(const BasicDistribution<double>&);
template std::vector<std::size_t> sort_descending(const BasicDistribution<Rational>&);
template double self_information(const BasicDistribution<double>&, std::size_t);
template double self_information(const BasicDistribution<Rational>&, std::size_t);

}  // namespace srng
