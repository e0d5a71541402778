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

// Finite-blocklength sources and the exact distributions they induce on X^n.

#ifndef SRNG_PROBABILITY_HPP_
#define SRNG_PROBABILITY_HPP_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "srng/numeric.hpp"

namespace srng {

// A point of X^n. `id` is the lexicographic rank of `symbols`, first symbol
// most significant.
struct Outcome {
  std::size_t id = 0;
  std::vector<int> symbols;
};

Outcome outcome_from_id(std::size_t id, int alphabet_size, int n);
std::size_t outcome_id(std::span<const int> symbols, int alphabet_size);

// Floating-mode tolerance for "sums to one".
inline constexpr double kFloatSumTolerance = 1e-12;

// Default cap on |X^n|.
inline constexpr std::size_t kDefaultOutcomeCap = std::size_t{1} << 24;

// Probability mass function over an indexed outcome set. Immutable.
template <MassType T>
class BasicDistribution {
 public:
  using mass_type = T;

  // Validates nonnegativity, normalization and alphabet_size^n == size.
  BasicDistribution(std::vector<T> masses, int alphabet_size, int n);

  // A single-letter distribution (n = 1, alphabet = number of masses).
  static BasicDistribution from_masses(std::vector<T> masses);

  std::size_t size() const { return masses_.size(); }
  const T& operator[](std::size_t id) const { return masses_[id]; }
  std::span<const T> masses() const { return masses_; }
  int n() const { return n_; }
  int alphabet_size() const { return alphabet_size_; }
  std::size_t support_size() const;

 private:
  std::vector<T> masses_;
  int alphabet_size_;
  int n_;
};

using ExactDistribution = BasicDistribution<Rational>;
using FloatDistribution = BasicDistribution<double>;
using AtomicDistribution = std::variant<ExactDistribution, FloatDistribution>;

template <MassType T>
struct IidModel {
  std::vector<T> pmf;
};

template <MassType T>
struct MarkovModel {
  std::vector<T> initial;
  std::vector<std::vector<T>> transition;  // row = current symbol
};

template <MassType T>
struct MixtureComponent {
  T weight;
  std::vector<T> pmf;
};

// Weighted mixture of IID components; the spectrum of such a source is
// non-degenerate in the limit.
template <MassType T>
struct MixtureModel {
  std::vector<MixtureComponent<T>> components;
};

template <MassType T>
struct BasicSourceModel {
  std::variant<IidModel<T>, MarkovModel<T>, MixtureModel<T>> variant;
  int alphabet_size = 0;
  int n = 1;

  // Throws Error(kInvalidModel) on malformed pmfs or weights.
  void validate() const;
  bool is_iid() const { return std::holds_alternative<IidModel<T>>(variant); }
  bool is_mixture() const { return std::holds_alternative<MixtureModel<T>>(variant); }
};

using ExactSourceModel = BasicSourceModel<Rational>;
using FloatSourceModel = BasicSourceModel<double>;
using SourceModel = std::variant<ExactSourceModel, FloatSourceModel>;

template <MassType T>
BasicSourceModel<T> iid_source(std::vector<T> pmf, int n);

template <MassType T>
BasicSourceModel<T> with_blocklength(BasicSourceModel<T> model, int n) {
  model.n = n;
  return model;
}

FloatSourceModel to_floating(const ExactSourceModel& model);
FloatDistribution to_floating(const ExactDistribution& dist);

// Materializes P_{X^n}. Throws kCapExceeded when alphabet_size^n > cap.
template <MassType T>
BasicDistribution<T> expand(const BasicSourceModel<T>& model,
                            std::size_t cap = kDefaultOutcomeCap);

// Outcome ids by strictly descending mass, ties by ascending id.
template <MassType T>
std::vector<std::size_t> sort_descending(const BasicDistribution<T>& dist);

// (1/n) log(1 / P(x)) in nats.
template <MassType T>
double self_information(const BasicDistribution<T>& dist, std::size_t id);

// Shannon entropy of a single-letter pmf, nats.
double entropy(std::span<const double> pmf);

}  // namespace srng

#endif  // SRNG_PROBABILITY_HPP_
