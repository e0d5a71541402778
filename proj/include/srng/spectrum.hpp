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

// Finite-n information spectrum: the law of (1/n) log(1/P(X^n)), its tail
// quantiles, the f-dependent rate K_f and the smooth max entropy H_0.

#ifndef SRNG_SPECTRUM_HPP_
#define SRNG_SPECTRUM_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "srng/fdivergence.hpp"
#include "srng/numeric.hpp"
#include "srng/probability.hpp"

namespace srng {

template <MassType T>
struct SpectrumPoint {
  double value = 0.0;  // nats per symbol
  T atom_mass{};       // probability of each outcome in the class; may underflow in type-class spectra
  T mass{};            // probability of the whole class
  double log_count = 0.0;
};

// Admits masses p >= exp(exponent) / m. With exponent == 0 the comparison is
// exact in rational mode.
template <MassType T>
class ProbabilityFloor {
 public:
  ProbabilityFloor(std::size_t m, double exponent);

  bool admits(const T& p) const;
  // Log-domain fallback for atoms whose mass underflowed.
  bool admits_log(double log_p) const { return log_p >= log_threshold_; }

 private:
  T base_;
  double exponent_;
  EvalType<T> threshold_;
  double log_threshold_;
};

template <MassType T>
class BasicSpectrum {
 public:
  // `points` must be strictly increasing in value with positive masses.
  BasicSpectrum(std::vector<SpectrumPoint<T>> points, int n);

  std::span<const SpectrumPoint<T>> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  int n() const { return n_; }

  // Pr{value > v_i}.
  const T& tail_after(std::size_t i) const { return tails_[i]; }
  // Pr{value <= v_i}.
  T cdf(std::size_t i) const { return T(1) - tails_[i]; }
  // Pr{value >= v_i}.
  T mass_from(std::size_t i) const { return tails_[i] + points_[i].mass; }
  // Pr{value <= rate}.
  T cdf_at_rate(double rate) const;
  // Pr{P(X^n) >= floor}.
  T mass_at_least(const ProbabilityFloor<T>& floor) const;

 private:
  std::vector<SpectrumPoint<T>> points_;
  std::vector<T> tails_;
  int n_;
};

using ExactSpectrum = BasicSpectrum<Rational>;
using FloatSpectrum = BasicSpectrum<double>;

// Groups equal self-information values. Floating mode merges masses equal to
// a relative 1e-12.
template <MassType T>
BasicSpectrum<T> spectrum_cdf(const BasicDistribution<T>& dist);

// Spectrum of an IID or IID-mixture source from its type classes, without
// expanding X^n. `max_types` caps the number of compositions.
template <MassType T>
FloatSpectrum type_class_spectrum(const BasicSourceModel<T>& model,
                                  std::size_t max_types = kDefaultOutcomeCap);

// A rate attained at a spectrum support point.
struct RatePoint {
  std::size_t index = 0;
  double value = 0.0;
};

// min{v_i : Pr{value > v_i} <= eps}, 0 <= eps < 1.
template <MassType T>
RatePoint sup_entropy_quantile(const BasicSpectrum<T>& spec, const EvalType<T>& eps);

// min{v_i : f(Pr{value <= v_i}) <= delta}, 0 <= delta < f(0).
template <MassType T>
RatePoint k_f_rate(const BasicSpectrum<T>& spec, const FCurve& f, const EvalType<T>& delta);

// Rational-level versions for exact spectra. Decisions are exact for the
// variational, E_gamma and Hellinger curves; other curves compare the
// cumulative mass against f^{-1}(Delta) evaluated in multiprecision.
// The generic overloads above forward exact spectra here with the level
// converted without rounding.
RatePoint sup_entropy_quantile_exact(const ExactSpectrum& spec, const Rational& eps);
RatePoint k_f_rate_exact(const ExactSpectrum& spec, const FCurve& f, const Rational& delta);

// A smallest set of outcomes with probability >= coverage: the greedy prefix
// of the descending order (ties by id).
template <MassType T>
struct SmoothSet {
  std::vector<std::size_t> ids;
  T mass{};
  double log_size = 0.0;  // nats, unnormalized
};

// H_0(delta|X^n) = min log|A| over Pr{A} >= 1 - delta. Exact in rational mode.
template <MassType T>
SmoothSet<T> smooth_max_entropy(const BasicDistribution<T>& dist, double delta);

// Same prefix rule with the coverage level given directly (used with
// coverage = f^{-1}(Delta)).
template <MassType T>
SmoothSet<T> smooth_set_for_coverage(const BasicDistribution<T>& dist,
                                     const EvalType<T>& coverage);

// H_0 in nats from a type-class spectrum.
double smooth_max_entropy(const FloatSpectrum& spec, double delta);

struct RateReport {
  std::string quantity;
  double value = 0.0;  // nats per symbol
  std::map<std::string, std::string> parameters;
  std::string provenance;
};

struct SweepRequest {
  std::vector<int> blocklengths;
  FCurve curve = FCurve::variational();
  std::vector<double> deltas;
  std::vector<double> nus{0.0};
  std::size_t cap = kDefaultOutcomeCap;
  double trend_tolerance = 0.01;
};

struct SweepRow {
  int n = 0;
  double nu = 0.0;
  double delta = 0.0;
  std::string quantity;  // "h0_rate" or "k_f_rate"
  double value = 0.0;
  std::string curve;
};

// Whether the last two blocklengths of a series agree to `trend_tolerance`.
struct TrendFlag {
  std::string quantity;
  double delta = 0.0;
  double nu = 0.0;
  double last = 0.0;
  double step = 0.0;
  bool settled = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (n, nu, delta, quantity)
  std::vector<TrendFlag> trends;
};

// Per-n values of (1/n) H_0(1 - f^{-1}(Delta + nu)|X^n) and K_f at Delta + nu.
// IID and mixture sources use type classes; Markov sources are expanded and
// subject to the cap.
template <MassType T>
SweepResult rate_convergence_sweep(const BasicSourceModel<T>& model, const SweepRequest& request);

}  // namespace srng

#endif  // SRNG_SPECTRUM_HPP_
