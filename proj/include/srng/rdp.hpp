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

// Rate-distortion-perception bounds: the lower bound max{r(D), K_f}, the
// distortion threshold above which K_f is also achievable, and the distortion
// of a concrete mapping.

#ifndef SRNG_RDP_HPP_
#define SRNG_RDP_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "srng/construction.hpp"
#include "srng/fdivergence.hpp"
#include "srng/probability.hpp"
#include "srng/spectrum.hpp"

namespace srng {

// Per-letter distortion g(a, b) >= 0 with g(a, a) = 0, extended additively to
// blocks, or an explicit per-sequence table for tiny n.
struct DistortionSpec {
  std::vector<std::vector<double>> letter;
  std::optional<std::vector<std::vector<double>>> sequence;  // [x][x'] over X^n

  static DistortionSpec hamming(int alphabet_size);

  // Throws kInvalidModel on negative, non-finite or nonzero-diagonal entries.
  void validate(int alphabet_size, std::size_t outcome_count) const;
  // g_n(x, y).
  double block(std::size_t x, std::size_t y, int alphabet_size, int n) const;
  // max over (x, y) of g_n: n times the largest letter entry, or the table max.
  double block_max(int n) const;
  // Whether distinct letters always cost something.
  bool separates_letters() const;
};

struct RdOptions {
  double tolerance = 1e-9;
  int max_iterations = 100000;
};

// Single-letter rate-distortion function in nats, by alternating
// minimization at fixed slope and golden-section search over the slope.
double rd_function_iid(std::span<const double> pmf, const DistortionSpec& g, double d,
                       const RdOptions& options = {});

// min_b E[g(A, b)]: rates are zero from here on.
double rd_max_distortion(std::span<const double> pmf, const DistortionSpec& g);

double rdp_lower_bound(double rd_value, double k_f_value);

// (1/n) max g_n * Pr{(1/n) log 1/P(X^n) >= K_f}, with K_f the finite-n rate at delta.
template <MassType T>
T d_threshold(const BasicSpectrum<T>& spec, const DistortionSpec& g, const FCurve& f,
              double delta);

// (1/n) E[g_n(X^n, psi(phi(X^n)))].
template <MassType T>
T mapping_distortion(const MappingPair& mapping, const BasicDistribution<T>& dist,
                     const DistortionSpec& g);

struct RdpBoundReport {
  double d = 0.0;
  double delta = 0.0;
  std::string curve;
  int n = 1;
  double lower = 0.0;
  std::optional<double> upper;  // present only when d >= d_threshold
  double d_threshold = 0.0;
  double rd_value = 0.0;
  double k_f_value = 0.0;
};

// Bounds for an IID source at the model's blocklength.
template <MassType T>
RdpBoundReport rdp_report(const BasicSourceModel<T>& model, const FCurve& f, double delta,
                          const DistortionSpec& g, double d, std::size_t cap = kDefaultOutcomeCap);

nlohmann::json to_json(const RdpBoundReport& report);

}  // namespace srng

#endif  // SRNG_RDP_HPP_
