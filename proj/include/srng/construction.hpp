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

// Deterministic encoder/decoder pairs that approximate a source by a
// function of itself, plus the finite-n bounds that bracket their divergence.

#ifndef SRNG_CONSTRUCTION_HPP_
#define SRNG_CONSTRUCTION_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "srng/fdivergence.hpp"
#include "srng/numeric.hpp"
#include "srng/probability.hpp"
#include "srng/spectrum.hpp"

namespace srng {

// Encoder phi: outcome id -> index in [0, m); decoder psi: index -> outcome id.
struct MappingPair {
  std::vector<std::size_t> phi;
  std::vector<std::size_t> psi;
  std::size_t m() const { return psi.size(); }

  static MappingPair identity(std::size_t size);
};

enum class ConstructionKind { kThreshold, kSmoothSet, kNaive };

template <MassType T>
struct AllocationStep {
  std::size_t representative = 0;      // outcome id
  std::vector<std::size_t> allocated;  // pool outcome ids, in allocation order
  T target{};                          // conditioned mass of the representative
  T cumulative{};                      // representative mass plus allocated mass
};

// Audit record of a construction.
//   threshold:  high = {P >= e^{n gamma}/M}, middle = {1/M <= P < e^{n gamma}/M}, pool = rest
//   smooth set: high = B, middle = C \ B, pool = C^c, with C the top-M outcomes
// Zero-mass outcomes are not listed in any set; they are encoded to the stop
// index.
template <MassType T>
struct ConstructionTrace {
  ConstructionKind kind = ConstructionKind::kThreshold;
  int n = 1;
  std::size_t m = 1;
  double gamma = 0.0;
  std::vector<std::size_t> high;
  std::vector<std::size_t> middle;
  std::vector<std::size_t> pool;
  std::vector<std::size_t> representatives;  // high then middle, descending
  std::vector<T> conditioned;                // P restricted to `high`, renormalized
  T high_mass{};
  std::vector<AllocationStep<T>> steps;      // one per representative up to the stop
  std::size_t stop_index = 0;                // 0-based index of the representative taking the remainder
  bool degenerate = false;                   // high set empty, fallback mapping used
  bool identity = false;                     // M covers the support
};

template <MassType T>
struct Construction {
  MappingPair mapping;
  ConstructionTrace<T> trace;
};

// Threshold construction with slack gamma > 0 and M >= 1 indices.
template <MassType T>
Construction<T> build_threshold_mapping(const BasicDistribution<T>& dist, std::size_t m,
                                        double gamma);

// Smooth-set construction: B is the greedy prefix covering f^{-1}(delta), M is
// the smallest integer with log M >= log|B| + n gamma.
template <MassType T>
Construction<T> build_smooth_set_mapping(const BasicDistribution<T>& dist, const FCurve& f,
                                         double delta, double gamma);

// Baseline that keeps the high set and sends every other outcome to index 0.
template <MassType T>
Construction<T> build_naive_mapping(const BasicDistribution<T>& dist, std::size_t m,
                                    double gamma);

// Pushforward of dist under psi(phi(.)).
template <MassType T>
BasicDistribution<T> apply_mapping(const MappingPair& mapping, const BasicDistribution<T>& dist);

template <MassType T>
struct BoundValue {
  EvalType<T> value{};
  bool clamped = false;  // the f argument left (0, 1) and the clamp rule applied
};

// f(Pr{P >= e^{n gamma}/M} - e^{-n gamma}) + e^{-n gamma} f(1/M); f(0) when
// the argument is not positive.
template <MassType T>
BoundValue<T> achievability_bound(const BasicSpectrum<T>& spec, const FCurve& f, std::size_t m,
                                  double gamma);

// f(Pr{P >= e^{-n gamma}/M} + e^{-n gamma}); 0 when the argument reaches 1.
// Holds for every mapping pair with M indices.
template <MassType T>
BoundValue<T> converse_bound(const BasicSpectrum<T>& spec, const FCurve& f, std::size_t m,
                             double gamma);

// Per-instance slack of the smooth-set construction:
//   f((1 - e^{-n gamma}) Pr{B}) - f(Pr{B}) + e^{-n gamma} f(P(x_stop)).
// The construction's divergence never exceeds f(Pr{B}) + slack.
template <MassType T>
EvalType<T> smooth_set_slack(const BasicDistribution<T>& dist, const ConstructionTrace<T>& trace,
                             const FCurve& f);

// Exact divergence of the mapping's pushforward from the source.
template <MassType T>
EvalType<T> mapping_divergence(const FCurve& f, const MappingPair& mapping,
                               const BasicDistribution<T>& dist);

std::string to_string(ConstructionKind kind);

nlohmann::json to_json(const MappingPair& mapping);
template <MassType T>
nlohmann::json to_json(const ConstructionTrace<T>& trace);

}  // namespace srng

#endif  // SRNG_CONSTRUCTION_HPP_
