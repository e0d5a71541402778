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

// Exhaustive ground truth on tiny instances.

#ifndef SRNG_ORACLE_HPP_
#define SRNG_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "srng/construction.hpp"
#include "srng/fdivergence.hpp"
#include "srng/probability.hpp"

namespace srng {

// Representative standing for an outcome outside the support.
inline constexpr std::size_t kOffSupport = std::numeric_limits<std::size_t>::max();

// Any composition psi(phi(.)) restricted to the support is a partition of the
// support atoms into at most M blocks, each sent to its own representative.
struct PartitionPlan {
  std::vector<std::vector<std::size_t>> blocks;  // outcome ids
  std::vector<std::size_t> representatives;      // outcome id or kOffSupport
};

struct OracleLimits {
  std::size_t max_support = 10;
  std::size_t max_m = 4;
  // Also let each block be represented by an off-support outcome.
  bool off_support = false;
  // Worker count; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

template <MassType T>
struct OracleResult {
  EvalType<T> value{};
  PartitionPlan plan;
  std::size_t plans = 0;  // (partition, representative) pairs scored
};

// min over plans of D_f(P || Q(plan)). Ties resolve to the first plan in
// restricted-growth-string order, representatives in lexicographic order.
template <MassType T>
OracleResult<T> min_fdiv_bruteforce(const BasicDistribution<T>& dist, std::size_t m,
                                    const FCurve& f, const OracleLimits& limits = {});

// A mapping realizing the plan. Requires on-support representatives.
MappingPair to_mapping(const PartitionPlan& plan, std::size_t outcome_count, std::size_t m);

// Divergence of a plan computed from the plan itself (sentinels allowed).
template <MassType T>
EvalType<T> plan_divergence(const BasicDistribution<T>& dist, const PartitionPlan& plan,
                            const FCurve& f);

// min |A| over all A with Pr{A} >= 1 - delta, by subset enumeration.
template <MassType T>
std::size_t min_set_bruteforce(const BasicDistribution<T>& dist, double delta,
                               std::size_t max_support = 14);

// FNV-1a over the textual masses, for fixture lookup.
template <MassType T>
std::uint64_t instance_hash(const BasicDistribution<T>& dist);

std::string format_hash(std::uint64_t hash);

struct FixtureRow {
  std::string hash;
  std::size_t m = 0;
  std::string curve;
  double value = 0.0;
};

std::vector<FixtureRow> read_fixtures(const std::string& path);
void write_fixtures(const std::string& path, const std::vector<FixtureRow>& rows);

}  // namespace srng

#endif  // SRNG_ORACLE_HPP_
