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

#include "srng/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace srng {
namespace {

constexpr double kNearTie = 1e-9;
constexpr std::size_t kMaxCandidates = 256;

using Rgs = std::vector<std::uint8_t>;

// Restricted-growth strings of length n with at most k distinct labels.
std::vector<Rgs> enumerate_partitions(std::size_t n, std::size_t k) {
  std::vector<Rgs> out;
  Rgs a(n, 0);
  std::vector<std::uint8_t> prefix_max(n, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(a);
      return;
    }
    const std::size_t limit = std::min<std::size_t>(k - 1, prefix_max[i - 1] + 1u);
    for (std::size_t label = 0; label <= limit; ++label) {
      a[i] = static_cast<std::uint8_t>(label);
      if (i + 1 < n) prefix_max[i] = std::max<std::uint8_t>(prefix_max[i - 1], a[i]);
      self(self, i + 1);
    }
  };
  if (n == 0) return {Rgs{}};
  prefix_max[0] = 0;
  if (n == 1) return {Rgs{0}};
  rec(rec, 1);
  return out;
}

struct Candidate {
  double cost;
  std::size_t partition;
  std::vector<std::size_t> reps;  // atom index, or atoms.size() for off-support
};

struct ChunkResult {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Candidate> candidates;
  std::size_t plans = 0;
};

bool within(double cost, double best) {
  if (std::isinf(best)) return std::isinf(cost) && cost > 0;
  return cost <= best + kNearTie * std::max(1.0, std::abs(best));
}

void offer(ChunkResult& r, Candidate c) {
  if (c.cost < r.best) {
    r.best = c.cost;
    std::erase_if(r.candidates, [&](const Candidate& x) { return !within(x.cost, r.best); });
  }
  if (within(c.cost, r.best) && r.candidates.size() < kMaxCandidates) {
    r.candidates.push_back(std::move(c));
  }
}

template <MassType T>
PartitionPlan make_plan(const std::vector<std::size_t>& atoms, const Rgs& labels,
                        const std::vector<std::size_t>& reps) {
  PartitionPlan plan;
  plan.blocks.assign(reps.size(), {});
  for (std::size_t i = 0; i < atoms.size(); ++i) plan.blocks[labels[i]].push_back(atoms[i]);
  for (std::size_t r : reps) plan.representatives.push_back(r < atoms.size() ? atoms[r] : kOffSupport);
  return plan;
}

}  // namespace

template <MassType T>
EvalType<T> plan_divergence(const BasicDistribution<T>& dist, const PartitionPlan& plan,
                            const FCurve& f) {
  if (plan.blocks.size() != plan.representatives.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "one representative per block");
  }
  // Support atoms first, then one slot per off-support representative.
  std::vector<std::size_t> atoms;
  for (std::size_t id = 0; id < dist.size(); ++id) {
    if (dist[id] > 0) atoms.push_back(id);
  }
  std::vector<T> p;
  for (std::size_t id : atoms) p.push_back(dist[id]);
  std::vector<T> q(atoms.size(), T(0));
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    T mass(0);
    for (std::size_t id : plan.blocks[b]) mass += dist[id];
    const std::size_t rep = plan.representatives[b];
    if (rep == kOffSupport || !(dist[rep] > 0)) {
      p.push_back(T(0));
      q.push_back(mass);
      continue;
    }
    const auto slot = static_cast<std::size_t>(
        std::lower_bound(atoms.begin(), atoms.end(), rep) - atoms.begin());
    q[slot] += mass;
  }
  return divergence<T>(f, p, q);
}

template <MassType T>
OracleResult<T> min_fdiv_bruteforce(const BasicDistribution<T>& dist, std::size_t m,
                                    const FCurve& f, const OracleLimits& limits) {
  std::vector<std::size_t> atoms;
  for (std::size_t id = 0; id < dist.size(); ++id) {
    if (dist[id] > 0) atoms.push_back(id);
  }
  const std::size_t n_atoms = atoms.size();
  if (m == 0) throw Error(ErrorKind::kOutOfRange, "M must be positive");
  if (n_atoms > limits.max_support || std::min(m, n_atoms) > limits.max_m) {
    throw Error(ErrorKind::kCapExceeded, "oracle limited to support <= " +
                                             std::to_string(limits.max_support) + " and M <= " +
                                             std::to_string(limits.max_m));
  }
  const std::size_t blocks_max = std::min(m, n_atoms);
  const auto partitions = enumerate_partitions(n_atoms, blocks_max);

  std::vector<double> p;
  for (std::size_t id : atoms) p.push_back(to_double(dist[id]));
  const double slope = f.slope_at_infinity();
  const double f0 = f.f_at_zero();

  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    ChunkResult result;
    std::vector<double> q;
    std::vector<std::vector<double>> cost;
    std::vector<std::size_t> reps;
    std::vector<char> used(n_atoms, 0);
    for (std::size_t pi = begin; pi < end; ++pi) {
      const Rgs& labels = partitions[pi];
      const std::size_t k = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
      q.assign(k, 0.0);
      for (std::size_t i = 0; i < n_atoms; ++i) q[labels[i]] += p[i];
      cost.assign(k, std::vector<double>(n_atoms + 1, 0.0));
      for (std::size_t b = 0; b < k; ++b) {
        for (std::size_t a = 0; a < n_atoms; ++a) cost[b][a] = q[b] * f(p[a] / q[b]);
        cost[b][n_atoms] = std::isinf(f0) ? f0 : q[b] * f0;
      }
      reps.assign(k, 0);
      auto dfs = [&](auto&& self, std::size_t b, double partial, double rep_mass,
                     std::size_t on_support) -> void {
        if (b == k) {
          double total = partial;
          if (on_support < n_atoms && slope != 0) {
            total += std::isinf(slope) ? slope : slope * std::max(0.0, 1.0 - rep_mass);
          }
          ++result.plans;
          if (total < result.best || within(total, result.best)) {
            offer(result, Candidate{total, pi, reps});
          }
          return;
        }
        for (std::size_t a = 0; a < n_atoms; ++a) {
          if (used[a]) continue;
          used[a] = 1;
          reps[b] = a;
          self(self, b + 1, partial + cost[b][a], rep_mass + p[a], on_support + 1);
          used[a] = 0;
        }
        if (limits.off_support) {
          reps[b] = n_atoms;
          self(self, b + 1, partial + cost[b][n_atoms], rep_mass, on_support);
        }
      };
      dfs(dfs, 0, 0.0, 0.0, 0);
    }
    return result;
  };

  unsigned threads = limits.threads ? limits.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, partitions.size()));
  const std::size_t chunk = (partitions.size() + threads - 1) / threads;
  std::vector<std::future<ChunkResult>> tasks;
  for (std::size_t begin = 0; begin < partitions.size(); begin += chunk) {
    tasks.push_back(std::async(std::launch::async, run_chunk, begin,
                               std::min(partitions.size(), begin + chunk)));
  }
  std::vector<ChunkResult> chunks;
  for (auto& t : tasks) chunks.push_back(t.get());

  // Deterministic reduction in chunk order.
  double best = std::numeric_limits<double>::infinity();
  std::size_t plans = 0;
  for (const auto& c : chunks) {
    best = std::min(best, c.best);
    plans += c.plans;
  }
  OracleResult<T> out;
  out.plans = plans;
  bool have = false;
  for (const auto& c : chunks) {
    for (const auto& cand : c.candidates) {
      if (!within(cand.cost, best)) continue;
      auto plan = make_plan<T>(atoms, partitions[cand.partition], cand.reps);
      auto value = plan_divergence(dist, plan, f);
      if (!have || value < out.value) {
        out.value = value;
        out.plan = std::move(plan);
        have = true;
      }
    }
  }
  return out;
}

MappingPair to_mapping(const PartitionPlan& plan, std::size_t outcome_count, std::size_t m) {
  if (plan.blocks.empty() || plan.blocks.size() > m) {
    throw Error(ErrorKind::kDimensionMismatch, "plan needs between 1 and M blocks");
  }
  MappingPair mapping;
  mapping.phi.assign(outcome_count, 0);
  mapping.psi.assign(m, 0);
  for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
    const std::size_t rep = plan.representatives[b];
    if (rep == kOffSupport || rep >= outcome_count) {
      throw Error(ErrorKind::kDimensionMismatch, "representative outside the outcome set");
    }
    for (std::size_t id : plan.blocks[b]) mapping.phi[id] = b;
    mapping.psi[b] = rep;
  }
  for (std::size_t b = plan.blocks.size(); b < m; ++b) mapping.psi[b] = plan.representatives[0];
  return mapping;
}

template <MassType T>
std::size_t min_set_bruteforce(const BasicDistribution<T>& dist, double delta,
                               std::size_t max_support) {
  if (!(delta >= 0 && delta < 1)) throw Error(ErrorKind::kOutOfRange, "delta must lie in [0, 1)");
  std::vector<T> masses;
  for (const auto& x : dist.masses()) {
    if (x > 0) masses.push_back(x);
  }
  if (masses.size() > max_support || masses.size() >= 63) {
    throw Error(ErrorKind::kCapExceeded, "subset enumeration limited to support <= " +
                                             std::to_string(max_support));
  }
  const T target = T(1) - from_double<T>(delta);
  std::size_t best = masses.size();
  const std::uint64_t subsets = std::uint64_t{1} << masses.size();
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size >= best) continue;
    T sum(0);
    for (std::size_t i = 0; i < masses.size(); ++i) {
      if (mask >> i & 1u) sum += masses[i];
    }
    if (sum >= target) best = size;
  }
  return best;
}

template <MassType T>
std::uint64_t instance_hash(const BasicDistribution<T>& dist) {
  std::string text = "a=" + std::to_string(dist.alphabet_size()) + ";n=" + std::to_string(dist.n()) + ";";
  for (const auto& x : dist.masses()) {
    if constexpr (std::same_as<T, double>) {
      text += format_double(x);
    } else {
      text += format_rational(x);
    }
    text += ',';
  }
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string format_hash(std::uint64_t hash) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, hash >>= 4) out[static_cast<std::size_t>(i)] = kDigits[hash & 0xf];
  return out;
}

std::vector<FixtureRow> read_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open fixture file " + path);
  std::vector<FixtureRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("hash,", 0) == 0) continue;
    std::stringstream ss(line);
    FixtureRow row;
    std::string m, value;
    if (!std::getline(ss, row.hash, ',') || !std::getline(ss, m, ',') ||
        !std::getline(ss, row.curve, ',') || !std::getline(ss, value)) {
      throw Error(ErrorKind::kConfig, path + ":" + std::to_string(line_no) + ": expected 4 columns");
    }
    try {
      row.m = std::stoul(m);
      row.value = std::stod(value);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kConfig, path + ":" + std::to_string(line_no) + ": malformed number");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_fixtures(const std::string& path, const std::vector<FixtureRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kConfig, "cannot write fixture file " + path);
  out << "hash,m,curve,value\n";
  for (const auto& r : rows) {
    out << r.hash << ',' << r.m << ',' << r.curve << ',' << format_double(r.value) << '\n';
  }
}

template EvalType<double> plan_divergence(const FloatDistribution&, const PartitionPlan&, const FCurve&);
template EvalType<Rational> plan_divergence(const ExactDistribution&, const PartitionPlan&, const FCurve&);
template OracleResult<double> min_fdiv_bruteforce(const FloatDistribution&, std::size_t, const FCurve&,
                                                  const OracleLimits&);
template OracleResult<Rational> min_fdiv_bruteforce(const ExactDistribution&, std::size_t, const FCurve&,
                                                    const OracleLimits&);
template std::size_t min_set_bruteforce(const FloatDistribution&, double, std::size_t);
template std::size_t min_set_bruteforce(const ExactDistribution&, double, std::size_t);
template std::uint64_t instance_hash(const FloatDistribution&);
template std::uint64_t instance_hash(const ExactDistribution&);

}  // namespace srng
