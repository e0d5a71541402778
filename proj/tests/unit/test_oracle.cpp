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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "srng/oracle.hpp"
#include "support/oracles.hpp"

using namespace srng;

namespace {

FloatDistribution float_masses(std::vector<double> m) { return FloatDistribution::from_masses(std::move(m)); }

ExactDistribution four_atoms() {
  return ExactDistribution::from_masses(
      std::vector<Rational>{Rational(2, 5), Rational(3, 10), Rational(1, 5), Rational(1, 10)});
}

}  // namespace

TEST_CASE("oracle: M at least the support gives zero") {
  const auto d = four_atoms();
  for (std::size_t m : {4, 5}) {
    const auto r = min_fdiv_bruteforce(d, m, FCurve::hellinger());
    CHECK(r.value == 0);
  }
}

TEST_CASE("oracle: two fair atoms into one") {
  const auto r = min_fdiv_bruteforce(float_masses({0.5, 0.5}), 1, FCurve::hellinger());
  CHECK(r.value == doctest::Approx(1 - std::sqrt(0.5)).epsilon(1e-14));
  REQUIRE(r.plan.blocks.size() == 1);
}

TEST_CASE("oracle: four atoms into two, variational") {
  const auto d = four_atoms();
  const auto r = min_fdiv_bruteforce(d, 2, FCurve::variational());
  CHECK(r.value == Real(Rational(3, 10)));
  CHECK(plan_divergence(d, r.plan, FCurve::variational()) == r.value);
  const std::vector<double> p{0.4, 0.3, 0.2, 0.1};
  const auto f = FCurve::variational();
  CHECK(to_double(r.value) ==
        doctest::Approx(srng::testing::min_divergence_all_maps(p, 2, [&](double t) { return f(t); }, 1.0, 0.0))
            .epsilon(1e-12));
}

TEST_CASE("oracle agrees with enumeration of all map pairs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const std::vector<FCurve> curves{FCurve::variational(), FCurve::reverse_kl(), FCurve::hellinger(),
                                   FCurve::e_gamma(2.0)};
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t size = 2 + static_cast<std::size_t>(trial % 4);
    std::vector<double> p(size);
    double total = 0;
    for (auto& x : p) total += (x = u(rng));
    for (auto& x : p) x /= total;
    const auto d = float_masses(p);
    for (int m = 1; m <= 3; ++m) {
      for (const auto& f : curves) {
        const double expected = srng::testing::min_divergence_all_maps(
            p, m, [&](double t) { return f(t); }, f.f_at_zero(), f.slope_at_infinity());
        CHECK(min_fdiv_bruteforce(d, static_cast<std::size_t>(m), f).value ==
              doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("oracle: off-support representatives never help") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> u(1, 9);
  const std::vector<FCurve> curves{FCurve::variational(), FCurve::reverse_kl(), FCurve::hellinger(),
                                   FCurve::e_gamma(1.5)};
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t size = 2 + static_cast<std::size_t>(trial % 4);
    std::vector<Rational> m(size);
    Rational total(0);
    for (auto& x : m) total += (x = u(rng));
    for (auto& x : m) x /= total;
    const auto d = ExactDistribution::from_masses(m);
    for (std::size_t M = 1; M <= 3; ++M) {
      for (const auto& f : curves) {
        OracleLimits wide;
        wide.off_support = true;
        CHECK(min_fdiv_bruteforce(d, M, f, wide).value == min_fdiv_bruteforce(d, M, f).value);
      }
    }
  }
}

TEST_CASE("oracle: plans and canonical forms") {
  const auto d = four_atoms();
  PartitionPlan plan{{{0, 3}, {1, 2}}, {0, 1}};
  const auto mapping = to_mapping(plan, 4, 2);
  // Same function with blocks listed in the other order.
  PartitionPlan swapped{{{1, 2}, {0, 3}}, {1, 0}};
  CHECK(plan_divergence(d, plan, FCurve::hellinger()) == plan_divergence(d, swapped, FCurve::hellinger()));
  CHECK(plan_divergence(d, plan, FCurve::hellinger()) == mapping_divergence(FCurve::hellinger(), mapping, d));
  // A non-canonical pair with an unused index is the same function.
  MappingPair padded{{2, 1, 1, 2}, {3, 1, 0}};
  CHECK(mapping_divergence(FCurve::hellinger(), padded, d) ==
        mapping_divergence(FCurve::hellinger(), mapping, d));
}

TEST_CASE("oracle: cap and thread determinism") {
  std::vector<double> big(11, 1.0 / 11);
  big.back() = 1.0 - 10.0 / 11;
  CHECK_THROWS_AS(min_fdiv_bruteforce(float_masses(big), 2, FCurve::variational()), Error);
  CHECK_THROWS_AS(min_fdiv_bruteforce(four_atoms(), 2, FCurve::variational(), OracleLimits{10, 1}),
                  Error);
  const auto d = ExactDistribution::from_masses(std::vector<Rational>{
      Rational(1, 4), Rational(1, 8), Rational(1, 8), Rational(3, 16), Rational(1, 16), Rational(1, 8),
      Rational(1, 16), Rational(1, 16)});
  OracleLimits one;
  one.threads = 1;
  OracleLimits many;
  many.threads = 8;
  for (const auto& f : {FCurve::hellinger(), FCurve::variational()}) {
    const auto a = min_fdiv_bruteforce(d, 3, f, one);
    const auto b = min_fdiv_bruteforce(d, 3, f, many);
    CHECK(a.value == b.value);
    CHECK(a.plan.blocks == b.plan.blocks);
    CHECK(a.plan.representatives == b.plan.representatives);
    CHECK(a.plans == b.plans);
  }
}

TEST_CASE("min_set_bruteforce") {
  const auto uniform = ExactDistribution::from_masses(std::vector<Rational>(4, Rational(1, 4)));
  CHECK(min_set_bruteforce(uniform, 0.25) == 3);
  CHECK(min_set_bruteforce(four_atoms(), 0.35) == 2);
  CHECK(min_set_bruteforce(four_atoms(), 0.0) == 4);
  CHECK_THROWS_AS(min_set_bruteforce(uniform, 0.1, 3), Error);
}

TEST_CASE("instance hash and fixture files") {
  const auto a = four_atoms();
  const auto b = ExactDistribution::from_masses(
      std::vector<Rational>{Rational(2, 5), Rational(3, 10), Rational(1, 10), Rational(1, 5)});
  CHECK(instance_hash(a) == instance_hash(a));
  CHECK(instance_hash(a) != instance_hash(b));
  CHECK(format_hash(instance_hash(a)).size() == 16);
  const auto path = (std::filesystem::temp_directory_path() / "srng_fixture_roundtrip.csv").string();
  const std::vector<FixtureRow> rows{{format_hash(1), 2, "variational", 0.3},
                                     {format_hash(2), 1, "hellinger", 1 - std::sqrt(0.5)}};
  write_fixtures(path, rows);
  const auto back = read_fixtures(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].hash == rows[1].hash);
  CHECK(back[1].value == rows[1].value);
  CHECK(back[0].curve == "variational");
  std::remove(path.c_str());
}

TEST_CASE("regression fixtures") {
  const auto rows = read_fixtures(SRNG_FIXTURE_DIR "/oracle_fixtures.csv");
  REQUIRE(rows.size() == 36);
  std::vector<ExactDistribution> instances{four_atoms()};
  for (int n : {2, 3}) {
    instances.push_back(expand(iid_source(srng::testing::bernoulli(Rational(1, 4)), n)));
  }
  std::size_t matched = 0;
  for (const auto& d : instances) {
    const auto hash = format_hash(instance_hash(d));
    std::vector<double> p;
    for (const auto& x : d.masses()) p.push_back(to_double(x));
    for (const auto& row : rows) {
      if (row.hash != hash) continue;
      const auto f = FCurve::parse(row.curve);
      const auto r = min_fdiv_bruteforce(d, row.m, f);
      CHECK(to_double(r.value) == doctest::Approx(row.value).epsilon(1e-12));
      // Independent check: enumerate every encoder and decoder.
      const double all_maps = srng::testing::min_divergence_all_maps(
          p, static_cast<int>(row.m), [&](double t) { return f(t); }, f.f_at_zero(), f.slope_at_infinity());
      CHECK(row.value == doctest::Approx(all_maps).epsilon(1e-12));
      ++matched;
    }
  }
  CHECK(matched == rows.size());
}
