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
#include <random>

#include "doctest.h"
#include "srng/oracle.hpp"
#include "srng/spectrum.hpp"
#include "support/oracles.hpp"

using namespace srng;
using srng::testing::bernoulli;

namespace {

ExactSpectrum bern_spectrum(Rational p, int n) { return spectrum_cdf(expand(iid_source(bernoulli(p), n))); }

ExactDistribution masses(std::initializer_list<Rational> m) {
  return ExactDistribution::from_masses(std::vector<Rational>(m));
}

}  // namespace

TEST_CASE("spectrum_cdf: uniform collapses to one point") {
  const auto spec = spectrum_cdf(expand(iid_source(bernoulli(Rational(1, 2)), 3)));
  REQUIRE(spec.size() == 1);
  CHECK(spec.points()[0].mass == 1);
  CHECK(spec.points()[0].value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("spectrum_cdf: Bern(1/4) at n = 2") {
  const auto spec = bern_spectrum(Rational(1, 4), 2);
  REQUIRE(spec.size() == 3);
  CHECK(spec.points()[0].mass == Rational(9, 16));
  CHECK(spec.points()[1].mass == Rational(6, 16));
  CHECK(spec.points()[2].mass == Rational(1, 16));
  CHECK(spec.points()[0].value == doctest::Approx(0.5 * std::log(16.0 / 9.0)).epsilon(1e-14));
  CHECK(spec.points()[1].value == doctest::Approx(0.5 * std::log(16.0 / 3.0)).epsilon(1e-14));
  CHECK(spec.points()[2].value == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(spec.tail_after(0) == Rational(7, 16));
  CHECK(spec.cdf(1) == Rational(15, 16));
  CHECK(spec.mass_from(1) == Rational(7, 16));
}

TEST_CASE("spectrum_cdf matches the binomial oracle") {
  for (double p : {0.1, 0.3}) {
    for (int n : {3, 7, 10}) {
      const auto spec = spectrum_cdf(expand(iid_source<double>({1 - p, p}, n)));
      const auto ref = srng::testing::binomial_spectrum(p, n);
      REQUIRE(spec.size() == ref.size());
      for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(spec.points()[i].value == doctest::Approx(ref[i].value).epsilon(1e-12));
        CHECK(spec.points()[i].mass == doctest::Approx(ref[i].mass).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("type_class_spectrum agrees with expansion") {
  const auto model = iid_source<double>({0.5, 0.3, 0.2}, 6);
  const auto by_types = type_class_spectrum(model);
  const auto expanded = spectrum_cdf(expand(model));
  REQUIRE(by_types.size() == expanded.size());
  for (std::size_t i = 0; i < by_types.size(); ++i) {
    CHECK(by_types.points()[i].value == doctest::Approx(expanded.points()[i].value).epsilon(1e-12));
    CHECK(by_types.points()[i].mass == doctest::Approx(expanded.points()[i].mass).epsilon(1e-10));
  }
  CHECK_THROWS_AS(type_class_spectrum(iid_source<double>({0.5, 0.5}, 100), 50), Error);
}

TEST_CASE("type_class_spectrum: mixture is bimodal") {
  FloatSourceModel model;
  model.alphabet_size = 2;
  model.n = 400;
  model.variant = MixtureModel<double>{{{0.5, {0.9, 0.1}}, {0.5, {0.5, 0.5}}}};
  const auto spec = type_class_spectrum(model);
  double low = 0.0, high = 0.0;
  for (const auto& pt : spec.points()) {
    if (std::abs(pt.value - srng::testing::binary_entropy(0.1)) < 0.15) low += pt.mass;
    // The fair component sits at log 2 + log(2) / n.
    if (std::abs(pt.value - std::log(2.0)) < 0.01) high += pt.mass;
  }
  CHECK(low == doctest::Approx(0.5).epsilon(0.02));
  CHECK(high == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sup_entropy_quantile") {
  const auto spec = bern_spectrum(Rational(1, 4), 2);
  // Tail beyond the smallest value is 7/16 <= 1/2.
  CHECK(sup_entropy_quantile(spec, Real(Rational(1, 2))).value == doctest::Approx(0.28768207245178).epsilon(1e-12));
  CHECK(sup_entropy_quantile(spec, Real(Rational(2, 5))).value ==
        doctest::Approx(0.5 * std::log(16.0 / 3.0)).epsilon(1e-12));
  CHECK(sup_entropy_quantile(spec, Real(0)).index == 2);
  CHECK(sup_entropy_quantile(spec, Real(Rational(7, 16))).index == 0);
  CHECK(sup_entropy_quantile(spec, Real(Rational(999, 1000))).index == 0);
  const auto fair = bern_spectrum(Rational(1, 2), 4);
  for (double eps : {0.0, 0.3, 0.9}) {
    CHECK(sup_entropy_quantile(fair, Real(eps)).value == doctest::Approx(std::log(2.0)));
  }
  double previous = 1e9;
  for (int i = 0; i < 100; ++i) {
    const double v = sup_entropy_quantile(spec, Real(i / 100.0)).value;
    CHECK(v <= previous);
    previous = v;
  }
}

TEST_CASE("k_f_rate equals the quantile at 1 - f^{-1}(Delta)") {
  const auto spec = bern_spectrum(Rational(1, 4), 3);
  const std::vector<FCurve> curves{FCurve::variational(), FCurve::reverse_kl(), FCurve::hellinger(),
                                   FCurve::e_gamma(1.0), FCurve::e_gamma(2.0), FCurve::e_gamma(5.0)};
  for (const auto& f : curves) {
    for (int i = 0; i < 50; ++i) {
      const Real delta = Real(i) / 50 * Real(std::min(f.f_at_zero(), 2.0)) * Real(0.99);
      const auto k = k_f_rate(spec, f, delta);
      const auto q = sup_entropy_quantile(spec, Real(1) - f.inverse(delta));
      CHECK(k.index == q.index);
    }
  }
  // Reverse KL composition.
  const Real delta(0.105);
  CHECK(k_f_rate(spec, FCurve::reverse_kl(), delta).value ==
        sup_entropy_quantile(spec, Real(1) - exp(-delta)).value);
  CHECK_THROWS_AS(k_f_rate(spec, FCurve::variational(), Real(1)), Error);
}

TEST_CASE("k_f_rate: variational and every E_gamma coincide") {
  const auto spec = bern_spectrum(Rational(2, 5), 4);
  for (int i = 0; i < 40; ++i) {
    const Real delta = Real(i) / 40;
    const auto base = k_f_rate(spec, FCurve::variational(), delta).index;
    CHECK(sup_entropy_quantile(spec, delta).index == base);
    for (double g : {1.0, 1.5, 3.0, 10.0}) CHECK(k_f_rate(spec, FCurve::e_gamma(g), delta).index == base);
  }
}

TEST_CASE("smooth_max_entropy") {
  const auto uniform = expand(iid_source(bernoulli(Rational(1, 2)), 2));
  CHECK(smooth_max_entropy(uniform, 0.25).ids.size() == 3);
  CHECK(smooth_max_entropy(uniform, 0.25).log_size == doctest::Approx(std::log(3.0)));
  CHECK(smooth_max_entropy(uniform, 0.0).ids.size() == 4);
  const auto d = masses({Rational(2, 5), Rational(3, 10), Rational(1, 5), Rational(1, 10)});
  const auto set = smooth_max_entropy(d, 0.35);
  CHECK(set.ids == std::vector<std::size_t>{0, 1});
  CHECK(set.log_size == doctest::Approx(std::log(2.0)));
  CHECK(set.mass == Rational(7, 10));
  // Zero-mass atoms are never needed at delta = 0.
  const auto sparse = masses({Rational(1, 2), Rational(0), Rational(1, 2)});
  CHECK(smooth_max_entropy(sparse, 0.0).ids.size() == 2);
}

TEST_CASE("smooth_max_entropy: greedy prefix is minimal") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(0, 9);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t size = 2 + static_cast<std::size_t>(trial % 11);
    std::vector<Rational> m(size);
    Rational total(0);
    for (auto& x : m) {
      x = u(rng);
      total += x;
    }
    if (total == 0) continue;
    for (auto& x : m) x /= total;
    const auto dist = ExactDistribution::from_masses(m);
    for (double delta : {0.0, 0.1, 0.25, 0.5, 0.9}) {
      const auto greedy = smooth_max_entropy(dist, delta).ids.size();
      CHECK(greedy == srng::testing::min_cover_size(m, Rational(1) - from_double<Rational>(delta)));
      CHECK(greedy == min_set_bruteforce(dist, delta));
    }
  }
}

TEST_CASE("smooth_max_entropy from type classes") {
  for (double p : {0.11, 0.3}) {
    for (int n : {5, 12}) {
      const auto model = iid_source<double>({1 - p, p}, n);
      const auto spec = type_class_spectrum(model);
      const auto dist = expand(model);
      for (double delta : {0.05, 0.2, 0.6}) {
        const double from_types = smooth_max_entropy(spec, delta);
        CHECK(from_types == doctest::Approx(smooth_max_entropy(dist, delta).log_size).epsilon(1e-9));
        CHECK(from_types / n == doctest::Approx(srng::testing::binomial_h0_rate(p, n, 1 - delta)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("rate_convergence_sweep") {
  SweepRequest request;
  request.blocklengths = {1, 4, 16};
  request.deltas = {0.2};
  request.nus = {0.0, 0.05};
  const auto fair = rate_convergence_sweep(iid_source<double>({0.5, 0.5}, 1), request);
  CHECK(fair.rows.size() == 3 * 2 * 2);
  for (const auto& row : fair.rows) {
    if (row.quantity == "k_f_rate") {
      CHECK(row.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    } else {
      // The smallest set is a ceil((1 - level) 2^n) prefix of equal atoms.
      const double coverage = FCurve::variational().inverse(row.delta + row.nu);
      const double expected = std::log(std::ceil(coverage * std::pow(2.0, row.n) - 1e-9)) / row.n;
      CHECK(row.value == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  for (std::size_t i = 1; i < fair.rows.size(); ++i) CHECK(fair.rows[i - 1].n <= fair.rows[i].n);

  SweepRequest big;
  big.blocklengths = {200, 400, 800};
  big.deltas = {0.2};
  const auto skew = rate_convergence_sweep(iid_source<double>({0.89, 0.11}, 1), big);
  for (const auto& row : skew.rows) {
    if (row.n == 800) CHECK(std::abs(row.value - srng::testing::binary_entropy(0.11)) < 0.05);
  }
  FloatSourceModel markov;
  markov.alphabet_size = 2;
  markov.variant = MarkovModel<double>{{0.5, 0.5}, {{0.9, 0.1}, {0.2, 0.8}}};
  SweepRequest capped;
  capped.blocklengths = {30};
  capped.deltas = {0.1};
  capped.cap = 1024;
  CHECK_THROWS_AS(rate_convergence_sweep(markov, capped), Error);
}
