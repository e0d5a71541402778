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


// Acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "srng/commands.hpp"
#include "srng/config.hpp"
#include "srng/construction.hpp"
#include "srng/oracle.hpp"
#include "srng/rdp.hpp"
#include "srng/spectrum.hpp"
#include "support/oracles.hpp"

using namespace srng;

namespace {

struct Instance {
  std::string name;
  ExactDistribution dist;
};

struct Verdict {
  bool pass = true;
  std::size_t checks = 0;
  std::string first_failure;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

ExactSourceModel mixture(int n, const Rational& w, const Rational& p1, const Rational& p2) {
  ExactSourceModel model;
  model.alphabet_size = 2;
  model.n = n;
  model.variant = MixtureModel<Rational>{{{w, srng::testing::bernoulli(p1)},
                                          {Rational(1) - w, srng::testing::bernoulli(p2)}}};
  return model;
}

std::vector<Instance> source_grid() {
  std::vector<Instance> out;
  for (int n = 1; n <= 8; ++n) {
    out.push_back({"uniform2 n=" + std::to_string(n),
                   expand(iid_source(srng::testing::bernoulli(Rational(1, 2)), n))});
  }
  for (int n = 1; n <= 5; ++n) {
    out.push_back({"uniform3 n=" + std::to_string(n),
                   expand(iid_source(std::vector<Rational>(3, Rational(1, 3)), n))});
  }
  for (const Rational p : {Rational(1, 10), Rational(1, 4), Rational(2, 5)}) {
    for (int n = 1; n <= 8; ++n) {
      out.push_back({"bern(" + format_rational(p) + ") n=" + std::to_string(n),
                     expand(iid_source(srng::testing::bernoulli(p), n))});
    }
  }
  for (int n = 1; n <= 8; ++n) {
    out.push_back({"mixA n=" + std::to_string(n),
                   expand(mixture(n, Rational(1, 2), Rational(1, 10), Rational(1, 2)))});
    out.push_back({"mixB n=" + std::to_string(n),
                   expand(mixture(n, Rational(3, 10), Rational(1, 5), Rational(7, 10)))});
  }
  out.push_back({"pmf(0.4,0.3,0.2,0.1)",
                 ExactDistribution::from_masses({Rational(2, 5), Rational(3, 10), Rational(1, 5),
                                                 Rational(1, 10)})});
  return out;
}

std::vector<FCurve> sandwich_curves() {
  return {FCurve::variational(), FCurve::reverse_kl(), FCurve::hellinger(),
          FCurve::e_gamma(1.0),  FCurve::e_gamma(2.0), FCurve::e_gamma(5.0)};
}

const std::vector<double> kGammas{0.02, 0.1, 0.5};

std::vector<std::size_t> m_grid(std::size_t support) {
  std::vector<std::size_t> out;
  for (std::size_t m : {1, 2, 3, 4, 5, 6, 8, 11, 16, 23, 32, 45, 64, 91, 128, 181, 256}) {
    if (m < support) out.push_back(m);
  }
  out.push_back(support);
  return out;
}

std::string describe(const Instance& inst, const std::string& curve, std::size_t m, double gamma) {
  return inst.name + " " + curve + " M=" + std::to_string(m) + " gamma=" + format_double(gamma);
}

// 1. Achievability and converse bounds sandwich the threshold construction.
Verdict sandwich(const std::vector<Instance>& grid) {
  Verdict out;
  std::size_t instances = 0;
  for (const auto& inst : grid) {
    const auto spec = spectrum_cdf(inst.dist);
    const auto fdist = to_floating(inst.dist);
    const auto fspec = spectrum_cdf(fdist);
    for (std::size_t m : m_grid(inst.dist.size())) {
      for (double gamma : kGammas) {
        const auto exact = build_threshold_mapping(inst.dist, m, gamma);
        const auto approx = build_threshold_mapping(fdist, m, gamma);
        for (const auto& f : sandwich_curves()) {
          ++instances;
          const auto where = describe(inst, f.name(), m, gamma);
          const Real value = mapping_divergence(f, exact.mapping, inst.dist);
          out.expect(converse_bound(spec, f, m, gamma).value <= value, "exact converse: " + where);
          out.expect(value <= achievability_bound(spec, f, m, gamma).value, "exact achievability: " + where);
          const double fv = mapping_divergence(f, approx.mapping, fdist);
          out.expect(converse_bound(fspec, f, m, gamma).value <= fv + 1e-10, "float converse: " + where);
          out.expect(fv <= achievability_bound(fspec, f, m, gamma).value + 1e-10,
                     "float achievability: " + where);
        }
      }
    }
  }
  out.expect(instances >= 200, "grid smaller than 200 instances");
  out.detail = std::to_string(instances) + " instances";
  return out;
}

// 2. The exhaustive optimum lies between the converse bound and the construction.
Verdict oracle_gap(const std::vector<Instance>& grid) {
  Verdict out;
  std::size_t instances = 0;
  for (const auto& inst : grid) {
    if (inst.dist.size() > 8) continue;
    const auto spec = spectrum_cdf(inst.dist);
    for (std::size_t m = 1; m <= 3; ++m) {
      for (const auto& f : sandwich_curves()) {
        const auto best = min_fdiv_bruteforce(inst.dist, m, f);
        for (double gamma : kGammas) {
          ++instances;
          const auto where = describe(inst, f.name(), m, gamma);
          const auto c = build_threshold_mapping(inst.dist, m, gamma);
          out.expect(converse_bound(spec, f, m, gamma).value <= best.value, "converse: " + where);
          out.expect(best.value <= mapping_divergence(f, c.mapping, inst.dist), "construction: " + where);
        }
      }
    }
  }
  out.detail = std::to_string(instances) + " (instance, M, curve, gamma) cells";
  return out;
}

// 3. K_f equals the tail quantile at 1 - f^{-1}(Delta); E_gamma does not depend on gamma.
Verdict quantile_identities(const std::vector<Instance>& grid) {
  Verdict out;
  const std::vector<FCurve> curves{FCurve::variational(), FCurve::reverse_kl(), FCurve::hellinger(),
                                   FCurve::e_gamma(1.0), FCurve::e_gamma(2.0), FCurve::e_gamma(5.0)};
  std::size_t comparisons = 0;
  for (const auto& inst : grid) {
    const auto spec = spectrum_cdf(inst.dist);
    std::vector<Rational> levels;
    for (int i = 0; i < 100; ++i) levels.emplace_back(i, 100);
    // Levels sitting exactly on a tail mass, and on f(F) for the square-root curve.
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (spec.tail_after(i) < 1) levels.push_back(spec.tail_after(i));
    }
    for (const auto& f : curves) {
      std::vector<Rational> deltas = levels;
      if (f.kind() == CurveKind::kReverseKl) {
        for (int i = 100; i < 300; i += 7) deltas.emplace_back(i, 100);
      }
      if (f.kind() == CurveKind::kHellinger) {
        // 1 - sqrt(F) is rational when F is a rational square.
        for (int a = 1; a < 20; ++a) deltas.emplace_back(a, 20);
      }
      for (const auto& delta : deltas) {
        if (!(Real(delta) < Real(f.f_at_zero()))) continue;
        ++comparisons;
        const auto where = inst.name + " " + f.name() + " Delta=" + format_rational(delta);
        if (const auto inv = f.inverse_exact(delta)) {
          const auto k = k_f_rate_exact(spec, f, delta);
          const auto q = sup_entropy_quantile_exact(spec, Rational(1) - *inv);
          out.expect(k.index == q.index, where);
        } else {
          const auto k = k_f_rate(spec, f, Real(delta));
          const auto q = sup_entropy_quantile(spec, Real(1) - f.inverse(Real(delta)));
          out.expect(k.index == q.index, where);
        }
      }
    }
    for (const auto& delta : levels) {
      const auto base = k_f_rate_exact(spec, FCurve::variational(), delta).index;
      for (double g : {1.0, 1.5, 2.0, 5.0, 10.0}) {
        ++comparisons;
        out.expect(k_f_rate_exact(spec, FCurve::e_gamma(g), delta).index == base,
                   inst.name + " e_gamma:" + format_double(g) + " Delta=" + format_rational(delta));
      }
    }
  }
  out.detail = std::to_string(comparisons) + " comparisons";
  return out;
}

// 4. Greedy smooth sets are minimal; the type-class H_0 rate settles at h(0.11).
Verdict smooth_entropy(const std::vector<Instance>& grid) {
  Verdict out;
  std::vector<ExactDistribution> small;
  for (const auto& inst : grid) {
    if (inst.dist.size() <= 14) small.push_back(inst.dist);
  }
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> weight(0, 30);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t size = 2 + static_cast<std::size_t>(trial % 13);
    std::vector<Rational> masses(size);
    Rational total(0);
    for (auto& x : masses) total += (x = weight(rng));
    if (total == 0) continue;
    for (auto& x : masses) x /= total;
    small.push_back(ExactDistribution::from_masses(masses));
  }
  std::size_t checks = 0;
  for (const auto& dist : small) {
    for (double delta : {0.0, 0.05, 0.1, 0.2, 0.25, 0.35, 0.5, 0.75, 0.9}) {
      ++checks;
      out.expect(smooth_max_entropy(dist, delta).ids.size() == min_set_bruteforce(dist, delta),
                 "greedy vs subsets, delta=" + format_double(delta));
    }
  }

  SweepRequest request;
  for (int n = 100; n <= 1000; n += 25) request.blocklengths.push_back(n);
  request.deltas = {0.2};
  const auto sweep = rate_convergence_sweep(iid_source<double>({0.89, 0.11}, 1), request);
  std::vector<double> h0;
  for (const auto& row : sweep.rows) {
    if (row.quantity == "h0_rate") h0.push_back(row.value);
  }
  const double target = srng::testing::binary_entropy(0.11);
  out.expect(h0.size() == request.blocklengths.size(), "sweep row count");
  out.expect(std::abs(h0.back() - target) <= 0.05, "n=1000 value " + format_double(h0.back()));
  bool down = true, up = true;
  for (std::size_t i = 1; i < h0.size(); ++i) {
    down = down && h0[i] <= h0[i - 1] + 0.005;
    up = up && h0[i] >= h0[i - 1] - 0.005;
  }
  out.expect(down || up, "trend is not monotone within 0.005");
  out.detail = std::to_string(checks) + " subset checks; (1/n)H_0 at n=1000 is " + format_double(h0.back()) +
               " vs " + format_double(target) + (down ? ", nonincreasing" : ", nondecreasing");
  return out;
}

// 5. E_gamma divergence forms agree exactly; condition flags per curve.
Verdict conventions() {
  Verdict out;
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<int> weight(0, 9);
  std::uniform_int_distribution<int> length(2, 6);
  int pairs = 0;
  while (pairs < 100) {
    const auto size = static_cast<std::size_t>(length(rng));
    std::vector<Rational> p(size), q(size);
    Rational sp(0), sq(0);
    for (std::size_t i = 0; i < size; ++i) {
      sp += (p[i] = weight(rng));
      sq += (q[i] = weight(rng));
    }
    if (sp == 0 || sq == 0) continue;
    for (auto& x : p) x /= sp;
    for (auto& x : q) x /= sq;
    ++pairs;
    for (const Rational g : {Rational(1), Rational(3, 2), Rational(2), Rational(5)}) {
      const auto curve = FCurve::e_gamma(to_double(g));
      out.expect(*divergence_exact(curve, p, q) == e_gamma_direct<Rational>(p, q, g),
                 "E_gamma forms differ at gamma=" + format_rational(g));
    }
  }
  for (const auto& f : {FCurve::variational(), FCurve::reverse_kl(), FCurve::hellinger(), FCurve::e_gamma(2.0)}) {
    const auto r = check_conditions(f);
    out.expect(r.verdict().monotone && r.verdict().tail && r.verdict().vanishing, f.name() + " should pass");
    out.expect(r.consistent(), f.name() + " numeric flags disagree");
  }
  const auto kl = check_conditions(FCurve::kl());
  out.expect(!kl.verdict().monotone, "kl should fail monotonicity");
  out.expect(kl.consistent(), "kl numeric flags disagree");
  out.detail = "100 rational pairs, 5 curves";
  return out;
}

// 6. Rate-distortion solver accuracy; construction distortion stays below the threshold.
Verdict rate_distortion(const std::vector<Instance>& grid) {
  Verdict out;
  double worst = 0.0;
  for (double p : {0.5, 0.25, 0.1}) {
    const std::vector<double> pmf{1 - p, p};
    for (int i = 0; i <= 22; ++i) {
      const double d = 0.01 + 0.02 * i;
      const double err = std::abs(rd_function_iid(pmf, DistortionSpec::hamming(2), d) - srng::testing::binary_rd(p, d));
      worst = std::max(worst, err);
      out.expect(err <= 1e-6, "rd p=" + format_double(p) + " D=" + format_double(d));
    }
  }
  std::size_t cells = 0;
  for (const auto& inst : grid) {
    const auto spec = spectrum_cdf(inst.dist);
    const auto g = DistortionSpec::hamming(inst.dist.alphabet_size());
    for (const auto& f : sandwich_curves()) {
      for (double delta : {0.05, 0.2, 0.5}) {
        const auto kf = k_f_rate(spec, f, Real(delta));
        const Rational threshold = d_threshold(spec, g, f, delta);
        for (double gamma : kGammas) {
          // log M = n (K_f + gamma), rounded up.
          const Real m_real = ceil(exp(Real(inst.dist.n()) * Real(gamma)) / Real(spec.points()[kf.index].atom_mass));
          const std::size_t m = m_real > Real(1e15) ? std::size_t(1e15) : m_real.convert_to<std::size_t>();
          const auto c = build_threshold_mapping(inst.dist, m, gamma);
          ++cells;
          out.expect(mapping_distortion(c.mapping, inst.dist, g) <= threshold,
                     describe(inst, f.name(), m, gamma) + " Delta=" + format_double(delta));
        }
      }
    }
  }
  out.detail = "max RD error " + format_double(worst) + "; " + std::to_string(cells) + " threshold cells";
  return out;
}

// 7. Every command twice in exact mode, byte-identical.
Verdict determinism() {
  Verdict out;
  const std::vector<std::string> configs{
      "alphabet = 2\npmf = 3/4 1/4\nn = 1 2 3 4\ncurve = variational reverse_kl hellinger e_gamma:2\n"
      "delta = 0.1 0.3\ngamma = 0.05 0.1\nM = 1 2 3 4\neps = 0.1 0.4 0.5\nsmooth = 0.25\nD = 0.05 0.2\n",
      "masses = 0.4 0.3 0.2 0.1\ncurve = variational hellinger\ndelta = 0.35\ngamma = 0.1 0.2\nM = 1 2 3\n"
      "eps = 0.3\nsmooth = 0.35\nD = 0.1\n",
      "alphabet = 2\ncomponent = 1/2 : 9/10 1/10\ncomponent = 1/2 : 1/2 1/2\nn = 2 3\n"
      "curve = hellinger\ndelta = 0.2\ngamma = 0.1\nM = 2 3\neps = 0.2\nmode = exact\n"};
  std::size_t files = 0;
  for (const auto& text : configs) {
    const auto cfg = parse_config(text);
    out.expect(cfg.use_exact(), "config not in exact mode");
    for (const char* name : {"analyze", "construct", "oracle", "rdp", "sweep"}) {
      // Rate-distortion needs an IID source; sweeps need a source model.
      const std::string command(name);
      if (command == "rdp" && cfg.variant == "mixture") continue;
      if (command == "sweep" && cfg.variant == "masses") continue;
      const auto first = run_command(name, cfg);
      const auto second = run_command(name, cfg);
      files += first.files.size();
      out.expect(first.files == second.files, std::string(name) + " output differs between runs");
    }
  }
  out.detail = std::to_string(files) + " files compared";
  return out;
}

}  // namespace

int main() {
  const auto grid = source_grid();
  struct Criterion {
    const char* label;
    std::function<Verdict()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria{
      {"1 bound sandwich", [&] { return sandwich(grid); }, 60},
      {"2 oracle optimality gap", [&] { return oracle_gap(grid); }, 120},
      {"3 quantile and K_f identities", [&] { return quantile_identities(grid); }, 0},
      {"4 smooth max entropy", [&] { return smooth_entropy(grid); }, 0},
      {"5 conventions and conditions", [] { return conventions(); }, 0},
      {"6 rate-distortion-perception", [&] { return rate_distortion(grid); }, 0},
      {"7 determinism", [] { return determinism(); }, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.first_failure = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      result.pass = false;
      if (result.first_failure.empty()) result.first_failure = "over the time budget";
    }
    std::printf("[%s] criterion %s: %s (%.2fs)%s%s\n", result.pass ? "PASS" : "FAIL", c.label,
                result.detail.c_str(), seconds, result.pass ? "" : " first failure: ",
                result.pass ? "" : result.first_failure.c_str());
    failures += result.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
