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

#include "srng/rdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srng {
namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kMaxSlope = 1e4;

// Minimum over reconstruction laws q of sum_a p(a) (-log sum_b q(b) e^{-beta g(a,b)}),
// by the multiplicative fixed-point update q_b <- q_b c_b. The optimality gap is
// bounded by log max_b c_b.
class SlopeProblem {
 public:
  SlopeProblem(std::span<const double> pmf, const DistortionSpec& g, const RdOptions& options)
      : options_(options) {
    for (std::size_t a = 0; a < pmf.size(); ++a) {
      if (pmf[a] > 0) {
        p_.push_back(pmf[a]);
        rows_.push_back(g.letter[a]);
      }
    }
    columns_ = g.letter.front().size();
  }

  double value(double beta) const {
    const std::size_t na = p_.size();
    std::vector<std::vector<double>> w(na, std::vector<double>(columns_));
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < columns_; ++b) w[a][b] = std::exp(-beta * rows_[a][b]);
    }
    std::vector<double> q(columns_, 1.0 / static_cast<double>(columns_));
    std::vector<double> z(na), c(columns_);
    const double target = options_.tolerance * 1e-2;
    double gap = std::numeric_limits<double>::infinity();
    double objective = 0.0;
    for (int it = 0; it < options_.max_iterations; ++it) {
      objective = 0.0;
      for (std::size_t a = 0; a < na; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < columns_; ++b) s += q[b] * w[a][b];
        z[a] = s;
        objective -= p_[a] * std::log(s);
      }
      double c_max = 0.0;
      for (std::size_t b = 0; b < columns_; ++b) {
        double s = 0.0;
        for (std::size_t a = 0; a < na; ++a) s += p_[a] * w[a][b] / z[a];
        c[b] = s;
        c_max = std::max(c_max, s);
      }
      gap = std::log(c_max);
      if (gap <= target) return objective;
      double norm = 0.0;
      for (std::size_t b = 0; b < columns_; ++b) norm += q[b] *= c[b];
      for (auto& x : q) x /= norm;
    }
    // Near a slope where a reconstruction letter switches on, convergence is
    // sublinear; the certified gap still bounds the error.
    if (gap <= options_.tolerance) return objective - 0.5 * gap;
    throw Error(ErrorKind::kNoConvergence, "alternating minimization did not converge at slope " +
                                               format_double(beta) + " (gap " + format_double(gap) + ")");
  }

 private:
  std::vector<double> p_;
  std::vector<std::vector<double>> rows_;
  std::size_t columns_ = 0;
  RdOptions options_;
};

}  // namespace

DistortionSpec DistortionSpec::hamming(int alphabet_size) {
  DistortionSpec g;
  const auto k = static_cast<std::size_t>(alphabet_size);
  g.letter.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t a = 0; a < k; ++a) g.letter[a][a] = 0.0;
  return g;
}

void DistortionSpec::validate(int alphabet_size, std::size_t outcome_count) const {
  const auto k = static_cast<std::size_t>(alphabet_size);
  auto check_square = [](const std::vector<std::vector<double>>& m, std::size_t size,
                         const std::string& what) {
    if (m.size() != size) throw Error(ErrorKind::kInvalidModel, what + " has the wrong row count");
    for (std::size_t i = 0; i < size; ++i) {
      if (m[i].size() != size) throw Error(ErrorKind::kInvalidModel, what + " is not square");
      for (double v : m[i]) {
        if (!(v >= 0) || !std::isfinite(v)) {
          throw Error(ErrorKind::kInvalidModel, what + " entries must be finite and nonnegative");
        }
      }
      if (m[i][i] != 0) throw Error(ErrorKind::kInvalidModel, what + " must vanish on the diagonal");
    }
  };
  check_square(letter, k, "distortion matrix");
  if (sequence) check_square(*sequence, outcome_count, "sequence distortion table");
}

double DistortionSpec::block(std::size_t x, std::size_t y, int alphabet_size, int n) const {
  if (sequence) return (*sequence)[x][y];
  const auto k = static_cast<std::size_t>(alphabet_size);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += letter[x % k][y % k];
    x /= k;
    y /= k;
  }
  return total;
}

double DistortionSpec::block_max(int n) const {
  double best = 0.0;
  for (const auto& row : sequence ? *sequence : letter) {
    for (double v : row) best = std::max(best, v);
  }
  return sequence ? best : best * n;
}

bool DistortionSpec::separates_letters() const {
  for (std::size_t a = 0; a < letter.size(); ++a) {
    for (std::size_t b = 0; b < letter[a].size(); ++b) {
      if (a != b && !(letter[a][b] > 0)) return false;
    }
  }
  return true;
}

double rd_max_distortion(std::span<const double> pmf, const DistortionSpec& g) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < g.letter.front().size(); ++b) {
    double e = 0.0;
    for (std::size_t a = 0; a < pmf.size(); ++a) e += pmf[a] * g.letter[a][b];
    best = std::min(best, e);
  }
  return best;
}

double rd_function_iid(std::span<const double> pmf, const DistortionSpec& g, double d,
                       const RdOptions& options) {
  if (!(d >= 0)) throw Error(ErrorKind::kOutOfRange, "distortion level must be nonnegative");
  DistortionSpec{g.letter, std::nullopt}.validate(static_cast<int>(pmf.size()), 0);
  if (d >= rd_max_distortion(pmf, g)) return 0.0;
  if (d == 0 && g.separates_letters()) return entropy(pmf);

  // R(D) = max_{beta >= 0} L(beta) - beta D, concave in beta.
  const SlopeProblem problem(pmf, g, options);
  auto objective = [&](double beta) { return problem.value(beta) - beta * d; };
  double hi = 1.0;
  while (hi < kMaxSlope && objective(2 * hi) > objective(hi)) hi *= 2;
  hi = std::min(2 * hi, kMaxSlope);
  double lo = 0.0;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > options.tolerance * 1e-3 * (1.0 + hi)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = objective(x1);
    }
  }
  return std::max(0.0, std::max(f1, f2));
}

double rdp_lower_bound(double rd_value, double k_f_value) { return std::max(rd_value, k_f_value); }

template <MassType T>
T d_threshold(const BasicSpectrum<T>& spec, const DistortionSpec& g, const FCurve& f,
              double delta) {
  const auto point = k_f_rate(spec, f, EvalType<T>(delta));
  const T scale = from_double<T>(g.block_max(spec.n())) / T(spec.n());
  return scale * spec.mass_from(point.index);
}

template <MassType T>
T mapping_distortion(const MappingPair& mapping, const BasicDistribution<T>& dist,
                     const DistortionSpec& g) {
  if (mapping.phi.size() != dist.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "encoder length differs from the outcome count");
  }
  T total(0);
  for (std::size_t x = 0; x < dist.size(); ++x) {
    if (!(dist[x] > 0)) continue;
    const std::size_t y = mapping.psi.at(mapping.phi[x]);
    if (y == x) continue;
    total += dist[x] * from_double<T>(g.block(x, y, dist.alphabet_size(), dist.n()));
  }
  return total / T(dist.n());
}

template <MassType T>
RdpBoundReport rdp_report(const BasicSourceModel<T>& model, const FCurve& f, double delta,
                          const DistortionSpec& g, double d, std::size_t cap) {
  const auto* iid = std::get_if<IidModel<T>>(&model.variant);
  if (iid == nullptr) throw Error(ErrorKind::kInvalidModel, "rate-distortion needs an IID source");
  const auto dist = expand(model, cap);
  g.validate(model.alphabet_size, dist.size());
  const auto spec = spectrum_cdf(dist);

  std::vector<double> pmf;
  for (const auto& x : iid->pmf) pmf.push_back(to_double(x));

  RdpBoundReport report;
  report.d = d;
  report.delta = delta;
  report.curve = f.name();
  report.n = model.n;
  report.k_f_value = k_f_rate(spec, f, EvalType<T>(delta)).value;
  const T threshold = d_threshold(spec, g, f, delta);
  report.d_threshold = to_double(threshold);
  report.rd_value = rd_function_iid(pmf, g, d);
  report.lower = rdp_lower_bound(report.rd_value, report.k_f_value);
  if (from_double<T>(d) >= threshold) report.upper = report.k_f_value;
  return report;
}

nlohmann::json to_json(const RdpBoundReport& report) {
  nlohmann::json upper = nullptr;
  if (report.upper) upper = *report.upper;
  return {{"D", report.d},
          {"Delta", report.delta},
          {"curve", report.curve},
          {"n", report.n},
          {"lower", report.lower},
          {"upper", upper},
          {"d_threshold", report.d_threshold},
          {"rd_value", report.rd_value},
          {"k_f_value", report.k_f_value}};
}

template double d_threshold(const FloatSpectrum&, const DistortionSpec&, const FCurve&, double);
template Rational d_threshold(const ExactSpectrum&, const DistortionSpec&, const FCurve&, double);
template double mapping_distortion(const MappingPair&, const FloatDistribution&, const DistortionSpec&);
template Rational mapping_distortion(const MappingPair&, const ExactDistribution&,
                                     const DistortionSpec&);
template RdpBoundReport rdp_report(const FloatSourceModel&, const FCurve&, double,
                                   const DistortionSpec&, double, std::size_t);
template RdpBoundReport rdp_report(const ExactSourceModel&, const FCurve&, double,
                                   const DistortionSpec&, double, std::size_t);

}  // namespace srng
