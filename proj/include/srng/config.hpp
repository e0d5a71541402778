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

// Run configuration: a key = value text file, one key per line, `#` starts a
// comment. List values are separated by whitespace or commas; matrix rows by
// `;`. Repeatable keys: `component` (`weight : pmf`).
//
//   variant    = iid | markov | mixture    (or give `masses` for a raw pmf)
//   alphabet   = 2
//   pmf        = 3/4 1/4
//   initial    = 1/2 1/2
//   transition = 0.9 0.1 ; 0.2 0.8
//   component  = 1/2 : 0.9 0.1
//   masses     = 0.4 0.3 0.2 0.1
//   n          = 1 2 3  |  100:1000:100
//   curve      = variational e_gamma:2
//   delta, gamma, eps, nu, smooth, D = real lists
//   M          = 1 2 4
//   distortion = hamming | 0 1 ; 1 0
//   mode       = auto | exact | float
//   fixtures   = path/to/fixtures.csv
//   cap        = 16777216

#ifndef SRNG_CONFIG_HPP_
#define SRNG_CONFIG_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srng/probability.hpp"
#include "srng/rdp.hpp"

namespace srng {

enum class ArithmeticMode { kAuto, kExact, kFloat };
enum class Units { kNats, kBits };

struct RunConfig {
  std::string variant = "iid";  // iid, markov, mixture or masses
  int alphabet = 0;
  std::vector<std::string> pmf;
  std::vector<std::string> initial;
  std::vector<std::vector<std::string>> transition;
  std::vector<std::pair<std::string, std::vector<std::string>>> components;
  std::vector<std::string> masses;

  std::vector<int> n{1};
  std::vector<std::string> curves{"variational"};
  std::vector<double> deltas;
  std::vector<double> gammas;
  std::vector<double> eps;
  std::vector<double> nus{0.0};
  std::vector<double> smooth;  // delta levels for H_0 directly
  std::vector<double> distortions;
  std::vector<std::size_t> ms;
  std::optional<std::vector<std::vector<double>>> distortion_matrix;  // nullopt: Hamming
  std::optional<std::string> fixtures;
  ArithmeticMode mode = ArithmeticMode::kAuto;
  std::size_t cap = kDefaultOutcomeCap;
  Units units = Units::kNats;

  // Whether every probability literal is a fraction or a plain decimal.
  bool literals_exact() const;
  // Exact unless the mode or the literals force floating arithmetic.
  bool use_exact() const;
  DistortionSpec distortion() const;
};

// Throws Error(kConfig) with "origin:line: message" on malformed input.
RunConfig parse_config(std::string_view text, std::string_view origin = "config");
RunConfig load_config(const std::string& path);

// The configured source at blocklength n.
template <MassType T>
BasicSourceModel<T> build_model(const RunConfig& config, int n);

// P_{X^n} for the configured source; raw masses ignore n.
template <MassType T>
BasicDistribution<T> build_distribution(const RunConfig& config, int n);

}  // namespace srng

#endif  // SRNG_CONFIG_HPP_
