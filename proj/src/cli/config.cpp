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

#include "srng/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "srng/fdivergence.hpp"

namespace srng {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string token;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

std::vector<std::string> split_rows(std::string_view s) {
  std::vector<std::string> rows;
  std::size_t start = 0;
  while (true) {
    const auto semi = s.find(';', start);
    rows.push_back(trim(s.substr(start, semi == std::string_view::npos ? s.npos : semi - start)));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return rows;
}

double parse_real(const std::string& token) {
  if (is_exact_literal(token) && token.find('/') != std::string::npos) {
    return to_double(parse_rational(token));
  }
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::kConfig, "not a number: '" + token + "'");
  return value;
}

long long parse_integer(const std::string& token) {
  long long value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::kConfig, "not an integer: '" + token + "'");
  return value;
}

std::vector<double> parse_reals(std::string_view value) {
  std::vector<double> out;
  for (const auto& t : split_list(value)) out.push_back(parse_real(t));
  return out;
}

std::vector<int> parse_blocklengths(std::string_view value) {
  std::vector<int> out;
  for (const auto& t : split_list(value)) {
    const auto first = t.find(':');
    if (first == std::string::npos) {
      out.push_back(static_cast<int>(parse_integer(t)));
      continue;
    }
    const auto second = t.find(':', first + 1);
    const long long lo = parse_integer(t.substr(0, first));
    const long long hi = parse_integer(t.substr(first + 1, second == std::string::npos ? t.npos : second - first - 1));
    const long long step = second == std::string::npos ? 1 : parse_integer(t.substr(second + 1));
    if (step <= 0 || hi < lo) throw Error(ErrorKind::kConfig, "bad range '" + t + "'");
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
  }
  for (int n : out) {
    if (n < 1) throw Error(ErrorKind::kConfig, "blocklengths must be positive");
  }
  return out;
}

template <MassType T>
T parse_probability(const std::string& token) {
  if constexpr (std::same_as<T, Rational>) {
    if (!is_exact_literal(token)) {
      throw Error(ErrorKind::kConfig, "'" + token + "' is not exact; use --float");
    }
    return parse_rational(token);
  } else {
    return parse_real(token);
  }
}

template <MassType T>
std::vector<T> parse_probabilities(const std::vector<std::string>& tokens) {
  std::vector<T> out;
  for (const auto& t : tokens) out.push_back(parse_probability<T>(t));
  return out;
}

void require_nonempty(const std::vector<double>& v, const char* key) {
  if (v.empty()) throw Error(ErrorKind::kConfig, std::string(key) + " must not be empty");
}

}  // namespace

bool RunConfig::literals_exact() const {
  auto all = [](const std::vector<std::string>& v) {
    return std::all_of(v.begin(), v.end(), [](const std::string& t) { return is_exact_literal(t); });
  };
  if (!all(pmf) || !all(initial) || !all(masses)) return false;
  for (const auto& row : transition) {
    if (!all(row)) return false;
  }
  for (const auto& [w, p] : components) {
    if (!is_exact_literal(w) || !all(p)) return false;
  }
  return true;
}

bool RunConfig::use_exact() const {
  switch (mode) {
    case ArithmeticMode::kExact: return true;
    case ArithmeticMode::kFloat: return false;
    case ArithmeticMode::kAuto: return literals_exact();
  }
  return false;
}

DistortionSpec RunConfig::distortion() const {
  const int size = variant == "masses" ? static_cast<int>(masses.size()) : alphabet;
  if (!distortion_matrix) return DistortionSpec::hamming(size);
  DistortionSpec g;
  g.letter = *distortion_matrix;
  g.validate(size, 0);
  return g;
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool have_variant = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::kConfig, where + "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "variant") {
        if (value != "iid" && value != "markov" && value != "mixture") {
          throw Error(ErrorKind::kConfig, "variant must be iid, markov or mixture");
        }
        config.variant = value;
        have_variant = true;
      } else if (key == "alphabet") {
        config.alphabet = static_cast<int>(parse_integer(value));
      } else if (key == "pmf") {
        config.pmf = split_list(value);
      } else if (key == "initial") {
        config.initial = split_list(value);
      } else if (key == "transition") {
        config.transition.clear();
        for (const auto& row : split_rows(value)) config.transition.push_back(split_list(row));
        if (!have_variant) config.variant = "markov";
      } else if (key == "component") {
        const auto colon = value.find(':');
        if (colon == std::string::npos) throw Error(ErrorKind::kConfig, "component needs 'weight : pmf'");
        config.components.emplace_back(trim(std::string_view(value).substr(0, colon)),
                                       split_list(std::string_view(value).substr(colon + 1)));
        if (!have_variant) config.variant = "mixture";
      } else if (key == "masses") {
        config.masses = split_list(value);
        if (!have_variant) config.variant = "masses";
      } else if (key == "n") {
        config.n = parse_blocklengths(value);
      } else if (key == "curve") {
        config.curves = split_list(value);
        for (const auto& c : config.curves) FCurve::parse(c);
      } else if (key == "delta") {
        config.deltas = parse_reals(value);
      } else if (key == "gamma") {
        config.gammas = parse_reals(value);
        for (double g : config.gammas) {
          if (!(g > 0)) throw Error(ErrorKind::kConfig, "gamma must be positive");
        }
      } else if (key == "eps") {
        config.eps = parse_reals(value);
      } else if (key == "nu") {
        config.nus = parse_reals(value);
        require_nonempty(config.nus, "nu");
      } else if (key == "smooth") {
        config.smooth = parse_reals(value);
      } else if (key == "D") {
        config.distortions = parse_reals(value);
      } else if (key == "M") {
        config.ms.clear();
        for (const auto& t : split_list(value)) {
          const long long m = parse_integer(t);
          if (m < 1) throw Error(ErrorKind::kConfig, "M must be positive");
          config.ms.push_back(static_cast<std::size_t>(m));
        }
      } else if (key == "distortion") {
        if (value == "hamming") {
          config.distortion_matrix.reset();
        } else {
          std::vector<std::vector<double>> rows;
          for (const auto& row : split_rows(value)) rows.push_back(parse_reals(row));
          config.distortion_matrix = std::move(rows);
        }
      } else if (key == "mode") {
        if (value == "auto") {
          config.mode = ArithmeticMode::kAuto;
        } else if (value == "exact") {
          config.mode = ArithmeticMode::kExact;
        } else if (value == "float") {
          config.mode = ArithmeticMode::kFloat;
        } else {
          throw Error(ErrorKind::kConfig, "mode must be auto, exact or float");
        }
      } else if (key == "fixtures") {
        config.fixtures = value;
      } else if (key == "cap") {
        const long long cap = parse_integer(value);
        if (cap < 1) throw Error(ErrorKind::kConfig, "cap must be positive");
        config.cap = static_cast<std::size_t>(cap);
      } else {
        throw Error(ErrorKind::kConfig, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      // Prefix the location; strip the kind tag the inner error already carries.
      std::string what = e.what();
      const auto colon = what.find(": ");
      if (colon != std::string::npos) what = what.substr(colon + 2);
      throw Error(ErrorKind::kConfig, where + what);
    }
  }
  if (config.variant == "masses") {
    if (config.masses.empty()) throw Error(ErrorKind::kConfig, std::string(origin) + ": masses is empty");
  } else if (config.alphabet < 1) {
    throw Error(ErrorKind::kConfig, std::string(origin) + ": alphabet must be a positive integer");
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

template <MassType T>
BasicSourceModel<T> build_model(const RunConfig& config, int n) {
  BasicSourceModel<T> model;
  model.n = n;
  if (config.variant == "masses") {
    model.alphabet_size = static_cast<int>(config.masses.size());
    model.variant = IidModel<T>{parse_probabilities<T>(config.masses)};
  } else if (config.variant == "iid") {
    model.alphabet_size = config.alphabet;
    model.variant = IidModel<T>{parse_probabilities<T>(config.pmf)};
  } else if (config.variant == "markov") {
    model.alphabet_size = config.alphabet;
    MarkovModel<T> markov;
    markov.initial = parse_probabilities<T>(config.initial);
    for (const auto& row : config.transition) markov.transition.push_back(parse_probabilities<T>(row));
    model.variant = std::move(markov);
  } else {
    model.alphabet_size = config.alphabet;
    MixtureModel<T> mixture;
    for (const auto& [w, pmf] : config.components) {
      mixture.components.push_back({parse_probability<T>(w), parse_probabilities<T>(pmf)});
    }
    model.variant = std::move(mixture);
  }
  model.validate();
  return model;
}

template <MassType T>
BasicDistribution<T> build_distribution(const RunConfig& config, int n) {
  if (config.variant == "masses") return BasicDistribution<T>::from_masses(parse_probabilities<T>(config.masses));
  return expand(build_model<T>(config, n), config.cap);
}

template BasicSourceModel<double> build_model(const RunConfig&, int);
template BasicSourceModel<Rational> build_model(const RunConfig&, int);
template BasicDistribution<double> build_distribution(const RunConfig&, int);
template BasicDistribution<Rational> build_distribution(const RunConfig&, int);

}  // namespace srng
