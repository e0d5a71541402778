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

#include "srng/numeric.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <string>

namespace srng {

using boost::multiprecision::mpz_int;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kCapExceeded:
      return "CapExceeded";
    case ErrorKind::kInvalidModel:
      return "InvalidModel";
    case ErrorKind::kZeroMassOutcome:
      return "ZeroMassOutcome";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kOutOfRange:
      return "OutOfRange";
    case ErrorKind::kNoConvergence:
      return "NoConvergence";
    case ErrorKind::kUnachievable:
      return "Unachievable";
    case ErrorKind::kConfig:
      return "ConfigError";
  }
  return "Error";
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

std::string_view strip_sign(std::string_view s, bool* negative) {
  *negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    *negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

bool is_decimal(std::string_view s) {
  bool negative = false;
  s = strip_sign(s, &negative);
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return all_digits(s);
  const auto whole = s.substr(0, dot);
  const auto frac = s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return false;
  return (whole.empty() || all_digits(whole)) && (frac.empty() || all_digits(frac));
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  s = strip_sign(s, &negative);
  const auto dot = s.find('.');
  std::string digits;
  std::size_t scale = 0;
  if (dot == std::string_view::npos) {
    digits = std::string(s);
  } else {
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    scale = s.size() - dot - 1;
  }
  // A leading zero would select octal parsing.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (digits.empty()) digits = "0";
  mpz_int num(digits);
  mpz_int den = boost::multiprecision::pow(mpz_int(10), static_cast<unsigned>(scale));
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

}  // namespace

bool is_exact_literal(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return is_decimal(text);
  return is_decimal(text.substr(0, slash)) && is_decimal(text.substr(slash + 1));
}

Rational exact_rational(const Real& x) {
  if (!boost::multiprecision::isfinite(x)) {
    throw Error(ErrorKind::kOutOfRange, "no exact rational for a non-finite value");
  }
  Rational out;
  mpfr_get_q(out.backend().data(), x.backend().data());
  return out;
}

Rational parse_rational(std::string_view text) {
  if (!is_exact_literal(text)) {
    throw Error(ErrorKind::kConfig, "not an exact rational literal: '" + std::string(text) + "'");
  }
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) {
    throw Error(ErrorKind::kConfig, "zero denominator in '" + std::string(text) + "'");
  }
  return num / den;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

std::string format_rational(const Rational& x) {
  const auto num = boost::multiprecision::numerator(x);
  const auto den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace srng
