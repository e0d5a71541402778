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

#ifndef SRNG_NUMERIC_HPP_
#define SRNG_NUMERIC_HPP_

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace srng {

// Exact probability masses.
using Rational = boost::multiprecision::mpq_rational;

// Evaluation type for transcendental quantities computed from exact masses.
// 100 decimal digits keeps every comparison exact unless the two sides are
// mathematically equal.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<100>,
    boost::multiprecision::et_off>;

template <class T>
concept MassType = std::same_as<T, double> || std::same_as<T, Rational>;

template <class T>
concept EvalScalar = std::same_as<T, double> || std::same_as<T, Real>;

// Masses of type T are compared against transcendental thresholds in
// EvalType<T>.
template <MassType T>
using EvalType = std::conditional_t<std::same_as<T, double>, double, Real>;

enum class ErrorKind {
  kCapExceeded,
  kInvalidModel,
  kZeroMassOutcome,
  kDimensionMismatch,
  kOutOfRange,
  kNoConvergence,
  kUnachievable,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const Real& x) { return x.convert_to<double>(); }

template <MassType T>
EvalType<T> to_eval(const T& x) {
  if constexpr (std::same_as<T, double>) {
    return x;
  } else {
    return Real(x);
  }
}

// Converts a double to T without rounding (every finite double is a dyadic
// rational).
template <MassType T>
T from_double(double x) {
  if constexpr (std::same_as<T, double>) {
    return x;
  } else {
    return Rational(x);
  }
}

template <MassType T>
T make_fraction(std::int64_t num, std::int64_t den) {
  if constexpr (std::same_as<T, double>) {
    return static_cast<double>(num) / static_cast<double>(den);
  } else {
    return Rational(num, den);
  }
}

// "3/4", "0.25", "1", "2e-3". Fractions and plain decimals are exact;
// exponent notation is rejected here (see parse_probability_text).
// Exact value of a finite multiprecision number.
Rational exact_rational(const Real& x);

Rational parse_rational(std::string_view text);

// Whether `text` is a fraction or a plain decimal literal.
bool is_exact_literal(std::string_view text);

// Shortest round-trip representation.
std::string format_double(double x);

// "p/q" in lowest terms, or "p" when q == 1.
std::string format_rational(const Rational& x);

}  // namespace srng

#endif  // SRNG_NUMERIC_HPP_
