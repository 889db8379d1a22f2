/*
 * Copyright 2026 The semimix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SEMIMIX_RATIONAL_HPP
#define SEMIMIX_RATIONAL_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace semimix {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" with optional sign; whitespace around tokens is
/// rejected so that serialized fractions round-trip bit-exactly.
/// Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_fraction(const std::string& text);

/// Canonical form: "p/q" in lowest terms, or "p" when the denominator is 1.
std::string format_fraction(const Rational& r);

double to_double(const Rational& r);

/// Natural log of a nonnegative rational, computed from the bit lengths of
/// numerator and denominator so values far below double range (masses of
/// long strings) keep an accurate log. log(0) = -infinity; negative input
/// throws std::domain_error.
double log_rational(const Rational& r);

/// r^k for k >= 0 by exponentiating numerator and denominator.
Rational rational_pow(const Rational& r, unsigned long k);

}  // namespace semimix

#endif  // SEMIMIX_RATIONAL_HPP
