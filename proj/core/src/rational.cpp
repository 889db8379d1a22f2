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

#include "semimix/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace semimix {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(text)) {
      throw std::invalid_argument("not a fraction: '" + text + "'");
    }
    return Rational(BigInt(text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw std::invalid_argument("not a fraction: '" + text + "'");
  }
  BigInt d(den);
  if (d == 0) {
    throw std::invalid_argument("zero denominator: '" + text + "'");
  }
  return Rational(BigInt(num), d);
}

std::string format_fraction(const Rational& r) {
  std::string out = numerator(r).str();
  if (denominator(r) != 1) {
    out += "/";
    out += denominator(r).str();
  }
  return out;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

/// ln of a positive big integer: top 53 bits as a double plus the shifted-
/// out exponent, so magnitude is unlimited.
double log_positive(const BigInt& v) {
  const unsigned bits = boost::multiprecision::msb(v);
  if (bits <= 52) return std::log(v.convert_to<double>());
  const BigInt top = v >> (bits - 52);
  return std::log(top.convert_to<double>()) +
         static_cast<double>(bits - 52) * std::log(2.0);
}

}  // namespace

double log_rational(const Rational& r) {
  if (r < 0) throw std::domain_error("log of a negative rational");
  if (r == 0) return -std::numeric_limits<double>::infinity();
  return log_positive(numerator(r)) - log_positive(denominator(r));
}

Rational rational_pow(const Rational& r, unsigned long k) {
  if (k == 0) return Rational(1);
  return Rational(pow(numerator(r), static_cast<unsigned>(k)),
                  pow(denominator(r), static_cast<unsigned>(k)));
}

}  // namespace semimix
