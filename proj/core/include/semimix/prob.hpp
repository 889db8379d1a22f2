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

#ifndef SEMIMIX_PROB_HPP
#define SEMIMIX_PROB_HPP

#include <stdexcept>
#include <string>

#include "semimix/logfloat.hpp"
#include "semimix/rational.hpp"

namespace semimix {

enum class Backend { exact, logfloat };

std::string backend_name(Backend b);
Backend parse_backend(const std::string& name);

/// Nonnegative mass/weight scalar with a per-value backend: an exact
/// arbitrary-precision rational, or a log-domain double. Arithmetic between
/// two exact values stays exact; as soon as a log-domain operand is involved
/// the result is log-domain (exact -> approximate is the only direction).
class Prob {
 public:
  Prob() : backend_(Backend::exact), exact_(0) {}

  static Prob exact(const Rational& r) {
    if (r < 0) throw std::invalid_argument("Prob requires a nonnegative value");
    return Prob(r);
  }
  static Prob approx(LogFloat v) { return Prob(v); }
  static Prob zero(Backend b) {
    return b == Backend::exact ? exact(Rational(0)) : approx(LogFloat());
  }
  static Prob one(Backend b) {
    return b == Backend::exact ? exact(Rational(1)) : approx(LogFloat::from_linear(1.0));
  }

  Backend backend() const { return backend_; }
  bool is_exact() const { return backend_ == Backend::exact; }
  bool is_zero() const { return is_exact() ? exact_ == 0 : approx_.is_zero(); }

  /// The underlying rational; only valid for the exact backend.
  const Rational& rational() const {
    if (!is_exact()) throw std::logic_error("Prob: log-domain value has no exact rational");
    return exact_;
  }

  LogFloat log_value() const {
    // Exact values go through log_rational: long-string masses live far
    // below double range, where from_linear(to_double(...)) would flush
    // them to zero.
    return is_exact() ? LogFloat::from_log(log_rational(exact_)) : approx_;
  }

  double value() const { return is_exact() ? to_double(exact_) : approx_.linear(); }
  double log() const { return log_value().log(); }

  /// Same value re-expressed on the log-domain backend.
  Prob to_approx() const { return approx(log_value()); }

  friend Prob operator+(const Prob& a, const Prob& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.exact_ + b.exact_);
    return approx(a.log_value() + b.log_value());
  }
  friend Prob operator*(const Prob& a, const Prob& b) {
    if (a.is_exact() && b.is_exact()) return exact(a.exact_ * b.exact_);
    return approx(a.log_value() * b.log_value());
  }
  friend Prob operator/(const Prob& a, const Prob& b) {
    if (b.is_zero()) throw std::domain_error("Prob: division by zero mass");
    if (a.is_exact() && b.is_exact()) return exact(a.exact_ / b.exact_);
    return approx(a.log_value() / b.log_value());
  }

  Prob& operator+=(const Prob& o) { *this = *this + o; return *this; }
  Prob& operator*=(const Prob& o) { *this = *this * o; return *this; }

  // Comparisons are exact when both sides are exact, otherwise on logs.
  friend bool operator==(const Prob& a, const Prob& b) {
    if (a.is_exact() && b.is_exact()) return a.exact_ == b.exact_;
    return a.log_value() == b.log_value();
  }
  friend bool operator<(const Prob& a, const Prob& b) {
    if (a.is_exact() && b.is_exact()) return a.exact_ < b.exact_;
    return a.log_value() < b.log_value();
  }
  friend bool operator<=(const Prob& a, const Prob& b) { return a < b || a == b; }
  friend bool operator>(const Prob& a, const Prob& b) { return b < a; }
  friend bool operator>=(const Prob& a, const Prob& b) { return b <= a; }

 private:
  explicit Prob(const Rational& r) : backend_(Backend::exact), exact_(r) {}
  explicit Prob(LogFloat v) : backend_(Backend::logfloat), exact_(0), approx_(v) {}

  Backend backend_;
  Rational exact_;
  LogFloat approx_;
};

}  // namespace semimix

#endif  // SEMIMIX_PROB_HPP
