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

#ifndef SEMIMIX_LOGFLOAT_HPP
#define SEMIMIX_LOGFLOAT_HPP

#include <cmath>
#include <limits>

namespace semimix {

/// Nonnegative scalar stored as its natural logarithm. Zero is -infinity.
/// Addition uses the usual log1p(exp(..)) rearrangement so that sums of
/// many small masses stay stable; products and quotients are exact up to
/// double rounding on the log scale.
class LogFloat {
 public:
  LogFloat() : log_(-std::numeric_limits<double>::infinity()) {}

  static LogFloat from_log(double lv) { return LogFloat(lv); }

  static LogFloat from_linear(double v) {
    if (v < 0) v = 0;  // guard tiny negative round-off from callers
    return LogFloat(std::log(v));
  }

  double log() const { return log_; }
  double linear() const { return std::exp(log_); }
  bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

  LogFloat operator*(LogFloat o) const { return LogFloat(log_ + o.log_); }
  LogFloat operator/(LogFloat o) const { return LogFloat(log_ - o.log_); }

  LogFloat operator+(LogFloat o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    // keep the larger exponent outside the exp to avoid overflow
    if (log_ >= o.log_) return LogFloat(log_ + std::log1p(std::exp(o.log_ - log_)));
    return LogFloat(o.log_ + std::log1p(std::exp(log_ - o.log_)));
  }

  LogFloat& operator*=(LogFloat o) { log_ += o.log_; return *this; }
  LogFloat& operator+=(LogFloat o) { *this = *this + o; return *this; }

  bool operator==(LogFloat o) const { return log_ == o.log_; }
  bool operator<(LogFloat o) const { return log_ < o.log_; }
  bool operator<=(LogFloat o) const { return log_ <= o.log_; }
  bool operator>(LogFloat o) const { return log_ > o.log_; }
  bool operator>=(LogFloat o) const { return log_ >= o.log_; }

 private:
  explicit LogFloat(double lv) : log_(lv) {}
  double log_;
};

}  // namespace semimix

#endif  // SEMIMIX_LOGFLOAT_HPP
