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

#ifndef SEMIMIX_SUMMATION_HPP
#define SEMIMIX_SUMMATION_HPP

#include <cmath>

namespace semimix {

/// Neumaier-compensated running sum. Long products are accumulated as sums
/// of logs through one of these, so every prefix of a 10^6-term product is
/// available online with error at the last-ulp level.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::isfinite(t)) {
      if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
      } else {
        comp_ += (x - t) + sum_;
      }
    } else {
      // An infinite term saturates the sum; the compensation term would
      // otherwise turn into inf - inf = NaN.
      comp_ = 0.0;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace semimix

#endif  // SEMIMIX_SUMMATION_HPP
