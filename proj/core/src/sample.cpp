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

#include <random>
#include <stdexcept>

#include "semimix/environment.hpp"

namespace semimix {

FiniteString sample(const Environment& env, uint64_t seed, std::size_t n) {
  if (!env.is_measure()) {
    throw std::invalid_argument("sample requires a measure (semimeasures leak mass)");
  }
  std::mt19937_64 rng(seed);
  const int a_size = env.alphabet().size;

  FiniteString x(env.alphabet());
  for (std::size_t t = 0; t < n; ++t) {
    // top 53 bits of the generator word; unlike uniform_real_distribution,
    // this draws the same doubles on every standard library
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double cum = 0.0;
    int picked = -1;
    int last_positive = -1;
    for (int a = 0; a < a_size; ++a) {
      const double p = env.conditional(static_cast<uint8_t>(a), x).value();
      if (p > 0.0) last_positive = a;
      cum += p;
      if (u < cum) {
        picked = a;
        break;
      }
    }
    // round-off can leave cum slightly below 1; fall back to the last
    // symbol that had positive conditional mass
    if (picked < 0) picked = last_positive;
    if (picked < 0) throw std::logic_error("sample: measure with no successor mass");
    x.push_back(static_cast<uint8_t>(picked));
  }
  return x;
}

}  // namespace semimix
