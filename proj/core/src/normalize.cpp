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

#include <stdexcept>

#include "semimix/environment.hpp"
#include "semimix/errors.hpp"

namespace semimix {

namespace {

// Measure obtained by renormalizing each one-symbol conditional of a binary
// semimeasure:
//
//   norm(x_{1:n}) = prod_t  base(x_{1:t}) / (base(x_{<t}0) + base(x_{<t}1))
//
// The empty string gets mass 1. Renormalizing a second time changes nothing
// because the wrapped conditionals already sum to one.
class NormalizedEnv : public Environment {
 public:
  explicit NormalizedEnv(EnvPtr base) : base_(std::move(base)) {}

  Prob mass(const FiniteString& x) const override {
    Prob product = Prob::one(backend());
    FiniteString prefix(x.alphabet());
    for (std::size_t t = 0; t < x.size(); ++t) {
      const Prob m0 = base_->mass(prefix.append(0));
      const Prob m1 = base_->mass(prefix.append(1));
      if (m0.is_zero() && m1.is_zero()) {
        // every previous factor was positive, so this history is reachable
        throw degenerate_error("normalize: dead end at history '" +
                               prefix.to_digits() + "'");
      }
      const Prob numer = x[t] == 1 ? m1 : m0;
      if (numer.is_zero()) return Prob::zero(backend());
      product *= numer / (m0 + m1);
      prefix.push_back(x[t]);
    }
    return product;
  }

  bool is_measure() const override { return true; }
  Alphabet alphabet() const override { return base_->alphabet(); }
  Backend backend() const override { return base_->backend(); }
  std::string kind() const override { return "normalized"; }

 private:
  EnvPtr base_;
};

}  // namespace

EnvPtr normalize(const EnvPtr& env) {
  if (!env) throw std::invalid_argument("normalize: null environment");
  if (env->alphabet().size != 2) {
    throw std::invalid_argument("normalize is defined for binary alphabets");
  }
  if (env->mass(FiniteString(env->alphabet())).is_zero()) {
    throw degenerate_error("normalize: semimeasure with zero total mass");
  }
  return std::make_shared<const NormalizedEnv>(env);
}

}  // namespace semimix
