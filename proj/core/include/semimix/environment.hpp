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

#ifndef SEMIMIX_ENVIRONMENT_HPP
#define SEMIMIX_ENVIRONMENT_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "semimix/fstring.hpp"
#include "semimix/prob.hpp"

namespace semimix {

/// Evaluator of a semimeasure on finite strings: x |-> mass that a sequence
/// starts with x. A measure additionally satisfies
/// mass(x) = sum_a mass(xa) and mass(empty) = 1.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual Prob mass(const FiniteString& x) const = 0;

  /// mass(xa)/mass(x); throws zero_history_error when mass(x) = 0.
  virtual Prob conditional(uint8_t a, const FiniteString& x) const;

  virtual bool is_measure() const = 0;
  virtual Alphabet alphabet() const = 0;
  virtual Backend backend() const = 0;
  virtual std::string kind() const = 0;
};

using EnvPtr = std::shared_ptr<const Environment>;

/// i.i.d. coin with bias theta = P(1); binary alphabet.
class BernoulliEnv : public Environment {
 public:
  BernoulliEnv(Rational theta, Backend backend = Backend::exact);

  Prob mass(const FiniteString& x) const override;
  Prob conditional(uint8_t a, const FiniteString& x) const override;
  bool is_measure() const override { return true; }
  Alphabet alphabet() const override { return Alphabet(2); }
  Backend backend() const override { return backend_; }
  std::string kind() const override { return "bernoulli"; }

  const Rational& theta() const { return theta_; }

 private:
  Rational theta_;
  Backend backend_;
};

/// i.i.d. symbol distribution over an alphabet of any size; the per-symbol
/// probabilities may sum to less than one, giving an i.i.d. semimeasure.
class IidEnv : public Environment {
 public:
  IidEnv(std::vector<Rational> probs, Backend backend = Backend::exact);

  Prob mass(const FiniteString& x) const override;
  Prob conditional(uint8_t a, const FiniteString& x) const override;
  bool is_measure() const override { return measure_; }
  Alphabet alphabet() const override { return Alphabet(static_cast<int>(probs_.size())); }
  Backend backend() const override { return backend_; }
  std::string kind() const override { return "iid"; }

  const std::vector<Rational>& probs() const { return probs_; }

 private:
  std::vector<Rational> probs_;
  Backend backend_;
  bool measure_;
};

/// Point mass on one infinite sequence omega = preamble . period^infinity.
class DeterministicEnv : public Environment {
 public:
  DeterministicEnv(FiniteString preamble, FiniteString period);

  Prob mass(const FiniteString& x) const override;
  Prob conditional(uint8_t a, const FiniteString& x) const override;
  bool is_measure() const override { return true; }
  Alphabet alphabet() const override { return preamble_.alphabet(); }
  Backend backend() const override { return Backend::exact; }
  std::string kind() const override { return "deterministic"; }

  uint8_t target_symbol(std::size_t t) const;  // omega_t, 0-based
  const FiniteString& preamble() const { return preamble_; }
  const FiniteString& period() const { return period_; }

 private:
  FiniteString preamble_;
  FiniteString period_;
};

/// Binary measure with time-dependent rate mu(1 | x_{<t}) = coeff * t^(-power).
/// The rate is stored exactly; masses are running products accumulated in log
/// space (compensated), so this environment always evaluates on the
/// log-domain backend no matter which backend the caller prefers.
class VariableRateEnv : public Environment {
 public:
  VariableRateEnv(Rational coeff, unsigned power);

  Prob mass(const FiniteString& x) const override;
  Prob conditional(uint8_t a, const FiniteString& x) const override;
  bool is_measure() const override { return true; }
  Alphabet alphabet() const override { return Alphabet(2); }
  Backend backend() const override { return Backend::logfloat; }
  std::string kind() const override { return "variable-rate"; }

  /// rate at step t (1-based) as a double; exact parameters via accessors.
  double rate(std::size_t t) const;
  const Rational& coeff() const { return coeff_; }
  unsigned power() const { return power_; }

 private:
  Rational coeff_;
  unsigned power_;
};

/// Escape hatch for arbitrary evaluators (test semimeasures and the like).
class CustomEnv : public Environment {
 public:
  using Evaluator = std::function<Prob(const FiniteString&)>;

  CustomEnv(Evaluator eval, Alphabet a, bool is_measure, Backend backend,
            std::string label = "custom");

  Prob mass(const FiniteString& x) const override { return eval_(x); }
  bool is_measure() const override { return measure_; }
  Alphabet alphabet() const override { return alphabet_; }
  Backend backend() const override { return backend_; }
  std::string kind() const override { return label_; }

 private:
  Evaluator eval_;
  Alphabet alphabet_;
  bool measure_;
  Backend backend_;
  std::string label_;
};

/// Converts a binary semimeasure with positive total mass into the measure
/// whose mass is the product of renormalized conditionals along the string.
/// The result dominates the input pointwise. Throws degenerate_error when a
/// reachable history has both one-symbol extensions at mass zero.
EnvPtr normalize(const EnvPtr& env);

/// Draws n symbols from a measure by walking sequential conditionals with a
/// seeded generator; identical seeds give identical strings.
FiniteString sample(const Environment& env, uint64_t seed, std::size_t n);

}  // namespace semimix

#endif  // SEMIMIX_ENVIRONMENT_HPP
