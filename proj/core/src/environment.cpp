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

#include "semimix/environment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "semimix/errors.hpp"
#include "semimix/summation.hpp"

namespace semimix {

std::string backend_name(Backend b) {
  return b == Backend::exact ? "exact" : "logfloat";
}

Backend parse_backend(const std::string& name) {
  if (name == "exact") return Backend::exact;
  if (name == "logfloat") return Backend::logfloat;
  throw std::invalid_argument("unknown backend '" + name + "'");
}

Prob Environment::conditional(uint8_t a, const FiniteString& x) const {
  const Prob px = mass(x);
  if (px.is_zero()) {
    throw zero_history_error("conditional on history of mass zero");
  }
  return mass(x.append(a)) / px;
}

// ---------------------------------------------------------------- Bernoulli

BernoulliEnv::BernoulliEnv(Rational theta, Backend backend)
    : theta_(std::move(theta)), backend_(backend) {
  if (theta_ < 0 || theta_ > 1) {
    throw std::invalid_argument("bernoulli parameter outside [0,1]");
  }
}

Prob BernoulliEnv::mass(const FiniteString& x) const {
  const std::size_t n1 = x.count(1);
  const std::size_t n0 = x.size() - n1;
  if (backend_ == Backend::exact) {
    return Prob::exact(rational_pow(theta_, n1) * rational_pow(1 - theta_, n0));
  }
  const double lt = std::log(to_double(theta_));
  const double lf = std::log(to_double(1 - theta_));
  double lv = 0.0;
  if (n1 > 0) lv += static_cast<double>(n1) * lt;  // keeps 0 * -inf out
  if (n0 > 0) lv += static_cast<double>(n0) * lf;
  return Prob::approx(LogFloat::from_log(lv));
}

Prob BernoulliEnv::conditional(uint8_t a, const FiniteString& x) const {
  const Prob px = mass(x);
  if (px.is_zero()) throw zero_history_error("conditional on history of mass zero");
  const Rational p = a == 1 ? theta_ : 1 - theta_;
  return backend_ == Backend::exact
             ? Prob::exact(p)
             : Prob::approx(LogFloat::from_linear(to_double(p)));
}

// --------------------------------------------------------------------- iid

IidEnv::IidEnv(std::vector<Rational> probs, Backend backend)
    : probs_(std::move(probs)), backend_(backend) {
  if (probs_.size() < 2 || probs_.size() > 256) {
    throw std::invalid_argument("iid distribution needs between 2 and 256 symbols");
  }
  Rational sum(0);
  for (const auto& p : probs_) {
    if (p < 0 || p > 1) throw std::invalid_argument("iid probability outside [0,1]");
    sum += p;
  }
  if (sum > 1) throw std::invalid_argument("iid probabilities sum above 1");
  measure_ = (sum == 1);
}

Prob IidEnv::mass(const FiniteString& x) const {
  if (backend_ == Backend::exact) {
    Rational m(1);
    for (std::size_t a = 0; a < probs_.size(); ++a) {
      const std::size_t k = x.count(static_cast<uint8_t>(a));
      if (k > 0) m *= rational_pow(probs_[a], k);
    }
    return Prob::exact(m);
  }
  double lv = 0.0;
  for (std::size_t a = 0; a < probs_.size(); ++a) {
    const std::size_t k = x.count(static_cast<uint8_t>(a));
    if (k > 0) lv += static_cast<double>(k) * std::log(to_double(probs_[a]));
  }
  return Prob::approx(LogFloat::from_log(lv));
}

Prob IidEnv::conditional(uint8_t a, const FiniteString& x) const {
  const Prob px = mass(x);
  if (px.is_zero()) throw zero_history_error("conditional on history of mass zero");
  const Rational& p = probs_.at(a);
  return backend_ == Backend::exact
             ? Prob::exact(p)
             : Prob::approx(LogFloat::from_linear(to_double(p)));
}

// ------------------------------------------------------------ deterministic

DeterministicEnv::DeterministicEnv(FiniteString preamble, FiniteString period)
    : preamble_(std::move(preamble)), period_(std::move(period)) {
  if (period_.empty()) {
    throw std::invalid_argument("deterministic target needs a nonempty period");
  }
  if (!(preamble_.alphabet() == period_.alphabet())) {
    throw std::invalid_argument("preamble and period alphabets differ");
  }
}

uint8_t DeterministicEnv::target_symbol(std::size_t t) const {
  if (t < preamble_.size()) return preamble_[t];
  return period_[(t - preamble_.size()) % period_.size()];
}

Prob DeterministicEnv::mass(const FiniteString& x) const {
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (x[t] != target_symbol(t)) return Prob::zero(Backend::exact);
  }
  return Prob::one(Backend::exact);
}

Prob DeterministicEnv::conditional(uint8_t a, const FiniteString& x) const {
  if (mass(x).is_zero()) throw zero_history_error("conditional on history of mass zero");
  return a == target_symbol(x.size()) ? Prob::one(Backend::exact)
                                      : Prob::zero(Backend::exact);
}

// ------------------------------------------------------------ variable rate

VariableRateEnv::VariableRateEnv(Rational coeff, unsigned power)
    : coeff_(std::move(coeff)), power_(power) {
  if (coeff_ < 0 || coeff_ > 1) {
    throw std::invalid_argument("variable-rate coefficient outside [0,1]");
  }
}

double VariableRateEnv::rate(std::size_t t) const {
  return to_double(coeff_) / std::pow(static_cast<double>(t), static_cast<double>(power_));
}

Prob VariableRateEnv::mass(const FiniteString& x) const {
  CompensatedSum log_mass;
  for (std::size_t t = 1; t <= x.size(); ++t) {
    const double f = rate(t);
    const double lf = x[t - 1] == 1 ? std::log(f) : std::log1p(-f);
    if (lf == -std::numeric_limits<double>::infinity()) {
      return Prob::zero(Backend::logfloat);
    }
    log_mass.add(lf);
  }
  return Prob::approx(LogFloat::from_log(log_mass.value()));
}

Prob VariableRateEnv::conditional(uint8_t a, const FiniteString& x) const {
  if (mass(x).is_zero()) throw zero_history_error("conditional on history of mass zero");
  const double f = rate(x.size() + 1);
  return Prob::approx(a == 1 ? LogFloat::from_linear(f)
                             : LogFloat::from_log(std::log1p(-f)));
}

// ------------------------------------------------------------------ custom

CustomEnv::CustomEnv(Evaluator eval, Alphabet a, bool is_measure, Backend backend,
                     std::string label)
    : eval_(std::move(eval)),
      alphabet_(a),
      measure_(is_measure),
      backend_(backend),
      label_(std::move(label)) {
  if (!eval_) throw std::invalid_argument("custom environment needs an evaluator");
}

}  // namespace semimix
