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

#include "semimix/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "semimix/errors.hpp"

namespace semimix {

MixtureModel::MixtureModel(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("mixture needs at least one component");
  }
  const Alphabet a = components_.front().env->alphabet();
  backend_ = Backend::exact;
  bool all_measures = true;
  for (const auto& c : components_) {
    if (!c.env) throw std::invalid_argument("mixture component without environment");
    if (!(c.env->alphabet() == a)) {
      throw std::invalid_argument("mixture components disagree on the alphabet");
    }
    if (c.weight.is_zero()) {
      throw std::invalid_argument("mixture weights must be strictly positive");
    }
    if (!c.weight.is_exact() || c.env->backend() == Backend::logfloat) {
      backend_ = Backend::logfloat;
    }
    all_measures = all_measures && c.env->is_measure();
  }
  weight_sum_ = Prob::zero(Backend::exact);
  for (const auto& c : components_) weight_sum_ += c.weight;
  if (weight_sum_.is_exact()) {
    if (weight_sum_.rational() > 1) {
      throw std::invalid_argument("mixture weights sum above 1");
    }
    measure_ = all_measures && weight_sum_.rational() == 1;
  } else {
    if (weight_sum_.log() > 1e-9) {
      throw std::invalid_argument("mixture weights sum above 1");
    }
    measure_ = all_measures && std::abs(weight_sum_.log()) <= 1e-12;
  }
}

Prob MixtureModel::mass(const FiniteString& x) const {
  Prob total = Prob::zero(backend_);
  for (const auto& c : components_) {
    Prob term = c.weight * c.env->mass(x);
    total += backend_ == Backend::logfloat ? term.to_approx() : term;
  }
  return total;
}

MixturePtr make_mixture(const std::vector<Rational>& weights,
                        const std::vector<EnvPtr>& envs) {
  if (weights.size() != envs.size()) {
    throw std::invalid_argument("weight/environment count mismatch");
  }
  std::vector<MixtureModel::Component> cs;
  cs.reserve(envs.size());
  for (std::size_t i = 0; i < envs.size(); ++i) {
    cs.push_back({Prob::exact(weights[i]), envs[i]});
  }
  return std::make_shared<const MixtureModel>(std::move(cs));
}

PosteriorState posterior_weights(const MixtureModel& mix, const FiniteString& x) {
  const Prob xi = mix.mass(x);
  if (xi.is_zero()) {
    throw zero_history_error("posterior on history of mixture mass zero");
  }
  PosteriorState state{x, {}};
  state.weights.reserve(mix.size());
  for (const auto& c : mix.components()) {
    state.weights.push_back(c.weight * c.env->mass(x) / xi);
  }
  return state;
}

std::vector<Prob> predictive(const MixtureModel& mix, const FiniteString& x) {
  const Prob xi = mix.mass(x);
  if (xi.is_zero()) {
    throw zero_history_error("predictive on history of mixture mass zero");
  }
  std::vector<Prob> out;
  const int n = mix.alphabet().size;
  out.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    out.push_back(mix.mass(x.append(static_cast<uint8_t>(a))) / xi);
  }
  return out;
}

}  // namespace semimix
