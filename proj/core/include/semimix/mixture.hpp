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

#ifndef SEMIMIX_MIXTURE_HPP
#define SEMIMIX_MIXTURE_HPP

#include <memory>
#include <vector>

#include "semimix/environment.hpp"

namespace semimix {

/// Finite weighted family of environments evaluated as
/// xi(x) = sum_nu w_nu nu(x), with sum_nu w_nu <= 1 and every w_nu > 0.
/// The mixture dominates each component: xi(x) >= w_nu nu(x).
class MixtureModel : public Environment {
 public:
  struct Component {
    Prob weight;
    EnvPtr env;
  };

  explicit MixtureModel(std::vector<Component> components);

  Prob mass(const FiniteString& x) const override;
  bool is_measure() const override { return measure_; }
  Alphabet alphabet() const override { return components_.front().env->alphabet(); }
  Backend backend() const override { return backend_; }
  std::string kind() const override { return "mixture"; }

  const std::vector<Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  const Prob& weight_sum() const { return weight_sum_; }

 private:
  std::vector<Component> components_;
  Prob weight_sum_;
  Backend backend_;
  bool measure_;
};

using MixturePtr = std::shared_ptr<const MixtureModel>;

/// Convenience constructor from parallel weight/environment lists.
MixturePtr make_mixture(const std::vector<Rational>& weights,
                        const std::vector<EnvPtr>& envs);

/// Posterior component weights after observing a history:
/// w_n^theta = w_theta nu_theta(x) / xi(x). For measure components these sum
/// to exactly one on the exact backend.
struct PosteriorState {
  FiniteString history;
  std::vector<Prob> weights;
};

PosteriorState posterior_weights(const MixtureModel& mix, const FiniteString& x);

/// One-step predictive distribution xi(a|x) = xi(xa)/xi(x), one entry per
/// symbol. Throws zero_history_error when xi(x) = 0.
std::vector<Prob> predictive(const MixtureModel& mix, const FiniteString& x);

}  // namespace semimix

#endif  // SEMIMIX_MIXTURE_HPP
