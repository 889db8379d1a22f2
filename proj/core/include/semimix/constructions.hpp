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

// Counterexample machinery: coin classes with a gap, KL-balanced biases,
// greedy sequences that track an off-class frequency, and diagonalization
// constructions against discrete semimeasures and continuous predictors.

#ifndef SEMIMIX_CONSTRUCTIONS_HPP
#define SEMIMIX_CONSTRUCTIONS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semimix/environment.hpp"
#include "semimix/mixture.hpp"
#include "semimix/rational.hpp"

namespace semimix::constructions {

/// Finite family of coin biases with prior weights; the coins are the
/// Bernoulli environments B(theta), the mixture is their weighted sum.
class ThetaClass {
 public:
  ThetaClass(std::vector<Rational> thetas, std::vector<Rational> weights);

  const std::vector<Rational>& thetas() const { return thetas_; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::size_t size() const { return thetas_.size(); }

  bool contains(const Rational& theta) const;
  /// Index of an exact member; throws std::invalid_argument otherwise.
  std::size_t index_of(const Rational& theta) const;

  MixturePtr mixture(Backend backend = Backend::exact) const;
 private:
  std::vector<Rational> thetas_;
  std::vector<Rational> weights_;
};

/// Binary KL divergence D(p || q) = p ln(p/q) + (1-p) ln((1-p)/(1-q)) in
/// nats, with 0 ln 0 := 0. q in {0, 1} is only admissible when p matches it
/// exactly (divergence 0); any other combination is infinite and throws
/// std::domain_error rather than returning inf.
double kl_divergence(double p, double q);
double kl_divergence(const Rational& p, const Rational& q);

/// For biases theta0 < theta1, the unique frequency theta_bar strictly
/// between them at which both coins explain a sequence equally well:
/// D(theta_bar||theta0) = D(theta_bar||theta1). lipschitz_c is the slope
/// constant c = ln(theta1 (1-theta0) / (theta0 (1-theta1))); the posterior
/// log odds between the two coins after n symbols with n1 ones equal
/// c * (n1 - n theta_bar) plus the prior log odds.
struct GapCertificate {
  Rational theta0;
  Rational theta1;
  double theta_bar = 0;
  double lipschitz_c = 0;
};

/// Requires 0 < theta0 < theta1 < 1 (std::invalid_argument otherwise;
/// theta0 == theta1 throws degenerate_error).
GapCertificate kl_middle(const Rational& theta0, const Rational& theta1);

/// True when no other member of the class lies in [theta0, theta1]; both
/// endpoints must be members (std::invalid_argument otherwise).
bool gap_check(const ThetaClass& cls, const Rational& theta0, const Rational& theta1);

/// Greedy bit sequence whose running ones-count n1 tracks k * theta_bar as
/// closely as integers allow: bit k+1 is 1 exactly when that strictly
/// lowers |n1 - (k+1) theta_bar| (ties resolve to 0). The construction
/// keeps |n1 - k theta_bar| < 1 for every k; it is deterministic, yet no
/// single coin in a class straddling theta_bar ever fits it.
FiniteString doubly_random_sequence(double theta_bar, std::size_t n);

/// A semimeasure on the natural numbers given by an exact evaluator; the
/// declared mass_bound (<= 1) is trusted as the bound on any partial sum
/// and cross-checked during enumeration.
struct DiscreteSemimeasure {
  std::function<Rational(std::uint64_t)> eval;
  Rational mass_bound = 1;
};

/// Witness for one chunk I_n = {2^(n-1), ..., 2^n - 1}: the argmin x_n of p
/// over the chunk (ties to the smallest point), the mass q places there,
/// and the certified ratio bound p(x_n)/q(x_n) <= n(n+1)/2^(n-1).
struct ChunkWitness {
  int n = 0;
  std::uint64_t x_n = 0;
  Rational p_at_x;
  Rational q_at_x;
  Rational ratio_bound;
  bool holds = false;
};

/// The measure q built from chunk argminima of p: q(x_n) = 1/(n(n+1)) and 0
/// elsewhere. p fails to dominate q with any constant as the chunk count
/// grows, even though q's mass telescopes to chunk_count/(chunk_count+1).
struct DiscreteDiagonalization {
  std::vector<ChunkWitness> chunks;
  DiscreteSemimeasure q;
  Rational q_partial_mass;
};

/// Enumerates chunk_count chunks (at most 30: the last chunk alone has
/// 2^29 points; beyond that throws horizon_error). Throws
/// std::invalid_argument when p's partial sums are caught exceeding its
/// declared mass bound.
DiscreteDiagonalization discrete_diagonalize(const DiscreteSemimeasure& p,
                                             int chunk_count);

/// Adversarial path against a binary predictor mu: each step extends the
/// path with mu's least likely next symbol (exact comparison; ties to 0),
/// so mu(path) <= (1/2 + 2 eps)^n while the deterministic measure rho
/// concentrated on the path assigns it mass 1. Result bundles the path, rho
/// (period "0" beyond the path), and mu's log-mass profile along it.
struct AdversarialPath {
  FiniteString path;
  EnvPtr rho;
  std::vector<double> mu_log_mass;  // ln mu(path_{1:k}), k = 1..n
  double envelope_log = 0;          // n ln(1/2 + 2 eps)
};

/// eps >= 0 is the allowed slack above fair odds. Throws degenerate_error
/// when both one-symbol extensions of a reachable prefix have mass zero,
/// and zero_history_error when the chosen branch kills the mass entirely
/// (both only possible for semimeasures or deterministic mu).
AdversarialPath continuous_adversarial(const Environment& mu, const Rational& eps,
                                       std::size_t n);

/// Constants attached to a two-coin gap class with prior weights w0, w1:
/// c0 = 1/(1 + (w1/w0) e^(2c)) is a floor on the posterior weight of either
/// coin along a theta_bar-tracking sequence, and deficiency_bound
/// = w0 + w1 e^(2c) caps xi/mu0 (swap the roles of the weights for mu1).
struct NonconvergenceBounds {
  double c0 = 0;
  double deficiency_bound = 0;
};

NonconvergenceBounds nonconvergence_bounds(const GapCertificate& gap,
                                           const Rational& w0, const Rational& w1);

std::string certificate_json(const GapCertificate& gap);
std::string diagonalization_json(const DiscreteDiagonalization& diag);

}  // namespace semimix::constructions

#endif  // SEMIMIX_CONSTRUCTIONS_HPP
