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

#include "semimix/constructions.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

#include "json_util.hpp"
#include "semimix/errors.hpp"

namespace semimix::constructions {

ThetaClass::ThetaClass(std::vector<Rational> thetas, std::vector<Rational> weights)
    : thetas_(std::move(thetas)), weights_(std::move(weights)) {
  if (thetas_.empty() || thetas_.size() != weights_.size()) {
    throw std::invalid_argument("need one weight per bias and at least one bias");
  }
  Rational weight_sum = 0;
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    if (thetas_[i] < 0 || thetas_[i] > 1) {
      throw std::invalid_argument("biases must lie in [0, 1]");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (thetas_[i] == thetas_[j]) {
        throw std::invalid_argument("duplicate bias " + format_fraction(thetas_[i]));
      }
    }
    if (weights_[i] <= 0) throw std::invalid_argument("weights must be positive");
    weight_sum += weights_[i];
  }
  if (weight_sum > 1) throw std::invalid_argument("weights must sum to at most one");
}

bool ThetaClass::contains(const Rational& theta) const {
  for (const Rational& t : thetas_) {
    if (t == theta) return true;
  }
  return false;
}

std::size_t ThetaClass::index_of(const Rational& theta) const {
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    if (thetas_[i] == theta) return i;
  }
  throw std::invalid_argument("bias " + format_fraction(theta) + " is not in the class");
}

MixturePtr ThetaClass::mixture(Backend backend) const {
  std::vector<EnvPtr> envs;
  envs.reserve(thetas_.size());
  for (const Rational& t : thetas_) {
    envs.push_back(std::make_shared<BernoulliEnv>(t, backend));
  }
  return make_mixture(weights_, envs);
}

double kl_divergence(double p, double q) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p must lie in [0, 1]");
  if (!(q >= 0 && q <= 1)) throw std::invalid_argument("q must lie in [0, 1]");
  if ((q == 0 && p != 0) || (q == 1 && p != 1)) {
    throw std::domain_error("KL divergence is infinite: q excludes an outcome p charges");
  }
  double d = 0;
  if (p > 0) d += p * std::log(p / q);
  if (p < 1) d += (1 - p) * std::log((1 - p) / (1 - q));
  return d;
}

double kl_divergence(const Rational& p, const Rational& q) {
  if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
  if (q < 0 || q > 1) throw std::invalid_argument("q must lie in [0, 1]");
  // Endpoint admissibility is decided exactly before dropping to doubles.
  if ((q == 0 && p != 0) || (q == 1 && p != 1)) {
    throw std::domain_error("KL divergence is infinite: q excludes an outcome p charges");
  }
  if (p == q) return 0;
  return kl_divergence(to_double(p), to_double(q));
}

GapCertificate kl_middle(const Rational& theta0, const Rational& theta1) {
  if (theta0 == theta1) throw degenerate_error("biases coincide; no gap to balance");
  if (theta0 <= 0 || theta1 >= 1 || theta0 > theta1) {
    throw std::invalid_argument("need 0 < theta0 < theta1 < 1");
  }
  const double t0 = to_double(theta0);
  const double t1 = to_double(theta1);
  GapCertificate cert;
  cert.theta0 = theta0;
  cert.theta1 = theta1;
  const double upper = std::log((1 - t0) / (1 - t1));  // > 0
  cert.lipschitz_c = std::log(t1 / t0) + upper;
  cert.theta_bar = upper / cert.lipschitz_c;
  return cert;
}

bool gap_check(const ThetaClass& cls, const Rational& theta0, const Rational& theta1) {
  if (theta0 > theta1) throw std::invalid_argument("endpoints out of order");
  if (!cls.contains(theta0) || !cls.contains(theta1)) {
    throw std::invalid_argument("both endpoints must be members of the class");
  }
  for (const Rational& t : cls.thetas()) {
    if (t == theta0 || t == theta1) continue;
    if (theta0 <= t && t <= theta1) return false;
  }
  return true;
}

FiniteString doubly_random_sequence(double theta_bar, std::size_t n) {
  if (!(theta_bar > 0 && theta_bar < 1)) {
    throw std::invalid_argument("theta_bar must lie strictly inside (0, 1)");
  }
  FiniteString out;
  std::size_t n1 = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double target = static_cast<double>(k) * theta_bar;
    const double dev0 = std::abs(static_cast<double>(n1) - target);
    const double dev1 = std::abs(static_cast<double>(n1 + 1) - target);
    const uint8_t bit = dev1 < dev0 ? 1 : 0;  // ties stay at 0
    out.push_back(bit);
    n1 += bit;
    if (std::abs(static_cast<double>(n1) - target) >= 1.0 + 1e-9) {
      throw std::logic_error("frequency tracking drifted out of its unit corridor");
    }
  }
  return out;
}

DiscreteDiagonalization discrete_diagonalize(const DiscreteSemimeasure& p,
                                             int chunk_count) {
  if (!p.eval) throw std::invalid_argument("semimeasure has no evaluator");
  if (chunk_count < 1) throw std::invalid_argument("need at least one chunk");
  if (chunk_count > 30) {
    throw horizon_error("chunk 31 alone has 2^30 points; enumeration refused");
  }
  if (p.mass_bound > 1) {
    throw std::invalid_argument("declared mass bound exceeds one");
  }

  DiscreteDiagonalization out;
  auto q_table = std::make_shared<std::map<std::uint64_t, Rational>>();
  Rational running_total = 0;
  Rational q_mass = 0;

  for (int n = 1; n <= chunk_count; ++n) {
    const std::uint64_t lo = std::uint64_t{1} << (n - 1);
    const std::uint64_t hi = (std::uint64_t{1} << n) - 1;
    std::uint64_t best_x = lo;
    Rational best = p.eval(lo);
    running_total += best;
    for (std::uint64_t x = lo + 1; x <= hi; ++x) {
      Rational v = p.eval(x);
      running_total += v;
      if (v < best) {  // strict: ties keep the smallest point
        best = v;
        best_x = x;
      }
    }
    if (running_total > p.mass_bound) {
      throw std::invalid_argument("partial sums exceed the declared mass bound");
    }

    ChunkWitness w;
    w.n = n;
    w.x_n = best_x;
    w.p_at_x = best;
    w.q_at_x = Rational(BigInt(1), BigInt(n) * (n + 1));
    w.ratio_bound = Rational(BigInt(n) * (n + 1), BigInt(1) << (n - 1));
    w.holds = w.p_at_x <= w.ratio_bound * w.q_at_x;
    out.chunks.push_back(w);

    (*q_table)[best_x] = w.q_at_x;
    q_mass += w.q_at_x;
  }

  out.q.eval = [q_table](std::uint64_t x) {
    auto it = q_table->find(x);
    return it == q_table->end() ? Rational(0) : it->second;
  };
  out.q.mass_bound = q_mass;
  out.q_partial_mass = q_mass;
  return out;
}

AdversarialPath continuous_adversarial(const Environment& mu, const Rational& eps,
                                       std::size_t n) {
  if (mu.alphabet().size != 2) {
    throw std::invalid_argument("adversarial construction needs a binary environment");
  }
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  if (n == 0) throw std::invalid_argument("path length must be positive");

  AdversarialPath out;
  out.path = FiniteString(Alphabet(2));
  out.mu_log_mass.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Prob e0 = mu.conditional(0, out.path);
    const Prob e1 = mu.conditional(1, out.path);
    if (e0.is_zero() && e1.is_zero()) {
      throw degenerate_error("both extensions have mass zero at step " +
                             std::to_string(k + 1));
    }
    out.path.push_back(e1 < e0 ? 1 : 0);  // ties stay at 0
    out.mu_log_mass.push_back(mu.mass(out.path).log());
  }
  out.envelope_log =
      static_cast<double>(n) * std::log(0.5 + 2.0 * to_double(eps));
  out.rho = std::make_shared<DeterministicEnv>(
      out.path, FiniteString::from_digits("0", Alphabet(2)));
  return out;
}

NonconvergenceBounds nonconvergence_bounds(const GapCertificate& gap,
                                           const Rational& w0, const Rational& w1) {
  if (w0 <= 0 || w1 <= 0) throw std::invalid_argument("weights must be positive");
  const double e2c = std::exp(2.0 * gap.lipschitz_c);
  NonconvergenceBounds out;
  out.c0 = 1.0 / (1.0 + to_double(w1 / w0) * e2c);
  out.deficiency_bound = to_double(w0) + to_double(w1) * e2c;
  return out;
}

std::string certificate_json(const GapCertificate& gap) {
  detail::json doc;
  doc["theta0"] = format_fraction(gap.theta0);
  doc["theta1"] = format_fraction(gap.theta1);
  doc["theta_bar"] = gap.theta_bar;
  doc["lipschitz_c"] = gap.lipschitz_c;
  return doc.dump(2) + "\n";
}

std::string diagonalization_json(const DiscreteDiagonalization& diag) {
  detail::json doc;
  detail::json chunks = detail::json::array();
  for (const ChunkWitness& w : diag.chunks) {
    detail::json c;
    c["n"] = w.n;
    c["x_n"] = w.x_n;
    c["p_at_x"] = format_fraction(w.p_at_x);
    c["q_at_x"] = format_fraction(w.q_at_x);
    c["ratio_bound"] = format_fraction(w.ratio_bound);
    c["holds"] = w.holds;
    chunks.push_back(std::move(c));
  }
  doc["chunks"] = std::move(chunks);
  doc["q_partial_mass"] = format_fraction(diag.q_partial_mass);
  return doc.dump(2) + "\n";
}

}  // namespace semimix::constructions
