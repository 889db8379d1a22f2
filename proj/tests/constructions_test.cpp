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

#include <cmath>
#include <stdexcept>

#include <doctest.h>
#include <json.hpp>

#include "semimix/constructions.hpp"
#include "semimix/environment.hpp"
#include "semimix/errors.hpp"

using namespace semimix;
namespace cons = semimix::constructions;

namespace {

FiniteString bits(const std::string& digits) {
  return FiniteString::from_digits(digits, Alphabet(2));
}

cons::ThetaClass gap_class() {
  return cons::ThetaClass({Rational(1, 4), Rational(1, 2)},
                          {Rational(1, 2), Rational(1, 2)});
}

}  // namespace

TEST_CASE("theta class validation and lookup") {
  cons::ThetaClass cls({Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(7, 8)},
                       {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  CHECK(cls.size() == 4);
  CHECK(cls.contains(Rational(1, 4)));
  CHECK(!cls.contains(Rational(1, 3)));
  CHECK(cls.index_of(Rational(1, 2)) == 2);
  CHECK_THROWS_AS(cls.index_of(Rational(1, 3)), std::invalid_argument);

  CHECK_THROWS_AS(cons::ThetaClass({Rational(1, 2), Rational(1, 2)},
                                   {Rational(1, 4), Rational(1, 4)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cons::ThetaClass({Rational(1, 2)}, {Rational(3, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cons::ThetaClass({Rational(5, 4)}, {Rational(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cons::ThetaClass({Rational(1, 2)}, {Rational(0)}),
                  std::invalid_argument);

  MixturePtr mix = cls.mixture();
  CHECK(mix->size() == 4);
  CHECK(mix->mass(bits("1")).rational() ==
        Rational(1, 4) * (Rational(1, 8) + Rational(1, 4) + Rational(1, 2) + Rational(7, 8)));
}

TEST_CASE("binary KL divergence") {
  CHECK(cons::kl_divergence(0.5, 0.25) ==
        doctest::Approx(0.14384103622589042).epsilon(1e-12));
  CHECK(cons::kl_divergence(0.3, 0.3) == 0.0);
  CHECK(cons::kl_divergence(0.0, 0.0) == 0.0);
  CHECK(cons::kl_divergence(1.0, 1.0) == 0.0);
  CHECK(cons::kl_divergence(0.0, 0.3) == doctest::Approx(-std::log(0.7)).epsilon(1e-12));
  CHECK_THROWS_AS(cons::kl_divergence(0.3, 0.0), std::domain_error);
  CHECK_THROWS_AS(cons::kl_divergence(0.3, 1.0), std::domain_error);

  CHECK(cons::kl_divergence(Rational(1, 2), Rational(1, 4)) ==
        doctest::Approx(0.14384103622589042).epsilon(1e-12));
  CHECK(cons::kl_divergence(Rational(1), Rational(1)) == 0.0);
  CHECK_THROWS_AS(cons::kl_divergence(Rational(1, 3), Rational(1)), std::domain_error);
}

TEST_CASE("kl middle balances the two divergences") {
  const cons::GapCertificate cert = cons::kl_middle(Rational(1, 4), Rational(1, 2));
  CHECK(cert.theta_bar == doctest::Approx(0.36907024642854264).epsilon(1e-12));
  CHECK(cert.lipschitz_c == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(cons::kl_divergence(cert.theta_bar, 0.25) ==
        doctest::Approx(cons::kl_divergence(cert.theta_bar, 0.5)).epsilon(1e-9));
  CHECK(cons::kl_divergence(cert.theta_bar, 0.25) ==
        doctest::Approx(0.034688185232017485).epsilon(1e-9));
  CHECK(cert.theta_bar > 0.25);
  CHECK(cert.theta_bar < 0.5);

  CHECK_THROWS_AS(cons::kl_middle(Rational(1, 2), Rational(1, 2)), degenerate_error);
  CHECK_THROWS_AS(cons::kl_middle(Rational(1, 2), Rational(1, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(cons::kl_middle(Rational(0), Rational(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(cons::kl_middle(Rational(1, 2), Rational(1)), std::invalid_argument);
}

TEST_CASE("gap check detects interior members") {
  cons::ThetaClass cls({Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(7, 8)},
                       {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  CHECK(cons::gap_check(cls, Rational(1, 4), Rational(1, 2)));
  CHECK(cons::gap_check(cls, Rational(1, 2), Rational(7, 8)));
  CHECK(!cons::gap_check(cls, Rational(1, 8), Rational(1, 2)));
  CHECK_THROWS_AS(cons::gap_check(cls, Rational(1, 3), Rational(1, 2)),
                  std::invalid_argument);
}

TEST_CASE("doubly random sequence tracks theta_bar within one") {
  CHECK(cons::doubly_random_sequence(0.5, 8).to_digits() == "01010101");

  const double tb = cons::kl_middle(Rational(1, 4), Rational(1, 2)).theta_bar;
  const FiniteString x = cons::doubly_random_sequence(tb, 20);
  CHECK(x.to_digits() == "01001010010010100100");

  const FiniteString longx = cons::doubly_random_sequence(tb, 10000);
  std::size_t n1 = 0;
  for (std::size_t k = 1; k <= longx.size(); ++k) {
    n1 += longx[k - 1];
    CHECK(std::abs(static_cast<double>(n1) - static_cast<double>(k) * tb) < 1.0);
  }
  CHECK(longx.empirical_frequency() == doctest::Approx(tb).epsilon(1e-3));
}

TEST_CASE("discrete diagonalization witnesses") {
  cons::DiscreteSemimeasure p;
  p.eval = [](std::uint64_t n) { return Rational(BigInt(1), BigInt(n) * (n + 1)); };
  p.mass_bound = 1;

  const cons::DiscreteDiagonalization diag = cons::discrete_diagonalize(p, 20);
  REQUIRE(diag.chunks.size() == 20);
  CHECK(diag.q_partial_mass == Rational(20, 21));
  for (const cons::ChunkWitness& w : diag.chunks) {
    CAPTURE(w.n);
    CHECK(w.holds);
    // P decays, so the chunk argmin sits at the top end 2^n - 1
    CHECK(w.x_n == (std::uint64_t(1) << w.n) - 1);
    CHECK(w.q_at_x == Rational(BigInt(1), BigInt(w.n) * (w.n + 1)));
    CHECK(w.ratio_bound ==
          Rational(BigInt(w.n) * (w.n + 1), BigInt(1) << (w.n - 1)));
    CHECK(w.p_at_x <= w.ratio_bound * w.q_at_x);
  }
  // q is supported exactly on the witnesses
  CHECK(diag.q.eval(diag.chunks[2].x_n) == diag.chunks[2].q_at_x);
  CHECK(diag.q.eval(4) == Rational(0));

  CHECK_THROWS_AS(cons::discrete_diagonalize(p, 31), horizon_error);

  // a dishonest mass bound is caught during enumeration
  cons::DiscreteSemimeasure liar;
  liar.eval = [](std::uint64_t) { return Rational(1, 2); };
  liar.mass_bound = 1;
  CHECK_THROWS_AS(cons::discrete_diagonalize(liar, 4), std::invalid_argument);
}

TEST_CASE("continuous adversarial path starves the predictor") {
  BernoulliEnv mu(Rational(7, 10));
  const cons::AdversarialPath ap = cons::continuous_adversarial(mu, Rational(0), 20);
  // B(0.7) always finds 0 less likely, so the path is all zeros
  CHECK(ap.path.to_digits() == std::string(20, '0'));
  CHECK(ap.envelope_log == doctest::Approx(20 * std::log(0.5)).epsilon(1e-12));
  REQUIRE(ap.mu_log_mass.size() == 20);
  for (std::size_t t = 1; t <= 20; ++t) {
    CHECK(ap.mu_log_mass[t - 1] ==
          doctest::Approx(static_cast<double>(t) * std::log(0.3)).epsilon(1e-9));
    CHECK(ap.mu_log_mass[t - 1] <= static_cast<double>(t) * std::log(0.5) + 1e-9);
  }
  // rho puts all its mass on the constructed path
  CHECK(ap.rho->mass(ap.path).rational() == Rational(1));

  // a fair coin meets the envelope with equality
  BernoulliEnv fair(Rational(1, 2));
  const cons::AdversarialPath fp = cons::continuous_adversarial(fair, Rational(0), 10);
  CHECK(fp.mu_log_mass.back() == doctest::Approx(10 * std::log(0.5)).epsilon(1e-9));

  // the chosen branch of a deterministic predictor has mass zero
  DeterministicEnv det(bits("0"), bits("0"));
  CHECK_THROWS_AS(cons::continuous_adversarial(det, Rational(0), 5),
                  zero_history_error);

  CHECK_THROWS_AS(cons::continuous_adversarial(mu, Rational(-1, 10), 5),
                  std::invalid_argument);
}

TEST_CASE("nonconvergence bounds for the two-coin gap") {
  const cons::GapCertificate cert = cons::kl_middle(Rational(1, 4), Rational(1, 2));
  const cons::NonconvergenceBounds b =
      cons::nonconvergence_bounds(cert, Rational(1, 2), Rational(1, 2));
  // e^{2c} = 9 for c = ln 3
  CHECK(b.c0 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(b.deficiency_bound == doctest::Approx(5.0).epsilon(1e-12));

  // asymmetric priors move both constants
  const cons::NonconvergenceBounds ba =
      cons::nonconvergence_bounds(cert, Rational(3, 4), Rational(1, 4));
  CHECK(ba.c0 == doctest::Approx(1.0 / 4.0).epsilon(1e-9));
  CHECK(ba.deficiency_bound == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("json exports parse back") {
  const cons::GapCertificate cert = cons::kl_middle(Rational(1, 4), Rational(1, 2));
  const nlohmann::json c = nlohmann::json::parse(cons::certificate_json(cert));
  CHECK(c.at("theta0").get<std::string>() == "1/4");
  CHECK(c.at("theta1").get<std::string>() == "1/2");
  CHECK(c.at("theta_bar").get<double>() == doctest::Approx(0.36907024642854264));

  cons::DiscreteSemimeasure p;
  p.eval = [](std::uint64_t n) { return Rational(BigInt(1), BigInt(n) * (n + 1)); };
  const nlohmann::json d =
      nlohmann::json::parse(cons::diagonalization_json(cons::discrete_diagonalize(p, 6)));
  CHECK(d.at("chunks").size() == 6);
  CHECK(d.at("q_partial_mass").get<std::string>() == "6/7");
}
