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

#include "semimix/environment.hpp"
#include "semimix/errors.hpp"

using namespace semimix;

namespace {

FiniteString bits(const std::string& digits) {
  return FiniteString::from_digits(digits, Alphabet(2));
}

}  // namespace

TEST_CASE("FiniteString basics") {
  FiniteString x = bits("0110");
  CHECK(x.size() == 4);
  CHECK(x[1] == 1);
  CHECK(x.count(1) == 2);
  CHECK(x.empirical_frequency() == doctest::Approx(0.5));
  CHECK(x.prefix(2) == bits("01"));
  CHECK(x.append(1) == bits("01101"));
  CHECK(x.to_digits() == "0110");
  x.pop_back();
  CHECK(x == bits("011"));
  CHECK_THROWS_AS(FiniteString(Alphabet(2)).pop_back(), std::out_of_range);
  CHECK_THROWS_AS(bits("012"), std::invalid_argument);
  CHECK(FiniteString(Alphabet(2)).empirical_frequency() == 0.0);
}

TEST_CASE("BernoulliEnv exact masses and conditionals") {
  BernoulliEnv env(Rational(1, 4));
  CHECK(env.is_measure());
  CHECK(env.kind() == "bernoulli");
  // mass("011") = (3/4)(1/4)(1/4)
  CHECK(env.mass(bits("011")).rational() == Rational(3, 64));
  CHECK(env.mass(FiniteString(Alphabet(2))).rational() == Rational(1));
  CHECK(env.conditional(1, bits("00")).rational() == Rational(1, 4));
  CHECK(env.conditional(0, bits("00")).rational() == Rational(3, 4));
  CHECK_THROWS_AS(BernoulliEnv(Rational(5, 4)), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliEnv(Rational(-1, 4)), std::invalid_argument);
}

TEST_CASE("BernoulliEnv backends agree") {
  BernoulliEnv exact(Rational(19, 64), Backend::exact);
  BernoulliEnv approx(Rational(19, 64), Backend::logfloat);
  const FiniteString x = bits("0110100111");
  CHECK(exact.mass(x).is_exact());
  CHECK(!approx.mass(x).is_exact());
  CHECK(approx.mass(x).log() ==
        doctest::Approx(exact.mass(x).log()).epsilon(1e-12));
}

TEST_CASE("IidEnv measures and semimeasures") {
  IidEnv measure({Rational(1, 2), Rational(1, 2)});
  CHECK(measure.is_measure());
  CHECK(measure.mass(bits("0101")).rational() == Rational(1, 16));

  // deficient symbol distribution: an i.i.d. semimeasure
  IidEnv leaky({Rational(1, 4), Rational(1, 4)});
  CHECK(!leaky.is_measure());
  CHECK(leaky.mass(bits("01")).rational() == Rational(1, 16));

  IidEnv ternary({Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(ternary.alphabet().size == 3);
  CHECK(ternary.mass(FiniteString::from_digits("012", Alphabet(3))).rational() ==
        Rational(1, 27));

  CHECK_THROWS_AS(IidEnv({Rational(3, 4), Rational(1, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(IidEnv({}), std::invalid_argument);
}

TEST_CASE("DeterministicEnv point mass") {
  DeterministicEnv env(bits("011"), bits("01"));
  CHECK(env.is_measure());
  // omega = 011 01 01 01 ...
  CHECK(env.target_symbol(0) == 0);
  CHECK(env.target_symbol(2) == 1);
  CHECK(env.target_symbol(3) == 0);
  CHECK(env.target_symbol(6) == 1);
  CHECK(env.mass(bits("0110")).rational() == Rational(1));
  CHECK(env.mass(bits("0111")).rational() == Rational(0));
  CHECK(env.conditional(1, bits("011")).rational() == Rational(0));
  CHECK(env.conditional(0, bits("011")).rational() == Rational(1));
  CHECK_THROWS_AS(env.conditional(0, bits("1")), zero_history_error);

  DeterministicEnv zeros(FiniteString(Alphabet(2)), bits("0"));
  CHECK(zeros.mass(bits("0000")).rational() == Rational(1));
  CHECK(zeros.mass(bits("0001")).rational() == Rational(0));
  CHECK_THROWS_AS(DeterministicEnv(bits("01"), FiniteString(Alphabet(2))),
                  std::invalid_argument);
}

TEST_CASE("VariableRateEnv decaying one-rate") {
  VariableRateEnv env(Rational(1, 2), 2);  // P(1 at step t) = 1/(2 t^2)
  CHECK(env.backend() == Backend::logfloat);
  CHECK(env.rate(1) == doctest::Approx(0.5));
  CHECK(env.rate(10) == doctest::Approx(0.005));
  // mass("00") = (1 - 1/2)(1 - 1/8)
  CHECK(env.mass(bits("00")).log() ==
        doctest::Approx(std::log(0.5 * 0.875)).epsilon(1e-12));
  // mass("10") = (1/2)(1 - 1/8)
  CHECK(env.mass(bits("10")).log() ==
        doctest::Approx(std::log(0.5 * 0.875)).epsilon(1e-12));
  CHECK(env.conditional(1, bits("00")).value() ==
        doctest::Approx(0.5 / 9.0).epsilon(1e-12));
  // rates above one are not probabilities
  CHECK_THROWS_AS(VariableRateEnv(Rational(3, 2), 0), std::invalid_argument);
}

TEST_CASE("normalize turns a leaky semimeasure into a measure") {
  // i.i.d. semimeasure with per-step mass 3/4, split (1/4, 1/2)
  auto leaky = std::make_shared<const IidEnv>(
      std::vector<Rational>{Rational(1, 4), Rational(1, 2)});
  EnvPtr norm = normalize(leaky);
  CHECK(norm->is_measure());
  // conditionals renormalize to (1/3, 2/3) at every step
  CHECK(norm->mass(bits("0")).rational() == Rational(1, 3));
  CHECK(norm->mass(bits("1")).rational() == Rational(2, 3));
  CHECK(norm->mass(bits("01")).rational() == Rational(2, 9));
  // additivity at a deeper node
  CHECK(norm->mass(bits("010")).rational() + norm->mass(bits("011")).rational() ==
        norm->mass(bits("01")).rational());
  // normalization dominates the original pointwise
  CHECK(norm->mass(bits("0101")).rational() >= leaky->mass(bits("0101")).rational());
}

TEST_CASE("sample is reproducible and tracks the source") {
  BernoulliEnv env(Rational(1, 2));
  const FiniteString a = sample(env, 42, 64);
  const FiniteString b = sample(env, 42, 64);
  const FiniteString c = sample(env, 43, 64);
  CHECK(a == b);
  CHECK(a.size() == 64);
  CHECK_FALSE(a == c);

  // a biased coin produces the right ballpark frequency over a long run
  BernoulliEnv biased(Rational(1, 10));
  const FiniteString d = sample(biased, 7, 4000);
  CHECK(d.empirical_frequency() == doctest::Approx(0.1).epsilon(0.25));

  // deterministic environments sample their own path
  DeterministicEnv det(bits("01"), bits("1"));
  CHECK(sample(det, 0, 5) == bits("01111"));

  IidEnv leaky({Rational(1, 4), Rational(1, 4)});
  CHECK_THROWS_AS(sample(leaky, 0, 4), std::invalid_argument);
}
