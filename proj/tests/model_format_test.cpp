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
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "semimix/environment.hpp"
#include "semimix/mixture.hpp"
#include "semimix/model_format.hpp"
#include "semimix/toy_machine.hpp"

using namespace semimix;

namespace {

std::string doc(const std::string& env_node) {
  return std::string(R"({"schema":"semimix-model-v1","alphabet":2,"environment":)") +
         env_node + "}";
}

FiniteString bits(const std::string& digits) {
  return FiniteString::from_digits(digits, Alphabet(2));
}

}  // namespace

TEST_CASE("bernoulli round trip") {
  EnvPtr env = parse_model(doc(R"({"kind":"bernoulli","theta":"19/64"})"));
  REQUIRE(env->kind() == "bernoulli");
  CHECK(env->mass(bits("1")).rational() == Rational(19, 64));
  const std::string text = serialize_model(*env);
  EnvPtr again = parse_model(text);
  CHECK(serialize_model(*again) == text);
  CHECK(again->mass(bits("01")).rational() == env->mass(bits("01")).rational());
}

TEST_CASE("every kind serializes and parses back") {
  const char* nodes[] = {
      R"({"kind":"bernoulli","theta":"1/3"})",
      R"({"kind":"iid","probs":["1/4","1/4","1/2"]})",
      R"({"kind":"deterministic","preamble":"011","period":"01"})",
      R"({"kind":"variable-rate","coeff":"1/2","power":3})",
      R"({"kind":"mixture","components":[
            {"weight":"1/2","environment":{"kind":"bernoulli","theta":"1/4"}},
            {"weight":"1/2","environment":{"kind":"bernoulli","theta":"3/4"}}]})",
      R"({"kind":"toy-m","max_program_bits":8,"output_horizon":16})",
  };
  for (const char* node : nodes) {
    CAPTURE(node);
    std::string text = node;
    const bool ternary = text.find("probs") != std::string::npos;
    std::string d = ternary
        ? std::string(R"({"schema":"semimix-model-v1","alphabet":3,"environment":)") +
              node + "}"
        : doc(node);
    EnvPtr env = parse_model(d);
    const std::string canon = serialize_model(*env);
    EnvPtr again = parse_model(canon);
    CHECK(serialize_model(*again) == canon);
  }
}

TEST_CASE("mixture documents rebuild exact weights") {
  EnvPtr env = parse_model(doc(
      R"({"kind":"mixture","components":[
           {"weight":"1/3","environment":{"kind":"bernoulli","theta":"3/10"}},
           {"weight":"1/3","environment":{"kind":"bernoulli","theta":"1/2"}},
           {"weight":"1/3","environment":{"kind":"bernoulli","theta":"7/10"}}]})"));
  const auto* mix = dynamic_cast<const MixtureModel*>(env.get());
  REQUIRE(mix != nullptr);
  CHECK(mix->size() == 3);
  CHECK(mix->weight_sum().rational() == Rational(1));
  CHECK(mix->components()[0].weight.rational() == Rational(1, 3));
  CHECK(serialize_model(*env).find("\"1/3\"") != std::string::npos);
}

TEST_CASE("toy-m node evaluates through the enumerated table") {
  EnvPtr env = parse_model(doc(R"({"kind":"toy-m","max_program_bits":16,"output_horizon":64})"));
  const auto* toy = dynamic_cast<const toym::ToyMEnvironment*>(env.get());
  REQUIRE(toy != nullptr);
  CHECK(!env->is_measure());
  CHECK(env->mass(bits("0")).rational() == Rational(21845, 65536));
}

TEST_CASE("unknown keys are rejected, never ignored") {
  CHECK_THROWS_WITH_AS(
      parse_model(doc(R"({"kind":"bernoulli","theta":"1/2","thta":"1/3"})")),
      doctest::Contains("thta"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_model(R"({"schema":"semimix-model-v1","alphabet":2,"env":{}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_model(doc(R"({"kind":"mixture","components":[
        {"weight":"1/2","environment":{"kind":"bernoulli","theta":"1/4"},"w":"x"}]})")),
      std::invalid_argument);
}

TEST_CASE("schema and structure violations") {
  CHECK_THROWS_AS(parse_model("not json"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_model(R"({"schema":"other-v9","alphabet":2,"environment":{"kind":"bernoulli","theta":"1/2"}})"),
      std::invalid_argument);
  // declared alphabet must match the environment
  CHECK_THROWS_AS(
      parse_model(R"({"schema":"semimix-model-v1","alphabet":3,"environment":{"kind":"bernoulli","theta":"1/2"}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_model(doc(R"({"kind":"unheard-of"})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_model(doc(R"({"kind":"bernoulli","theta":"0.25"})")),
                  std::invalid_argument);
}

TEST_CASE("backend request applies to supporting nodes") {
  EnvPtr exact = parse_model(doc(R"({"kind":"bernoulli","theta":"1/4"})"), Backend::exact);
  EnvPtr approx = parse_model(doc(R"({"kind":"bernoulli","theta":"1/4"})"), Backend::logfloat);
  CHECK(exact->mass(bits("1")).is_exact());
  CHECK(!approx->mass(bits("1")).is_exact());
  // variable-rate pins its own backend regardless
  EnvPtr vr = parse_model(doc(R"({"kind":"variable-rate","coeff":"1/2","power":2})"),
                          Backend::exact);
  CHECK(vr->backend() == Backend::logfloat);
}

TEST_CASE("opaque environments refuse serialization") {
  auto leaky = std::make_shared<const IidEnv>(
      std::vector<Rational>{Rational(1, 4), Rational(1, 2)});
  EnvPtr norm = normalize(leaky);
  CHECK_THROWS_AS(serialize_model(*norm), std::invalid_argument);
}
