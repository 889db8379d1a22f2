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

#include "semimix/model_format.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json_util.hpp"
#include "semimix/mixture.hpp"
#include "semimix/rational.hpp"
#include "semimix/toy_machine.hpp"

namespace semimix {
namespace detail {
namespace {

Rational fraction_field(const json& node, const char* key, const std::string& context) {
  if (!node.contains(key)) {
    throw std::invalid_argument("missing key '" + std::string(key) + "' in " + context);
  }
  const json& v = node.at(key);
  if (!v.is_string()) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " + context +
                                " must be a fraction string like \"1/4\"");
  }
  try {
    return parse_fraction(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " + context + ": " +
                                e.what());
  }
}

long int_field(const json& node, const char* key, const std::string& context) {
  if (!node.contains(key)) {
    throw std::invalid_argument("missing key '" + std::string(key) + "' in " + context);
  }
  const json& v = node.at(key);
  if (!v.is_number_integer()) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " + context +
                                " must be an integer");
  }
  return v.get<long>();
}

std::string string_field(const json& node, const char* key, const std::string& context) {
  if (!node.contains(key)) {
    throw std::invalid_argument("missing key '" + std::string(key) + "' in " + context);
  }
  const json& v = node.at(key);
  if (!v.is_string()) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " + context +
                                " must be a string");
  }
  return v.get<std::string>();
}

FiniteString digits_field(const json& node, const char* key, const std::string& context) {
  std::string digits = string_field(node, key, context);
  try {
    return FiniteString::from_digits(digits, Alphabet(2));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("key '" + std::string(key) + "' in " + context + ": " +
                                e.what());
  }
}

}  // namespace

EnvPtr env_from_json(const json& node, Backend backend) {
  if (!node.is_object()) {
    throw std::invalid_argument("environment node must be a JSON object");
  }
  std::string kind = string_field(node, "kind", "environment");
  const std::string ctx = kind + " environment";

  if (kind == "bernoulli") {
    require_known_keys(node, {"kind", "theta"}, ctx);
    return std::make_shared<BernoulliEnv>(fraction_field(node, "theta", ctx), backend);
  }
  if (kind == "iid") {
    require_known_keys(node, {"kind", "probs"}, ctx);
    if (!node.contains("probs") || !node.at("probs").is_array()) {
      throw std::invalid_argument("key 'probs' in " + ctx + " must be an array");
    }
    std::vector<Rational> probs;
    for (const json& p : node.at("probs")) {
      if (!p.is_string()) {
        throw std::invalid_argument("entries of 'probs' in " + ctx +
                                    " must be fraction strings");
      }
      probs.push_back(parse_fraction(p.get<std::string>()));
    }
    return std::make_shared<IidEnv>(std::move(probs), backend);
  }
  if (kind == "deterministic") {
    require_known_keys(node, {"kind", "preamble", "period"}, ctx);
    return std::make_shared<DeterministicEnv>(digits_field(node, "preamble", ctx),
                                              digits_field(node, "period", ctx));
  }
  if (kind == "variable-rate") {
    require_known_keys(node, {"kind", "coeff", "power"}, ctx);
    long power = int_field(node, "power", ctx);
    if (power < 0) {
      throw std::invalid_argument("key 'power' in " + ctx + " must be nonnegative");
    }
    return std::make_shared<VariableRateEnv>(fraction_field(node, "coeff", ctx),
                                             static_cast<unsigned>(power));
  }
  if (kind == "mixture") {
    require_known_keys(node, {"kind", "components"}, ctx);
    if (!node.contains("components") || !node.at("components").is_array()) {
      throw std::invalid_argument("key 'components' in " + ctx + " must be an array");
    }
    std::vector<MixtureModel::Component> components;
    for (const json& c : node.at("components")) {
      if (!c.is_object()) {
        throw std::invalid_argument("mixture components must be objects");
      }
      require_known_keys(c, {"weight", "environment"}, "mixture component");
      Rational w = fraction_field(c, "weight", "mixture component");
      if (!c.contains("environment")) {
        throw std::invalid_argument("missing key 'environment' in mixture component");
      }
      components.push_back(
          {Prob::exact(w), env_from_json(c.at("environment"), backend)});
    }
    return std::make_shared<MixtureModel>(std::move(components));
  }
  if (kind == "toy-m") {
    require_known_keys(node, {"kind", "max_program_bits", "output_horizon"}, ctx);
    long bits = int_field(node, "max_program_bits", ctx);
    long horizon = int_field(node, "output_horizon", ctx);
    if (horizon < 1) {
      throw std::invalid_argument("key 'output_horizon' in " + ctx + " must be positive");
    }
    auto table = std::make_shared<const toym::PriorTable>(
        static_cast<int>(bits), static_cast<std::size_t>(horizon));
    return toym::make_environment(std::move(table), backend);
  }
  throw std::invalid_argument("unknown environment kind '" + kind + "'");
}

json env_to_json(const Environment& env) {
  json node;
  node["kind"] = env.kind();
  if (const auto* b = dynamic_cast<const BernoulliEnv*>(&env)) {
    node["theta"] = format_fraction(b->theta());
    return node;
  }
  if (const auto* i = dynamic_cast<const IidEnv*>(&env)) {
    json probs = json::array();
    for (const Rational& p : i->probs()) probs.push_back(format_fraction(p));
    node["probs"] = std::move(probs);
    return node;
  }
  if (const auto* d = dynamic_cast<const DeterministicEnv*>(&env)) {
    node["preamble"] = d->preamble().to_digits();
    node["period"] = d->period().to_digits();
    return node;
  }
  if (const auto* v = dynamic_cast<const VariableRateEnv*>(&env)) {
    node["coeff"] = format_fraction(v->coeff());
    node["power"] = v->power();
    return node;
  }
  if (const auto* m = dynamic_cast<const MixtureModel*>(&env)) {
    json components = json::array();
    for (const MixtureModel::Component& c : m->components()) {
      if (!c.weight.is_exact()) {
        throw std::invalid_argument(
            "mixture with log-domain weights has no exact serialized form");
      }
      json cj;
      cj["weight"] = format_fraction(c.weight.rational());
      cj["environment"] = env_to_json(*c.env);
      components.push_back(std::move(cj));
    }
    node["components"] = std::move(components);
    return node;
  }
  if (const auto* t = dynamic_cast<const toym::ToyMEnvironment*>(&env)) {
    node["max_program_bits"] = t->table().max_program_bits();
    node["output_horizon"] = t->table().output_horizon();
    return node;
  }
  throw std::invalid_argument("environment kind '" + env.kind() +
                              "' has no serialized form");
}

}  // namespace detail

EnvPtr parse_model(const std::string& text, Backend backend) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw std::invalid_argument(std::string("model document is not valid JSON: ") +
                                e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("model document must be a JSON object");
  }
  detail::require_known_keys(doc, {"schema", "alphabet", "environment"}, "model document");
  std::string schema = detail::string_field(doc, "schema", "model document");
  if (schema != kModelSchema) {
    throw std::invalid_argument("unsupported schema '" + schema + "', expected '" +
                                kModelSchema + "'");
  }
  long alphabet = detail::int_field(doc, "alphabet", "model document");
  if (!doc.contains("environment")) {
    throw std::invalid_argument("missing key 'environment' in model document");
  }
  EnvPtr env = detail::env_from_json(doc.at("environment"), backend);
  if (env->alphabet().size != alphabet) {
    throw std::invalid_argument(
        "declared alphabet " + std::to_string(alphabet) + " does not match environment (" +
        std::to_string(env->alphabet().size) + " symbols)");
  }
  return env;
}

std::string serialize_model(const Environment& env) {
  detail::json doc;
  doc["schema"] = kModelSchema;
  doc["alphabet"] = env.alphabet().size;
  doc["environment"] = detail::env_to_json(env);
  return doc.dump(2) + "\n";
}

}  // namespace semimix
