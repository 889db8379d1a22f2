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

// Textual model descriptions.
//
// A model document is a JSON object:
//
//   {
//     "schema": "semimix-model-v1",
//     "alphabet": 2,
//     "environment": { "kind": "bernoulli", "theta": "1/4" }
//   }
//
// Environment nodes by kind:
//
//   bernoulli      {"kind":"bernoulli", "theta":"p/q"}
//   iid            {"kind":"iid", "probs":["p/q", ...]}
//   deterministic  {"kind":"deterministic", "preamble":"0110", "period":"01"}
//   variable-rate  {"kind":"variable-rate", "coeff":"1/2", "power":3}
//   mixture        {"kind":"mixture", "components":
//                     [{"weight":"p/q", "environment":{...}}, ...]}
//   toy-m          {"kind":"toy-m", "max_program_bits":16, "output_horizon":64}
//
// All probabilities and weights are exact fraction strings ("p/q" in lowest
// terms, or a bare integer). Parsing a serialized model reproduces the model
// bit-exactly. Unknown keys are rejected everywhere rather than ignored, so a
// misspelled field can never silently change the model.

#ifndef SEMIMIX_MODEL_FORMAT_HPP
#define SEMIMIX_MODEL_FORMAT_HPP

#include <string>

#include "semimix/environment.hpp"

namespace semimix {

inline constexpr const char* kModelSchema = "semimix-model-v1";

/// Parses a model document. The requested backend applies to every node that
/// supports both backends; nodes with a fixed backend (variable-rate is
/// always log-domain) keep it. Throws std::invalid_argument on malformed
/// documents, unknown keys, or schema mismatches.
EnvPtr parse_model(const std::string& text, Backend backend = Backend::exact);

/// Serializes an environment built from the kinds above back to a canonical
/// document (two-space indentation, keys sorted). Fractions come out in
/// lowest terms, so serialize(parse(serialize(e))) == serialize(e).
/// Environments with opaque evaluators (custom, normalized) are not
/// representable and raise std::invalid_argument.
std::string serialize_model(const Environment& env);

}  // namespace semimix

#endif  // SEMIMIX_MODEL_FORMAT_HPP
