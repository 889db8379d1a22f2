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

// Internal helpers shared by the model-format parser and the experiment
// runner. Not installed.

#ifndef SEMIMIX_JSON_UTIL_HPP
#define SEMIMIX_JSON_UTIL_HPP

#include <charconv>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "semimix/environment.hpp"
#include "semimix/rational.hpp"

namespace semimix::detail {

using nlohmann::json;

/// Rejects keys outside the allowed set; the error names the offender so a
/// typoed fraction never silently falls back to a default.
template <typename Error = std::invalid_argument>
void require_known_keys(const json& obj, std::initializer_list<const char*> allowed,
                        const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw Error("unknown key '" + it.key() + "' in " + context);
    }
  }
}

/// Shortest round-trip decimal form of a double; deterministic and
/// locale-independent, used for every floating value we serialize.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

/// Environment <-> JSON object (the "environment" node of the model format).
EnvPtr env_from_json(const json& node, Backend backend);
json env_to_json(const Environment& env);

}  // namespace semimix::detail

#endif  // SEMIMIX_JSON_UTIL_HPP
