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

#ifndef SEMIMIX_ERRORS_HPP
#define SEMIMIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace semimix {

/// Conditioning or posterior computation on a history of mass zero.
class zero_history_error : public std::runtime_error {
 public:
  explicit zero_history_error(const std::string& what) : std::runtime_error(what) {}
};

/// A construction hit a dead end: a reachable history whose one-symbol
/// extensions all have mass zero (normalization, adversarial paths), or a
/// degenerate parameter pair that leaves the construction undefined.
class degenerate_error : public std::runtime_error {
 public:
  explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

/// Exhaustive enumeration was requested beyond the tractable cap.
class horizon_error : public std::runtime_error {
 public:
  explicit horizon_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or contradictory experiment configuration (unknown keys,
/// unparsable fractions, out-of-range horizons).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace semimix

#endif  // SEMIMIX_ERRORS_HPP
