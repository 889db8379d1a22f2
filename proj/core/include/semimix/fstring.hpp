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

#ifndef SEMIMIX_FSTRING_HPP
#define SEMIMIX_FSTRING_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace semimix {

/// Symbols are identified with {0, ..., size-1}.
struct Alphabet {
  int size = 2;

  explicit Alphabet(int s = 2);
  bool operator==(const Alphabet& o) const { return size == o.size; }
};

/// A finite string over a fixed alphabet; the empty string is permitted.
class FiniteString {
 public:
  explicit FiniteString(Alphabet a = Alphabet(2)) : alphabet_(a) {}
  FiniteString(std::vector<uint8_t> symbols, Alphabet a);

  /// Builds from a digit string like "0101" (alphabet size <= 10).
  static FiniteString from_digits(const std::string& digits, Alphabet a = Alphabet(2));

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  uint8_t operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<uint8_t>& symbols() const { return symbols_; }

  void push_back(uint8_t symbol);
  void pop_back();
  FiniteString prefix(std::size_t n) const;
  FiniteString append(uint8_t symbol) const;

  /// Number of occurrences of a given symbol (n1 for symbol 1).
  std::size_t count(uint8_t symbol) const;
  /// Empirical frequency count(1)/n; 0 on the empty string.
  double empirical_frequency() const;

  std::string to_digits() const;

  bool operator==(const FiniteString& o) const {
    return alphabet_ == o.alphabet_ && symbols_ == o.symbols_;
  }

 private:
  std::vector<uint8_t> symbols_;
  Alphabet alphabet_;
};

}  // namespace semimix

#endif  // SEMIMIX_FSTRING_HPP
