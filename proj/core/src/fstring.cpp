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

#include "semimix/fstring.hpp"

#include <algorithm>
#include <stdexcept>

namespace semimix {

Alphabet::Alphabet(int s) : size(s) {
  if (s < 2 || s > 256) {
    throw std::invalid_argument("alphabet size must be in [2, 256]");
  }
}

FiniteString::FiniteString(std::vector<uint8_t> symbols, Alphabet a)
    : symbols_(std::move(symbols)), alphabet_(a) {
  for (uint8_t s : symbols_) {
    if (s >= alphabet_.size) throw std::invalid_argument("symbol outside alphabet");
  }
}

FiniteString FiniteString::from_digits(const std::string& digits, Alphabet a) {
  if (a.size > 10) throw std::invalid_argument("from_digits needs alphabet size <= 10");
  FiniteString out(a);
  out.symbols_.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c >= '0' + a.size) {
      throw std::invalid_argument(std::string("bad digit '") + c + "'");
    }
    out.symbols_.push_back(static_cast<uint8_t>(c - '0'));
  }
  return out;
}

void FiniteString::push_back(uint8_t symbol) {
  if (symbol >= alphabet_.size) throw std::invalid_argument("symbol outside alphabet");
  symbols_.push_back(symbol);
}

void FiniteString::pop_back() {
  if (symbols_.empty()) throw std::out_of_range("pop_back on empty string");
  symbols_.pop_back();
}

FiniteString FiniteString::prefix(std::size_t n) const {
  if (n > symbols_.size()) throw std::out_of_range("prefix longer than string");
  FiniteString out(alphabet_);
  out.symbols_.assign(symbols_.begin(), symbols_.begin() + static_cast<long>(n));
  return out;
}

FiniteString FiniteString::append(uint8_t symbol) const {
  FiniteString out = *this;
  out.push_back(symbol);
  return out;
}

std::size_t FiniteString::count(uint8_t symbol) const {
  return static_cast<std::size_t>(std::count(symbols_.begin(), symbols_.end(), symbol));
}

double FiniteString::empirical_frequency() const {
  if (symbols_.empty()) return 0.0;
  return static_cast<double>(count(1)) / static_cast<double>(symbols_.size());
}

std::string FiniteString::to_digits() const {
  std::string out;
  out.reserve(symbols_.size());
  for (uint8_t s : symbols_) out.push_back(static_cast<char>('0' + s));
  return out;
}

}  // namespace semimix
