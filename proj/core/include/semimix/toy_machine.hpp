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

// A tiny monotone machine over bit programs and the algorithmic prior it
// induces, exhaustively enumerated up to a program-length budget.
//
// Programs are read left to right as 2-bit opcodes acting on an output
// buffer (initially empty):
//
//   00  emit 0
//   01  emit 1
//   10  double the buffer (append a copy of itself; no-op on empty buffer)
//   11  repeat the buffer forever (halt with empty output on empty buffer)
//
// Output is write-only: once a bit is written it never changes, so the
// machine is monotone. A program p is a minimal program for x when the
// prefix of p consumed up to and including the opcode that writes the last
// bit of x produces an output extending x, and the prefix one opcode
// shorter does not yet cover x. The induced prior and complexity are
//
//   m(x)  = sum over minimal programs p of 2^(-|p|)   (|p| in bits)
//   km(x) = min over those programs of |p|
//
// with the empty-string conventions m(empty) = 1 and km(empty) = 0. Both
// are computed exactly (dyadic rationals) by enumerating every program of
// at most `max_program_bits` bits, and tabulated for outputs of length up
// to `output_horizon`.

#ifndef SEMIMIX_TOY_MACHINE_HPP
#define SEMIMIX_TOY_MACHINE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semimix/environment.hpp"
#include "semimix/fstring.hpp"
#include "semimix/rational.hpp"

namespace semimix::toym {

/// Identifies the machine semantics above; stamped into exported tables and
/// reports so archived numbers stay attributable if opcodes ever change.
inline constexpr const char* kMachineSpecVersion = "toym-4op-v1";

enum class RunStatus {
  exhausted,  // ran out of program bits with the buffer still finite
  looping,    // executed 11 on a nonempty buffer: output repeats forever
  halted,     // executed 11 on the empty buffer: empty total output
};

std::string status_name(RunStatus s);

/// Result of executing one program. `output` is truncated to `output_cap`
/// bits; for a looping run it is the periodic extension up to the cap.
/// `consumed_bits` counts the bits of executed opcodes (a trailing odd bit
/// or anything after 11 is never consumed).
struct MachineRun {
  std::string program;
  int consumed_bits = 0;
  FiniteString output;
  RunStatus status = RunStatus::exhausted;
};

/// Executes a program given as a string of '0'/'1'. Throws
/// std::invalid_argument on other characters.
MachineRun run_program(const std::string& program_bits, std::size_t output_cap);

/// All minimal programs for x among programs of at most max_program_bits
/// bits, as bit strings, in enumeration order.
std::vector<std::string> minimal_programs(const FiniteString& x, int max_program_bits);

/// Prior mass of x from minimal programs of at most max_program_bits bits;
/// a lower bound that grows toward the untruncated prior as the budget
/// grows. Exact dyadic rational; 1 for the empty string.
Rational m_lower(const FiniteString& x, int max_program_bits);

/// Length in bits of the shortest minimal program for x within the budget;
/// an upper bound on the untruncated complexity. Empty string: 0. No
/// program within budget: nullopt.
std::optional<int> km_upper(const FiniteString& x, int max_program_bits);

/// Exhaustive table of (m, km) for every string of length <= output_horizon
/// covered by some program of <= max_program_bits bits. One enumeration
/// pass; lookups afterwards are O(|x|).
class PriorTable {
 public:
  struct Entry {
    std::string digits;  // "0"/"1" characters, shortest first in exports
    Rational m;
    int km = 0;
  };

  /// Enumerates the machine. Budgets above 24 program bits or 4096 output
  /// bits throw horizon_error (the table would no longer be desk-sized).
  PriorTable(int max_program_bits, std::size_t output_horizon);

  int max_program_bits() const { return max_program_bits_; }
  std::size_t output_horizon() const { return output_horizon_; }

  /// Number of covered nonempty strings.
  std::size_t size() const { return entries_.size(); }

  /// m(x); zero for strings no program covers. Throws horizon_error when
  /// |x| exceeds the tabulated horizon (mass there is unknown, not zero).
  Rational m(const FiniteString& x) const;

  /// km(x); nullopt for uncovered strings. Same horizon rule as m().
  std::optional<int> km(const FiniteString& x) const;

  /// Entries sorted by (length, lexicographic), the export order.
  std::vector<Entry> entries_sorted() const;

 private:
  int max_program_bits_;
  std::size_t output_horizon_;
  std::vector<Entry> entries_;  // kept sorted; lookup by binary search
};

/// CSV export: a short # preamble carrying kMachineSpecVersion and the
/// budgets, then rows x,m,km with m as an exact fraction.
std::string prior_table_csv(const PriorTable& table);

/// Per-step audit of the complexity bound along one covered string:
/// for each prefix the conditional m(x_{1:t})/m(x_{<t}), and the chain
///
///   sum_t (1 - cond_t)^2  <=  -(1/2) ln m(x)  <=  (ln 2 / 2) km(x).
struct DetBoundAudit {
  FiniteString x;
  std::vector<double> conditionals;
  double sum_sq_gap = 0;
  double neg_half_log_mass = 0;
  double half_ln2_km = 0;
  int km = 0;
  bool chain_holds = false;
};

/// Throws zero_history_error when some prefix of x has mass zero (the
/// conditionals are undefined there).
DetBoundAudit det_bound_audit(const FiniteString& x, const PriorTable& table);

/// The table as a binary semimeasure environment (kind "toy-m"). Masses are
/// exact dyadics on the exact backend. Queries beyond the table horizon
/// throw horizon_error.
class ToyMEnvironment : public Environment {
 public:
  ToyMEnvironment(std::shared_ptr<const PriorTable> table, Backend backend);

  Prob mass(const FiniteString& x) const override;
  bool is_measure() const override { return false; }
  Alphabet alphabet() const override { return Alphabet(2); }
  Backend backend() const override { return backend_; }
  std::string kind() const override { return "toy-m"; }

  const PriorTable& table() const { return *table_; }

 private:
  std::shared_ptr<const PriorTable> table_;
  Backend backend_;
};

EnvPtr make_environment(std::shared_ptr<const PriorTable> table,
                        Backend backend = Backend::exact);

}  // namespace semimix::toym

#endif  // SEMIMIX_TOY_MACHINE_HPP
