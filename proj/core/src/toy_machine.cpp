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

#include "semimix/toy_machine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "json_util.hpp"
#include "semimix/errors.hpp"

namespace semimix::toym {

namespace {

constexpr int kMaxProgramBitsCap = 24;
constexpr std::size_t kOutputHorizonCap = 4096;

/// Machine state mid-run. `vlen` is the conceptual output length, which can
/// exceed the cap; `bits` stores only the first min(vlen, cap) symbols.
struct Buf {
  std::vector<uint8_t> bits;
  unsigned long long vlen = 0;
  bool looping = false;
  bool halted = false;
};

/// Executes one opcode. Preconditions: !looping && !halted.
void apply(Buf& b, int op, std::size_t cap) {
  switch (op) {
    case 0:
    case 1:
      if (b.bits.size() < cap) b.bits.push_back(static_cast<uint8_t>(op));
      b.vlen += 1;
      break;
    case 2: {
      if (b.vlen == 0) break;  // doubling an empty buffer is a no-op
      const std::size_t stored = b.bits.size();
      const unsigned long long room = cap - stored;
      const std::size_t add =
          static_cast<std::size_t>(std::min<unsigned long long>(room, b.vlen));
      for (std::size_t i = 0; i < add; ++i) b.bits.push_back(b.bits[i]);
      b.vlen *= 2;
      break;
    }
    case 3:
      if (b.vlen == 0) {
        b.halted = true;
      } else {
        b.looping = true;
        const std::size_t period = b.bits.size();  // == min(vlen, cap)
        while (b.bits.size() < cap) b.bits.push_back(b.bits[b.bits.size() % period]);
      }
      break;
    default:
      throw std::logic_error("opcode out of range");
  }
}

/// Shared driver for the exhaustive program walks. Visits every program of
/// at most max_bits bits whose opcodes are all executed (no internal 11),
/// calling cover(program_bits, parent_vlen, child) for each; the child's
/// newly covered output lengths are (parent_vlen, end] with
/// end = looping ? cap : child.vlen, clipped to cap. `prune` may cut
/// subtrees whose outputs already mismatch a target (outputs only grow, so
/// that is sound).
template <typename Cover, typename Prune>
void enumerate(int max_bits, std::size_t cap, const Cover& cover, const Prune& prune,
               std::string& path, const Buf& buf, int bits_used) {
  for (int op = 0; op < 4; ++op) {
    if (bits_used + 2 > max_bits) break;
    Buf child = buf;
    apply(child, op, cap);
    path.push_back(op < 2 ? '0' : '1');
    path.push_back(op % 2 == 0 ? '0' : '1');
    cover(path, buf.vlen, child);
    if (op != 3 && bits_used + 2 < max_bits && !prune(child)) {
      enumerate(max_bits, cap, cover, prune, path, child, bits_used + 2);
    }
    path.pop_back();
    path.pop_back();
  }
}

void check_budgets(int max_program_bits, std::size_t output_horizon) {
  if (max_program_bits < 2) {
    throw std::invalid_argument("program budget below one opcode");
  }
  if (max_program_bits > kMaxProgramBitsCap) {
    throw horizon_error("program budgets beyond 24 bits are not enumerable here");
  }
  if (output_horizon < 1) throw std::invalid_argument("output horizon must be positive");
  if (output_horizon > kOutputHorizonCap) {
    throw horizon_error("output horizons beyond 4096 bits are not tabulated");
  }
}

/// Covered output lengths of one enumerated program, clipped to the cap.
std::pair<std::size_t, std::size_t> covered_range(unsigned long long parent_vlen,
                                                  const Buf& child, std::size_t cap) {
  if (child.halted || parent_vlen >= cap) return {1, 0};  // empty
  const unsigned long long end = child.looping ? cap : child.vlen;
  const auto hi = static_cast<std::size_t>(std::min<unsigned long long>(end, cap));
  const auto lo = static_cast<std::size_t>(parent_vlen) + 1;
  return {lo, hi};
}

}  // namespace

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::exhausted: return "exhausted";
    case RunStatus::looping: return "looping";
    case RunStatus::halted: return "halted";
  }
  return "unknown";
}

MachineRun run_program(const std::string& program_bits, std::size_t output_cap) {
  MachineRun run;
  run.program = program_bits;
  Buf buf;
  for (std::size_t i = 0; i + 1 < program_bits.size(); i += 2) {
    const char a = program_bits[i];
    const char b = program_bits[i + 1];
    if ((a != '0' && a != '1') || (b != '0' && b != '1')) {
      throw std::invalid_argument("programs are strings of '0' and '1'");
    }
    const int op = (a - '0') * 2 + (b - '0');
    apply(buf, op, output_cap);
    run.consumed_bits += 2;
    if (buf.halted || buf.looping) break;
  }
  // validate any unconsumed tail
  for (std::size_t i = static_cast<std::size_t>(run.consumed_bits);
       i < program_bits.size(); ++i) {
    if (program_bits[i] != '0' && program_bits[i] != '1') {
      throw std::invalid_argument("programs are strings of '0' and '1'");
    }
  }
  run.status = buf.halted   ? RunStatus::halted
               : buf.looping ? RunStatus::looping
                             : RunStatus::exhausted;
  run.output = FiniteString(std::move(buf.bits), Alphabet(2));
  return run;
}

std::vector<std::string> minimal_programs(const FiniteString& x, int max_program_bits) {
  if (x.alphabet().size != 2) {
    throw std::invalid_argument("the machine writes binary output");
  }
  check_budgets(max_program_bits, x.empty() ? 1 : x.size());
  if (x.empty()) return {""};  // the empty program leaves the buffer empty

  const std::size_t cap = x.size();
  std::vector<std::string> found;
  auto cover = [&](const std::string& path, unsigned long long parent_vlen,
                   const Buf& child) {
    auto [lo, hi] = covered_range(parent_vlen, child, cap);
    if (lo > cap || hi < cap) return;  // must cover exactly the full target length
    for (std::size_t i = 0; i < cap; ++i) {
      if (child.bits[i] != x[i]) return;
    }
    found.push_back(path);
  };
  auto prune = [&](const Buf& child) {
    const std::size_t check = std::min(child.bits.size(), cap);
    for (std::size_t i = 0; i < check; ++i) {
      if (child.bits[i] != x[i]) return true;
    }
    return false;
  };
  std::string path;
  Buf empty;
  enumerate(max_program_bits, cap, cover, prune, path, empty, 0);
  return found;
}

Rational m_lower(const FiniteString& x, int max_program_bits) {
  if (x.empty()) return 1;
  Rational total = 0;
  for (const std::string& p : minimal_programs(x, max_program_bits)) {
    total += Rational(BigInt(1), BigInt(1) << p.size());
  }
  return total;
}

std::optional<int> km_upper(const FiniteString& x, int max_program_bits) {
  if (x.empty()) return 0;
  std::optional<int> best;
  for (const std::string& p : minimal_programs(x, max_program_bits)) {
    const int len = static_cast<int>(p.size());
    if (!best || len < *best) best = len;
  }
  return best;
}

PriorTable::PriorTable(int max_program_bits, std::size_t output_horizon)
    : max_program_bits_(max_program_bits), output_horizon_(output_horizon) {
  check_budgets(max_program_bits, output_horizon);

  std::unordered_map<std::string, std::pair<Rational, int>> table;
  std::string digits;
  auto cover = [&](const std::string& path, unsigned long long parent_vlen,
                   const Buf& child) {
    auto [lo, hi] = covered_range(parent_vlen, child, output_horizon_);
    if (lo > hi) return;
    const Rational w(BigInt(1), BigInt(1) << path.size());
    const int bits = static_cast<int>(path.size());
    digits.clear();
    for (std::size_t i = 0; i < lo - 1; ++i) {
      digits.push_back(static_cast<char>('0' + child.bits[i]));
    }
    for (std::size_t len = lo; len <= hi; ++len) {
      digits.push_back(static_cast<char>('0' + child.bits[len - 1]));
      auto [it, fresh] = table.try_emplace(digits, Rational(0), bits);
      it->second.first += w;
      if (!fresh && bits < it->second.second) it->second.second = bits;
    }
  };
  auto prune = [](const Buf&) { return false; };
  std::string path;
  Buf empty;
  enumerate(max_program_bits_, output_horizon_, cover, prune, path, empty, 0);

  entries_.reserve(table.size());
  for (auto& [key, val] : table) {
    entries_.push_back(Entry{key, std::move(val.first), val.second});
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    if (a.digits.size() != b.digits.size()) return a.digits.size() < b.digits.size();
    return a.digits < b.digits;
  });
}

namespace {

const PriorTable::Entry* find_entry(const std::vector<PriorTable::Entry>& entries,
                                    const std::string& digits) {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), digits,
      [](const PriorTable::Entry& e, const std::string& d) {
        if (e.digits.size() != d.size()) return e.digits.size() < d.size();
        return e.digits < d;
      });
  if (it == entries.end() || it->digits != digits) return nullptr;
  return &*it;
}

}  // namespace

Rational PriorTable::m(const FiniteString& x) const {
  if (x.alphabet().size != 2) {
    throw std::invalid_argument("the machine writes binary output");
  }
  if (x.empty()) return 1;
  if (x.size() > output_horizon_) {
    throw horizon_error("mass beyond the tabulated horizon is unknown, not zero");
  }
  const Entry* e = find_entry(entries_, x.to_digits());
  return e ? e->m : Rational(0);
}

std::optional<int> PriorTable::km(const FiniteString& x) const {
  if (x.alphabet().size != 2) {
    throw std::invalid_argument("the machine writes binary output");
  }
  if (x.empty()) return 0;
  if (x.size() > output_horizon_) {
    throw horizon_error("complexity beyond the tabulated horizon is unknown");
  }
  const Entry* e = find_entry(entries_, x.to_digits());
  if (!e) return std::nullopt;
  return e->km;
}

std::vector<PriorTable::Entry> PriorTable::entries_sorted() const { return entries_; }

std::string prior_table_csv(const PriorTable& table) {
  std::ostringstream os;
  os << "# semimix-toy-table\n";
  os << "# machine=" << kMachineSpecVersion << '\n';
  os << "# max_program_bits=" << table.max_program_bits() << '\n';
  os << "# output_horizon=" << table.output_horizon() << '\n';
  os << "# m(empty)=1 km(empty)=0\n";
  os << "x,m,km\n";
  for (const PriorTable::Entry& e : table.entries_sorted()) {
    os << e.digits << ',' << format_fraction(e.m) << ',' << e.km << '\n';
  }
  return os.str();
}

DetBoundAudit det_bound_audit(const FiniteString& x, const PriorTable& table) {
  DetBoundAudit audit;
  audit.x = x;
  Rational prev = 1;  // m(empty)
  FiniteString cur(Alphabet(2));
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (prev == 0) {
      throw zero_history_error("prefix of length " + std::to_string(t) +
                               " has mass zero; conditionals are undefined");
    }
    cur.push_back(x[t]);
    const Rational here = table.m(cur);
    const double cond = to_double(here / prev);
    audit.conditionals.push_back(cond);
    audit.sum_sq_gap += (1.0 - cond) * (1.0 - cond);
    prev = here;
  }
  if (x.empty()) {
    audit.km = 0;
    audit.neg_half_log_mass = 0;
  } else {
    if (prev == 0) {
      // The full string is uncovered: no finite complexity to compare with.
      throw zero_history_error("string has mass zero under the table");
    }
    audit.km = *table.km(x);
    audit.neg_half_log_mass = -0.5 * std::log(to_double(prev));
  }
  audit.half_ln2_km = 0.5 * std::log(2.0) * audit.km;
  audit.chain_holds = audit.sum_sq_gap <= audit.neg_half_log_mass + 1e-12 &&
                      audit.neg_half_log_mass <= audit.half_ln2_km + 1e-12;
  return audit;
}

ToyMEnvironment::ToyMEnvironment(std::shared_ptr<const PriorTable> table,
                                 Backend backend)
    : table_(std::move(table)), backend_(backend) {
  if (!table_) throw std::invalid_argument("null prior table");
}

Prob ToyMEnvironment::mass(const FiniteString& x) const {
  const Rational r = table_->m(x);
  if (backend_ == Backend::exact) return Prob::exact(r);
  return Prob::approx(LogFloat::from_linear(to_double(r)));
}

EnvPtr make_environment(std::shared_ptr<const PriorTable> table, Backend backend) {
  return std::make_shared<ToyMEnvironment>(std::move(table), backend);
}

}  // namespace semimix::toym
