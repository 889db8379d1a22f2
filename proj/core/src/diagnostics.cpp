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

#include "semimix/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"
#include "semimix/errors.hpp"
#include "semimix/summation.hpp"

namespace semimix::diagnostics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> conditional_row(const Environment& env, const FiniteString& x) {
  std::vector<double> row;
  const int a = env.alphabet().size;
  row.reserve(static_cast<std::size_t>(a));
  for (int s = 0; s < a; ++s) {
    row.push_back(env.conditional(static_cast<uint8_t>(s), x).value());
  }
  return row;
}

}  // namespace

StepDistances step_distances(const std::vector<double>& mu_cond,
                             const std::vector<double>& xi_cond) {
  if (mu_cond.empty() || mu_cond.size() != xi_cond.size()) {
    throw std::invalid_argument("step_distances needs two equally sized conditionals");
  }
  StepDistances out;
  for (std::size_t i = 0; i < mu_cond.size(); ++i) {
    const double m = mu_cond[i];
    const double x = xi_cond[i];
    if (m < 0 || x < 0) {
      throw std::invalid_argument("conditional probabilities must be nonnegative");
    }
    const double sm = std::sqrt(m);
    const double sx = std::sqrt(x);
    out.hellinger += (sm - sx) * (sm - sx);
    if (m > 0) {
      out.kl += x > 0 ? m * std::log(m / x) : kInf;
      const double r = sx / sm - 1.0;
      out.sq_ratio += m * r * r;
    }
  }
  return out;
}

StepDistances step_distances(const MixtureModel& mix, const Environment& mu,
                             const FiniteString& history) {
  if (!(mix.alphabet() == mu.alphabet())) {
    throw std::invalid_argument("mixture and reference use different alphabets");
  }
  std::vector<double> xi_cond;
  xi_cond.reserve(static_cast<std::size_t>(mix.alphabet().size));
  for (const Prob& p : predictive(mix, history)) xi_cond.push_back(p.value());
  return step_distances(conditional_row(mu, history), xi_cond);
}

bool BoundLedger::chain_holds(double tol) const {
  return cum_sq_ratio <= cum_hellinger + tol && cum_hellinger <= cum_kl + tol &&
         cum_kl <= weight_bound + tol;
}

namespace {

/// Depth-first walk over all histories shorter than the horizon, carrying
/// exact per-component masses so each node costs one mass evaluation per
/// component and child.
struct LedgerWalk {
  const MixtureModel& mix;
  std::size_t mu_index;
  int horizon;
  std::vector<CompensatedSum> e_h, e_kl, e_sq;

  void visit(FiniteString& history, std::vector<Prob>& masses, int depth) {
    const Prob& mu_mass = masses[mu_index];
    if (mu_mass.is_zero()) return;  // history has probability zero under mu

    Prob xi_mass = Prob::zero(mix.backend());
    for (std::size_t i = 0; i < mix.size(); ++i) {
      xi_mass += mix.components()[i].weight * masses[i];
    }

    const int a = mix.alphabet().size;
    std::vector<std::vector<Prob>> child(static_cast<std::size_t>(a));
    std::vector<double> mu_cond(static_cast<std::size_t>(a));
    std::vector<double> xi_cond(static_cast<std::size_t>(a));
    for (int s = 0; s < a; ++s) {
      history.push_back(static_cast<uint8_t>(s));
      auto& row = child[static_cast<std::size_t>(s)];
      row.reserve(mix.size());
      Prob xi_child = Prob::zero(mix.backend());
      for (std::size_t i = 0; i < mix.size(); ++i) {
        row.push_back(mix.components()[i].env->mass(history));
        xi_child += mix.components()[i].weight * row.back();
      }
      mu_cond[static_cast<std::size_t>(s)] =
          (row[mu_index] / mu_mass).value();
      xi_cond[static_cast<std::size_t>(s)] = (xi_child / xi_mass).value();
      history.pop_back();
    }

    const double weight = mu_mass.value();
    const StepDistances d = step_distances(mu_cond, xi_cond);
    e_h[static_cast<std::size_t>(depth)].add(weight * d.hellinger);
    e_kl[static_cast<std::size_t>(depth)].add(weight * d.kl);
    e_sq[static_cast<std::size_t>(depth)].add(weight * d.sq_ratio);

    if (depth + 1 >= horizon) return;
    for (int s = 0; s < a; ++s) {
      history.push_back(static_cast<uint8_t>(s));
      visit(history, child[static_cast<std::size_t>(s)], depth + 1);
      history.pop_back();
    }
  }
};

}  // namespace

BoundLedger exact_bound_ledger(const MixtureModel& mix, std::size_t mu_index,
                               int horizon) {
  if (mu_index >= mix.size()) {
    throw std::invalid_argument("mu_index outside the component list");
  }
  if (!mix.components()[mu_index].env->is_measure()) {
    throw std::invalid_argument("reference component must be a measure");
  }
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  const double leaves = static_cast<double>(horizon) *
                        std::log2(static_cast<double>(mix.alphabet().size));
  if (leaves > 20.0) {
    throw horizon_error("exact ledger horizon exceeds 2^20 histories");
  }

  LedgerWalk walk{mix, mu_index, horizon, {}, {}, {}};
  walk.e_h.resize(static_cast<std::size_t>(horizon));
  walk.e_kl.resize(static_cast<std::size_t>(horizon));
  walk.e_sq.resize(static_cast<std::size_t>(horizon));

  FiniteString history(mix.alphabet());
  std::vector<Prob> masses;
  masses.reserve(mix.size());
  for (const auto& c : mix.components()) masses.push_back(c.env->mass(history));
  walk.visit(history, masses, 0);

  BoundLedger out;
  out.horizon = horizon;
  out.weight_bound = -mix.components()[mu_index].weight.log();
  out.expected.resize(static_cast<std::size_t>(horizon));
  CompensatedSum csq, ch, ckl;
  for (int t = 0; t < horizon; ++t) {
    auto i = static_cast<std::size_t>(t);
    out.expected[i].hellinger = walk.e_h[i].value();
    out.expected[i].kl = walk.e_kl[i].value();
    out.expected[i].sq_ratio = walk.e_sq[i].value();
    ch.add(out.expected[i].hellinger);
    ckl.add(out.expected[i].kl);
    csq.add(out.expected[i].sq_ratio);
  }
  out.cum_sq_ratio = csq.value();
  out.cum_hellinger = ch.value();
  out.cum_kl = ckl.value();
  return out;
}

DeficiencyTrace deficiency_trace(const MixtureModel& mix, const Environment& mu,
                                 const FiniteString& omega) {
  if (!(mix.alphabet() == mu.alphabet())) {
    throw std::invalid_argument("mixture and reference use different alphabets");
  }
  DeficiencyTrace out;
  out.ratio.reserve(omega.size());
  out.log_ratio.reserve(omega.size());
  out.running_max_deficiency.reserve(omega.size());

  FiniteString cur(omega.alphabet());
  double running = 1.0;  // deficiency 1 at the empty prefix of a measure
  for (std::size_t k = 0; k < omega.size(); ++k) {
    cur.push_back(omega[k]);
    const Prob mu_mass = mu.mass(cur);
    if (mu_mass.is_zero()) {
      throw zero_history_error("string leaves the support of the reference at step " +
                               std::to_string(k + 1));
    }
    const Prob xi_mass = mix.mass(cur);
    const double lr = xi_mass.is_zero() ? -kInf : xi_mass.log() - mu_mass.log();
    const double r = std::exp(lr);
    out.ratio.push_back(r);
    out.log_ratio.push_back(lr);
    running = std::max(running, r == 0 ? kInf : 1.0 / r);
    out.running_max_deficiency.push_back(running);
  }
  return out;
}

namespace {

struct DominanceWalk {
  const Environment& rho;
  const Environment& nu;
  int depth;
  double max_log = -std::numeric_limits<double>::infinity();

  void visit(FiniteString& x, int level) {
    const Prob nu_mass = nu.mass(x);
    if (nu_mass.is_zero()) return;  // children are bounded by nu(x) = 0
    const Prob rho_mass = rho.mass(x);
    if (rho_mass.is_zero()) {
      max_log = kInf;
      return;
    }
    max_log = std::max(max_log, nu_mass.log() - rho_mass.log());
    if (level >= depth || max_log == kInf) return;
    for (int s = 0; s < nu.alphabet().size; ++s) {
      x.push_back(static_cast<uint8_t>(s));
      visit(x, level + 1);
      x.pop_back();
      if (max_log == kInf) return;
    }
  }
};

}  // namespace

Prob dominance_constant(const Environment& rho, const Environment& nu, int depth) {
  if (!(rho.alphabet() == nu.alphabet())) {
    throw std::invalid_argument("environments use different alphabets");
  }
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  const double nodes = static_cast<double>(depth + 1) *
                       std::log2(static_cast<double>(nu.alphabet().size));
  if (nodes > 20.0) {
    throw horizon_error("dominance search exceeds 2^20 strings");
  }
  DominanceWalk walk{rho, nu, depth};
  FiniteString x(nu.alphabet());
  walk.visit(x, 0);
  return Prob::approx(LogFloat::from_log(walk.max_log));
}

ConvergenceReport convergence_report(const std::vector<double>& predicted,
                                     const std::vector<double>& target,
                                     double threshold) {
  if (predicted.empty() || predicted.size() != target.size()) {
    throw std::invalid_argument("convergence_report needs two equally sized sequences");
  }
  if (threshold < 0) throw std::invalid_argument("threshold must be nonnegative");

  const std::size_t n = predicted.size();
  std::vector<double> dev(n);
  ConvergenceReport out;
  out.horizon = n;
  out.threshold = threshold;
  CompensatedSum sq;
  for (std::size_t t = 0; t < n; ++t) {
    dev[t] = std::abs(predicted[t] - target[t]);
    sq.add(dev[t] * dev[t]);
    if (dev[t] >= threshold) {
      ++out.exceed_count;
      out.last_exceed = static_cast<long>(t + 1);
    }
  }
  out.cum_sq_deviation = sq.value();
  out.final_deviation = dev.back();

  std::vector<double> suffix_max(n);
  double m = 0;
  for (std::size_t t = n; t-- > 0;) {
    m = std::max(m, dev[t]);
    suffix_max[t] = m;
  }
  for (std::size_t start = 1; start <= n; start *= 2) {
    out.tail_sup.emplace_back(start, suffix_max[start - 1]);
  }
  return out;
}

namespace {

using detail::format_double;

}  // namespace

std::string ledger_csv(const BoundLedger& ledger) {
  std::ostringstream os;
  os << "t,h_t,d_t,sq_ratio,cum_sq_ratio,cum_hellinger,cum_kl\n";
  CompensatedSum csq, ch, ckl;
  for (std::size_t i = 0; i < ledger.expected.size(); ++i) {
    const StepDistances& d = ledger.expected[i];
    ch.add(d.hellinger);
    ckl.add(d.kl);
    csq.add(d.sq_ratio);
    os << (i + 1) << ',' << format_double(d.hellinger) << ',' << format_double(d.kl)
       << ',' << format_double(d.sq_ratio) << ',' << format_double(csq.value()) << ','
       << format_double(ch.value()) << ',' << format_double(ckl.value()) << '\n';
  }
  return os.str();
}

std::string ledger_json(const BoundLedger& ledger) {
  detail::json doc;
  doc["horizon"] = ledger.horizon;
  doc["weight_bound"] = ledger.weight_bound;
  doc["cum_sq_ratio"] = ledger.cum_sq_ratio;
  doc["cum_hellinger"] = ledger.cum_hellinger;
  doc["cum_kl"] = ledger.cum_kl;
  doc["chain_holds"] = ledger.chain_holds();
  detail::json steps = detail::json::array();
  for (std::size_t i = 0; i < ledger.expected.size(); ++i) {
    detail::json s;
    s["t"] = i + 1;
    s["h_t"] = ledger.expected[i].hellinger;
    s["d_t"] = ledger.expected[i].kl;
    s["sq_ratio"] = ledger.expected[i].sq_ratio;
    steps.push_back(std::move(s));
  }
  doc["steps"] = std::move(steps);
  return doc.dump(2) + "\n";
}

std::string trace_csv(const DeficiencyTrace& trace) {
  std::ostringstream os;
  os << "t,ratio,log_ratio,running_max\n";
  for (std::size_t i = 0; i < trace.ratio.size(); ++i) {
    os << (i + 1) << ',' << format_double(trace.ratio[i]) << ','
       << format_double(trace.log_ratio[i]) << ','
       << format_double(trace.running_max_deficiency[i]) << '\n';
  }
  return os.str();
}

std::string trace_json(const DeficiencyTrace& trace) {
  detail::json doc;
  doc["deficiency"] = trace.deficiency();
  detail::json rows = detail::json::array();
  for (std::size_t i = 0; i < trace.ratio.size(); ++i) {
    detail::json r;
    r["t"] = i + 1;
    r["ratio"] = trace.ratio[i];
    r["log_ratio"] = trace.log_ratio[i];
    r["running_max"] = trace.running_max_deficiency[i];
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace semimix::diagnostics
