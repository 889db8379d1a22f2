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

// Distance and domination diagnostics between a predictor and a reference
// measure: per-step prediction distances, exactly enumerated cumulative
// bound ledgers, pathwise domination traces, and tail-convergence summaries.

#ifndef SEMIMIX_DIAGNOSTICS_HPP
#define SEMIMIX_DIAGNOSTICS_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "semimix/environment.hpp"
#include "semimix/mixture.hpp"

namespace semimix::diagnostics {

/// Distances between one-step conditional distributions mu(.|x) and
/// xi(.|x), one value each per history:
///
///   hellinger  sum_a (sqrt mu(a|x) - sqrt xi(a|x))^2
///   kl         sum_a mu(a|x) ln(mu(a|x)/xi(a|x))      (0 ln 0/z := 0)
///   sq_ratio   sum_{a: mu>0} mu(a|x) (sqrt(xi/mu) - 1)^2
///
/// For every pair of distributions sq_ratio <= hellinger <= kl; kl is +inf
/// when xi assigns zero to a symbol mu charges.
struct StepDistances {
  double hellinger = 0;
  double kl = 0;
  double sq_ratio = 0;
};

/// From raw conditional vectors (already extracted, same length).
StepDistances step_distances(const std::vector<double>& mu_cond,
                             const std::vector<double>& xi_cond);

/// Convenience form evaluating both conditionals at one history.
StepDistances step_distances(const MixtureModel& mix, const Environment& mu,
                             const FiniteString& history);

/// Horizon-by-horizon expectations of the step distances under mu, obtained
/// by exact enumeration of every history, together with the cumulative
/// chain they must satisfy:
///
///   sum_t E[sq_ratio_t] <= sum_t E[hellinger_t] <= sum_t E[kl_t] <= ln(1/w_mu)
struct BoundLedger {
  int horizon = 0;
  double weight_bound = 0;               // ln(1/w_mu)
  std::vector<StepDistances> expected;   // index t-1, expectation over histories
  double cum_sq_ratio = 0;
  double cum_hellinger = 0;
  double cum_kl = 0;

  bool chain_holds(double tol = 1e-9) const;
};

/// Enumerates all histories of the mixture's alphabet up to the horizon.
/// mu is mix.components()[mu_index], which must be a measure. Horizons with
/// more than 2^20 leaves throw horizon_error; mu_index out of range or a
/// non-measure component throws std::invalid_argument.
BoundLedger exact_bound_ledger(const MixtureModel& mix, std::size_t mu_index,
                               int horizon);

/// Pathwise domination record along one string: for each prefix length k,
/// the ratio xi(omega_{1:k}) / mu(omega_{1:k}) and its running extremes. The
/// running maximum of mu/xi (equivalently 1/min ratio) is the domination
/// deficiency observed so far.
struct DeficiencyTrace {
  std::vector<double> ratio;        // xi/mu
  std::vector<double> log_ratio;    // ln xi - ln mu
  std::vector<double> running_max_deficiency;  // max over prefixes of mu/xi

  double deficiency() const {
    return running_max_deficiency.empty() ? 1.0 : running_max_deficiency.back();
  }
};

/// Throws zero_history_error when omega leaves mu's support; if xi hits
/// zero while mu stays positive the ratio becomes 0 (log -inf) and the
/// deficiency +inf, both representable.
DeficiencyTrace deficiency_trace(const MixtureModel& mix, const Environment& mu,
                                 const FiniteString& omega);

/// Smallest c with nu(x) <= c * rho(x) over all strings of length <= depth,
/// by exhaustive enumeration (subtrees where nu vanishes are pruned; a
/// string with rho = 0 < nu makes the constant infinite). More than 2^20
/// nodes throw horizon_error. Returned on the log-domain backend.
Prob dominance_constant(const Environment& rho, const Environment& nu, int depth);

/// Tail behaviour of a deviation sequence |predicted_t - target_t|:
/// cumulative squared deviation, threshold exceedances, and suprema over
/// dyadic tails (N = 1, 2, 4, ... <= n), which must decay for an almost-
/// sure convergence claim and must not for a nonconvergence witness.
struct ConvergenceReport {
  std::size_t horizon = 0;
  double threshold = 0;
  double final_deviation = 0;
  double cum_sq_deviation = 0;
  std::size_t exceed_count = 0;     // steps with deviation >= threshold
  long last_exceed = -1;            // 1-based step of the last one; -1 if none
  std::vector<std::pair<std::size_t, double>> tail_sup;  // (N, sup_{t>=N} dev_t)
};

ConvergenceReport convergence_report(const std::vector<double>& predicted,
                                     const std::vector<double>& target,
                                     double threshold);

/// Plain-text exports. CSV columns are frozen:
///   ledger: t,h_t,d_t,sq_ratio,cum_sq_ratio,cum_hellinger,cum_kl
///   trace:  t,ratio,log_ratio,running_max
std::string ledger_csv(const BoundLedger& ledger);
std::string ledger_json(const BoundLedger& ledger);
std::string trace_csv(const DeficiencyTrace& trace);
std::string trace_json(const DeficiencyTrace& trace);

}  // namespace semimix::diagnostics

#endif  // SEMIMIX_DIAGNOSTICS_HPP
