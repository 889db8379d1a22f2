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

// Reproducible experiment drivers. Each takes a JSON configuration (merged
// over documented defaults; unknown keys are rejected with config_error so
// a typo can never silently run a different experiment) and produces a
// deterministic report: identical configs give byte-identical CSV and JSON
// on every run.

#ifndef SEMIMIX_EXPERIMENTS_HPP
#define SEMIMIX_EXPERIMENTS_HPP

#include <string>
#include <utility>
#include <vector>

namespace semimix::experiments {

inline constexpr const char* kReportSchema = "semimix-report-v1";
inline constexpr const char* kLibraryVersion = "0.1.0";

/// Outcome of one experiment run. `rows` hold preformatted cells (exact
/// fractions where the backend was exact, shortest round-trip decimals
/// otherwise). `flags` map the experiment's declared invariants to
/// pass/fail; `summary_json` is a canonical JSON object of scalar results.
struct ExperimentReport {
  std::string experiment;
  std::string config_canonical;     // resolved config, compact canonical JSON
  std::string config_hash;          // FNV-1a 64 of config_canonical, 16 hex chars
  std::string machine_spec_version; // machine identity for toy-m runs, else "n/a"
  std::string library_version;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, bool>> flags;
  std::string summary_json;

  /// CSV: '#' provenance/summary/flag preamble, then a header line and rows.
  std::string to_csv() const;
  /// Single JSON document with schema, provenance, summary, flags, rows.
  std::string to_json() const;
  /// True when every declared invariant passed.
  bool all_pass() const;
};

/// Predictive-ratio divergence between a two-component mixture of
/// variable-rate coins (rates t^-3 and t^-2 halved) and the true slow
/// component, along the all-zeros sequence. Verifies the limiting product
/// constants and the linear growth law of the predictive ratio.
ExperimentReport run_divergence(const std::string& config_json = "{}");

/// Bernoulli-class prediction in three modes: "dense" (dyadic grid,
/// sampled data, almost-sure convergence), "gappy" (a class with a gap,
/// doubly-random input, persistent deviation), and "periodic" (exact
/// rational predictive values along a periodic string).
ExperimentReport run_bernoulli_mixture(const std::string& config_json = "{}");

/// Exactly enumerated cumulative bound chain for each measure component of
/// a coin mixture.
ExperimentReport run_bound_check(const std::string& config_json = "{}");

/// Diagonalization constructions: "discrete" chunk argmin witnesses against
/// a semimeasure on the naturals, or "continuous" adversarial paths against
/// a binary predictor.
ExperimentReport run_diagonalize(const std::string& config_json = "{}");

/// Enumerates the toy machine's prior table and audits the complexity bound
/// chain along reference strings; optionally exports the full table.
ExperimentReport run_toy_m(const std::string& config_json = "{}");

/// Dispatch by experiment name; throws config_error for unknown names.
ExperimentReport run(const std::string& experiment, const std::string& config_json = "{}");

const std::vector<std::string>& experiment_names();

/// The documented defaults for one experiment, as a JSON text.  For
/// mode-keyed experiments (bernoulli-mixture, diagonalize) a non-empty
/// `mode` selects that mode's defaults; empty means the documented default
/// mode.  Throws config_error for unknown names, unknown modes, and modes
/// passed to experiments that have none.
std::string default_config(const std::string& experiment, const std::string& mode = "");

}  // namespace semimix::experiments

#endif  // SEMIMIX_EXPERIMENTS_HPP
