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

#include "semimix/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"
#include "semimix/constructions.hpp"
#include "semimix/diagnostics.hpp"
#include "semimix/errors.hpp"
#include "semimix/mixture.hpp"
#include "semimix/summation.hpp"
#include "semimix/toy_machine.hpp"

namespace semimix::experiments {

namespace {

using detail::format_double;
using detail::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Configuration plumbing
// ---------------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

json parse_user_config(const std::string& text) {
  if (text.empty()) return json::object();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw config_error("configuration must be a JSON object");
  return doc;
}

/// Defaults double as the schema: every user key must appear in them with a
/// compatible type. The merged document is the canonical resolved config.
json merge_defaults(const json& user, const json& defaults, const std::string& context) {
  json out = defaults;
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!defaults.contains(it.key())) {
      throw config_error("unknown key '" + it.key() + "' for " + context);
    }
    const json& d = defaults.at(it.key());
    const json& v = it.value();
    const bool ok = (d.is_string() && v.is_string()) ||
                    (d.is_boolean() && v.is_boolean()) ||
                    (d.is_number_integer() && v.is_number_integer()) ||
                    (d.is_number_float() && v.is_number()) ||
                    (d.is_array() && v.is_array()) || (d.is_object() && v.is_object());
    if (!ok) {
      throw config_error("key '" + it.key() + "' for " + context +
                         " has the wrong type (see the documented default)");
    }
    out[it.key()] = v;
  }
  return out;
}

long cfg_int(const json& cfg, const char* key, long lo, long hi) {
  const long v = cfg.at(key).get<long>();
  if (v < lo || v > hi) {
    throw config_error("key '" + std::string(key) + "' must lie in [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

double cfg_num(const json& cfg, const char* key, double lo, double hi) {
  const double v = cfg.at(key).get<double>();
  if (!(v >= lo && v <= hi)) {
    throw config_error("key '" + std::string(key) + "' must lie in [" +
                       format_double(lo) + ", " + format_double(hi) + "]");
  }
  return v;
}

std::string cfg_str(const json& cfg, const char* key) {
  return cfg.at(key).get<std::string>();
}

Rational cfg_fraction(const json& cfg, const char* key) {
  try {
    return parse_fraction(cfg.at(key).get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw config_error("key '" + std::string(key) + "': " + e.what());
  }
}

std::vector<Rational> cfg_fraction_list(const json& cfg, const char* key) {
  std::vector<Rational> out;
  for (const json& v : cfg.at(key)) {
    if (!v.is_string()) {
      throw config_error("key '" + std::string(key) + "' must list fraction strings");
    }
    try {
      out.push_back(parse_fraction(v.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw config_error("key '" + std::string(key) + "': " + e.what());
    }
  }
  return out;
}

void require_backend(const json& cfg, const char* needed, const char* why) {
  const std::string got = cfg_str(cfg, "backend");
  if (got != "exact" && got != "logfloat") {
    throw config_error("key 'backend' must be \"exact\" or \"logfloat\"");
  }
  if (got != needed) {
    throw config_error(std::string("this experiment runs on the ") + needed +
                       " backend only: " + why);
  }
}

// ---------------------------------------------------------------------------
// Shared measurement helpers
// ---------------------------------------------------------------------------

/// Running count of per-step distance-ordering checks
/// sq_ratio <= hellinger <= kl on binary conditionals.
struct StepAudit {
  std::vector<double> mu = {0, 0};
  std::vector<double> xi = {0, 0};
  long steps = 0;
  long violations = 0;

  void check(double mu1, double xi1) {
    mu[0] = 1.0 - mu1;
    mu[1] = mu1;
    xi[0] = 1.0 - xi1;
    xi[1] = xi1;
    const diagnostics::StepDistances d = diagnostics::step_distances(mu, xi);
    ++steps;
    if (d.sq_ratio > d.hellinger + 1e-12 || d.hellinger > d.kl + 1e-12) ++violations;
  }
};

ExperimentReport finalize(const std::string& name, const json& resolved,
                          const std::string& machine_version,
                          std::vector<std::string> columns,
                          std::vector<std::vector<std::string>> rows,
                          std::vector<std::pair<std::string, bool>> flags,
                          const json& summary) {
  ExperimentReport r;
  r.experiment = name;
  r.config_canonical = resolved.dump();
  r.config_hash = hex16(fnv1a(r.config_canonical));
  r.machine_spec_version = machine_version;
  r.library_version = kLibraryVersion;
  r.columns = std::move(columns);
  r.rows = std::move(rows);
  r.flags = std::move(flags);
  r.summary_json = summary.dump();
  return r;
}

std::string cell(long v) { return std::to_string(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// divergence
// ---------------------------------------------------------------------------

json divergence_defaults() {
  return json{{"backend", "logfloat"}, {"horizon", 1000000},   {"ratio_tolerance", 0.01},
              {"record_points", 512},  {"seed", 0},            {"w1", "1/2"},
              {"w2", "1/2"},           {"window_lo", 1000},    {"window_hi", 100000}};
}

}  // namespace

ExperimentReport run_divergence(const std::string& config_json) {
  const json cfg =
      merge_defaults(parse_user_config(config_json), divergence_defaults(), "divergence");
  require_backend(cfg, "logfloat",
                  "variable-rate masses are running log-domain products");
  const long horizon = cfg_int(cfg, "horizon", 2, 10000000);
  const long lo = cfg_int(cfg, "window_lo", 1, horizon);
  const long hi = cfg_int(cfg, "window_hi", lo, horizon);
  const double tol = cfg_num(cfg, "ratio_tolerance", 1e-9, 1.0);
  const long points = cfg_int(cfg, "record_points", 2, 1000000);
  const Rational w1 = cfg_fraction(cfg, "w1");
  const Rational w2 = cfg_fraction(cfg, "w2");
  if (w1 <= 0 || w2 <= 0 || w1 + w2 > 1) {
    throw config_error("weights must be positive with w1 + w2 <= 1");
  }
  const double w1d = to_double(w1);
  const double w2d = to_double(w2);

  std::set<long> marks{1, horizon};
  for (long j = 0; j < points; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(points - 1);
    const long t = std::lround(std::exp(frac * std::log(static_cast<double>(horizon))));
    marks.insert(std::clamp(t, 1L, horizon));
  }

  CompensatedSum l1, l2;  // running ln mu_i(0^t)
  StepAudit audit;
  double wmin = kInf, wmax = -kInf;
  std::vector<std::vector<std::string>> rows;
  rows.reserve(marks.size());

  for (long t = 1; t <= horizon; ++t) {
    const double td = static_cast<double>(t);
    const double f1 = 0.5 / (td * td * td);
    const double f2 = 0.5 / (td * td);
    const double m1 = std::exp(l1.value());
    const double m2 = std::exp(l2.value());
    const double den = w1d * m1 + w2d * m2;
    const double xp = (w1d * m1 * f1 + w2d * m2 * f2) / den;
    const double ratio = xp / f1;
    const double rot = ratio / td;
    audit.check(f1, xp);
    if (t >= lo && t <= hi) {
      wmin = std::min(wmin, rot);
      wmax = std::max(wmax, rot);
    }
    if (marks.count(t) != 0) {
      rows.push_back({cell(t), cell(l1.value()), cell(l2.value()),
                      cell(std::log(den)), cell(f1), cell(xp), cell(ratio), cell(rot)});
    }
    l1.add(std::log1p(-f1));
    l2.add(std::log1p(-f2));
  }

  const double c1 = std::exp(l1.value());
  const double c2 = std::exp(l2.value());
  const double k_star = w2d * c2 / (w1d * c1 + w2d * c2);
  const double rel_dev =
      std::max(std::abs(wmin - k_star), std::abs(wmax - k_star)) / k_star;

  std::vector<std::pair<std::string, bool>> flags;
  flags.emplace_back("product_c1_in_range", std::abs(c1 - 0.450) <= 0.001);
  flags.emplace_back("product_c2_in_range", std::abs(c2 - 0.358) <= 0.001);
  flags.emplace_back("ratio_linear_growth", rel_dev <= tol);
  flags.emplace_back("step_audit_clean", audit.violations == 0);

  json summary;
  summary["c1_hat"] = c1;
  summary["c2_hat"] = c2;
  summary["ratio_constant"] = k_star;
  summary["ratio_over_t_min"] = wmin;
  summary["ratio_over_t_max"] = wmax;
  summary["ratio_rel_dev_max"] = rel_dev;
  summary["window_lo"] = lo;
  summary["window_hi"] = hi;
  summary["steps_evaluated"] = audit.steps;
  summary["hd_violations"] = audit.violations;

  return finalize("divergence", cfg, "n/a",
                  {"t", "log_mu1", "log_mu2", "log_xi", "mu_pred_1", "xi_pred_1",
                   "ratio", "ratio_over_t"},
                  std::move(rows), std::move(flags), summary);
}

namespace {

// ---------------------------------------------------------------------------
// bernoulli-mixture: periodic mode
// ---------------------------------------------------------------------------

json periodic_defaults() {
  return json{{"mode", "periodic"},
              {"backend", "exact"},
              {"horizon", 100},
              {"pattern", "01"},
              {"seed", 0},
              {"thetas", json::array({"1/4", "3/4"})},
              {"weights", json::array({"1/2", "1/2"})}};
}

ExperimentReport run_bm_periodic(const json& user) {
  const json cfg = merge_defaults(user, periodic_defaults(), "bernoulli-mixture/periodic");
  require_backend(cfg, "exact",
                  "the alternation witness is an exact rational identity");
  const long horizon = cfg_int(cfg, "horizon", 1, 4096);
  const std::string pattern_digits = cfg_str(cfg, "pattern");
  if (pattern_digits.empty()) throw config_error("pattern must be nonempty");
  FiniteString pattern;
  try {
    pattern = FiniteString::from_digits(pattern_digits, Alphabet(2));
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("key 'pattern': ") + e.what());
  }

  std::vector<Rational> thetas = cfg_fraction_list(cfg, "thetas");
  std::vector<Rational> weights = cfg_fraction_list(cfg, "weights");
  std::unique_ptr<constructions::ThetaClass> cls;
  try {
    cls = std::make_unique<constructions::ThetaClass>(thetas, weights);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  const std::size_t k = cls->size();

  const bool default_shape = cfg.at("thetas") == periodic_defaults().at("thetas") &&
                             cfg.at("weights") == periodic_defaults().at("weights") &&
                             pattern_digits == "01";

  std::vector<Rational> mass(k, Rational(1));
  std::set<Rational> distinct;
  bool in_unit = true;
  bool alternation = true;
  const long stride = std::max(1L, horizon / 256);

  std::vector<std::string> columns{"t", "next_symbol", "pred_next", "pred_next_float"};
  for (std::size_t j = 0; j < k; ++j) columns.push_back("w_post_" + std::to_string(j));
  std::vector<std::vector<std::string>> rows;

  Rational xi_final(1);
  std::vector<Rational> posterior(k);
  for (long t = 0; t < horizon; ++t) {
    const uint8_t next = pattern[static_cast<std::size_t>(t) % pattern.size()];
    Rational xi_cur(0), xi_next(0);
    for (std::size_t j = 0; j < k; ++j) {
      const Rational wm = weights[j] * mass[j];
      xi_cur += wm;
      xi_next += wm * (next == 1 ? thetas[j] : 1 - thetas[j]);
    }
    const Rational pred = xi_next / xi_cur;
    distinct.insert(pred);
    in_unit = in_unit && pred >= 0 && pred <= 1;
    if (default_shape) {
      const Rational expected = (t % 2 == 0) ? Rational(1, 2) : Rational(3, 8);
      alternation = alternation && pred == expected;
    }
    for (std::size_t j = 0; j < k; ++j) posterior[j] = weights[j] * mass[j] / xi_cur;
    if (t % stride == 0 || t == horizon - 1) {
      std::vector<std::string> row{cell(t), std::to_string(int(next)),
                                   format_fraction(pred), cell(to_double(pred))};
      for (std::size_t j = 0; j < k; ++j) row.push_back(format_fraction(posterior[j]));
      rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < k; ++j) {
      mass[j] *= next == 1 ? thetas[j] : 1 - thetas[j];
    }
    xi_final = xi_cur;
  }

  std::vector<std::pair<std::string, bool>> flags;
  flags.emplace_back("predictive_in_unit_interval", in_unit);
  if (default_shape) flags.emplace_back("exact_alternation_matches", alternation);

  json summary;
  summary["horizon"] = horizon;
  summary["pattern"] = pattern_digits;
  json dvals = json::array();
  for (const Rational& v : distinct) dvals.push_back(format_fraction(v));
  summary["distinct_predictive"] = std::move(dvals);
  json post = json::array();
  for (std::size_t j = 0; j < k; ++j) post.push_back(format_fraction(posterior[j]));
  summary["posterior_final"] = std::move(post);
  summary["alternation_checked"] = default_shape;

  return finalize("bernoulli-mixture", cfg, "n/a", std::move(columns), std::move(rows),
                  std::move(flags), summary);
}

// ---------------------------------------------------------------------------
// bernoulli-mixture: dense mode
// ---------------------------------------------------------------------------

json dense_defaults() {
  return json{{"mode", "dense"},       {"backend", "logfloat"},
              {"grid_m", 6},           {"theta_true", "19/64"},
              {"horizon", 10000},      {"num_runs", 100},
              {"seed", 1},             {"tolerance", 0.02},
              {"required_fraction", 0.95}};
}

ExperimentReport run_bm_dense(const json& user) {
  const json cfg = merge_defaults(user, dense_defaults(), "bernoulli-mixture/dense");
  require_backend(cfg, "logfloat",
                  "long sampled histories drive exact rationals to unbounded size");
  const long m = cfg_int(cfg, "grid_m", 1, 8);
  const long horizon = cfg_int(cfg, "horizon", 1, 1000000);
  const long runs = cfg_int(cfg, "num_runs", 1, 10000);
  const long seed0 = cfg_int(cfg, "seed", 0, std::numeric_limits<long>::max());
  const double tolerance = cfg_num(cfg, "tolerance", 1e-9, 1.0);
  const double required_fraction = cfg_num(cfg, "required_fraction", 0.0, 1.0);
  const Rational theta_true = cfg_fraction(cfg, "theta_true");

  const long denom = 1L << m;
  const Rational scaled = theta_true * denom;
  if (denominator(scaled) != 1 || scaled < 1 || scaled > denom - 1) {
    throw config_error("theta_true must be an interior multiple of 1/2^grid_m");
  }
  const std::size_t true_index = scaled.convert_to<std::size_t>() - 1;
  const std::size_t k = static_cast<std::size_t>(denom - 1);

  std::vector<double> theta(k), log_t(k), log_1mt(k);
  for (std::size_t j = 0; j < k; ++j) {
    theta[j] = static_cast<double>(j + 1) / static_cast<double>(denom);
    log_t[j] = std::log(theta[j]);
    log_1mt[j] = std::log1p(-theta[j]);
  }
  const double theta_d = theta[true_index];

  StepAudit audit;
  long within_count = 0;
  double max_dev = 0, sum_dev = 0;
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(runs));
  std::vector<double> lw(k);

  for (long r = 0; r < runs; ++r) {
    const std::uint64_t seed = static_cast<std::uint64_t>(seed0) +
                               static_cast<std::uint64_t>(r);
    std::mt19937_64 gen(seed);
    // portable 53-bit uniform: identical draws on every standard library
    auto unif = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::fill(lw.begin(), lw.end(), 0.0);  // uniform prior cancels
    const long audit_before = audit.violations;

    auto predictive = [&]() {
      const double mx = *std::max_element(lw.begin(), lw.end());
      double z = 0, num = 0;
      for (std::size_t j = 0; j < k; ++j) {
        const double e = std::exp(lw[j] - mx);
        z += e;
        num += e * theta[j];
      }
      return num / z;
    };

    for (long t = 0; t < horizon; ++t) {
      audit.check(theta_d, predictive());
      const int bit = unif() < theta_d ? 1 : 0;
      for (std::size_t j = 0; j < k; ++j) lw[j] += bit ? log_t[j] : log_1mt[j];
    }

    const double p1 = predictive();
    const double dev = std::abs(p1 - theta_d);
    const bool within = dev <= tolerance;
    within_count += within ? 1 : 0;
    max_dev = std::max(max_dev, dev);
    sum_dev += dev;

    const double mx = *std::max_element(lw.begin(), lw.end());
    double z = 0;
    std::size_t argmax = 0;
    for (std::size_t j = 0; j < k; ++j) {
      z += std::exp(lw[j] - mx);
      if (lw[j] > lw[argmax]) argmax = j;
    }
    const double w_true = std::exp(lw[true_index] - mx) / z;

    rows.push_back({cell(r), std::to_string(seed), cell(p1), cell(dev),
                    within ? "1" : "0", cell(horizon),
                    cell(audit.violations - audit_before), cell(w_true),
                    cell(static_cast<long>(argmax))});
  }

  const long required =
      static_cast<long>(std::ceil(required_fraction * static_cast<double>(runs) - 1e-9));
  std::vector<std::pair<std::string, bool>> flags;
  flags.emplace_back("dense_final_within_tolerance", within_count >= required);
  flags.emplace_back("step_audit_clean", audit.violations == 0);

  json summary;
  summary["grid_size"] = k;
  summary["theta_true"] = format_fraction(theta_true);
  summary["horizon"] = horizon;
  summary["runs"] = runs;
  summary["within_count"] = within_count;
  summary["required_count"] = required;
  summary["tolerance"] = tolerance;
  summary["max_final_deviation"] = max_dev;
  summary["mean_final_deviation"] = sum_dev / static_cast<double>(runs);
  summary["steps_evaluated"] = audit.steps;
  summary["hd_violations"] = audit.violations;

  return finalize("bernoulli-mixture", cfg, "n/a",
                  {"run", "seed", "final_pred_1", "final_deviation", "within",
                   "steps", "hd_violations", "final_w_true", "final_w_argmax"},
                  std::move(rows), std::move(flags), summary);
}

// ---------------------------------------------------------------------------
// bernoulli-mixture: gappy mode
// ---------------------------------------------------------------------------

json gappy_defaults() {
  return json{{"mode", "gappy"},
              {"backend", "logfloat"},
              {"horizon", 10000},
              {"thetas", json::array({"1/4", "1/2"})},
              {"weights", json::array({"1/2", "1/2"})},
              {"theta0", "1/4"},
              {"theta1", "1/2"},
              {"threshold", 0.05},
              {"io_min_count", 100},
              {"slope_fit_start", 200},
              {"suppression_slope_tolerance", 0.1},
              {"seed", 0}};
}

ExperimentReport run_bm_gappy(const json& user) {
  const json cfg = merge_defaults(user, gappy_defaults(), "bernoulli-mixture/gappy");
  require_backend(cfg, "logfloat",
                  "doubly-random horizons drive exact rationals to unbounded size");
  const long horizon = cfg_int(cfg, "horizon", 10, 10000000);
  const double threshold = cfg_num(cfg, "threshold", 1e-9, 1.0);
  const long io_min_count = cfg_int(cfg, "io_min_count", 1, horizon);
  const long fit_start = cfg_int(cfg, "slope_fit_start", 1, horizon - 1);
  const double slope_tol = cfg_num(cfg, "suppression_slope_tolerance", 1e-9, 10.0);
  const Rational theta0 = cfg_fraction(cfg, "theta0");
  const Rational theta1 = cfg_fraction(cfg, "theta1");

  std::unique_ptr<constructions::ThetaClass> cls;
  std::size_t i0 = 0, i1 = 0;
  constructions::GapCertificate cert;
  try {
    cls = std::make_unique<constructions::ThetaClass>(cfg_fraction_list(cfg, "thetas"),
                                                      cfg_fraction_list(cfg, "weights"));
    i0 = cls->index_of(theta0);
    i1 = cls->index_of(theta1);
    if (!constructions::gap_check(*cls, theta0, theta1)) {
      throw config_error("the class has members strictly between theta0 and theta1");
    }
    cert = constructions::kl_middle(theta0, theta1);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  } catch (const degenerate_error& e) {
    throw config_error(e.what());
  }

  const std::size_t k = cls->size();
  const bool two_class = k == 2;
  const auto& thetas = cls->thetas();
  const auto& weights = cls->weights();

  std::vector<double> theta_d(k), log_t(k), log_1mt(k), log_prior(k);
  for (std::size_t j = 0; j < k; ++j) {
    theta_d[j] = to_double(thetas[j]);
    log_t[j] = std::log(theta_d[j]);
    log_1mt[j] = std::log1p(-theta_d[j]);
    log_prior[j] = std::log(to_double(weights[j]));
  }
  const double t0d = theta_d[i0];
  const double t1d = theta_d[i1];

  // Per-extra suppression constants: delta is the per-step log-penalty of
  // the extra coin relative to theta0 at frequency theta_bar; c_pair bounds
  // the wobble from the +-1 corridor around n * theta_bar.
  std::vector<std::size_t> extras;
  std::vector<double> delta(k, 0.0), c_pair(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    if (j == i0 || j == i1) continue;
    extras.push_back(j);
    delta[j] = constructions::kl_divergence(cert.theta_bar, theta_d[j]) -
               constructions::kl_divergence(cert.theta_bar, t0d);
    c_pair[j] = std::abs(std::log(theta_d[j] * (1 - t0d) / (t0d * (1 - theta_d[j]))));
  }

  const constructions::NonconvergenceBounds b0 =
      constructions::nonconvergence_bounds(cert, weights[i0], weights[i1]);
  const constructions::NonconvergenceBounds b1 =
      constructions::nonconvergence_bounds(cert, weights[i1], weights[i0]);
  const double derived_floor = b1.c0 * (t1d - t0d);

  const FiniteString x =
      constructions::doubly_random_sequence(cert.theta_bar, static_cast<std::size_t>(horizon));

  std::vector<CompensatedSum> lm(k);  // ln mass of each coin on the prefix
  StepAudit audit;
  long exceed_count = 0, last_exceed = -1, n1 = 0;
  bool corridor_ok = true, suppression_bound_ok = true;
  double max_def0 = 1, max_def1 = 1;
  double min_w0 = kInf, min_w1 = kInf, min_dev = kInf;
  double final_pred = 0;
  std::vector<double> fit_start_lw(k, 0.0), fit_end_lw(k, 0.0);

  const long stride = std::max(1L, horizon / 1000);
  std::vector<std::string> columns{"t",         "x_t",  "freq",      "pred_1",
                                   "deviation", "def0", "def1"};
  for (std::size_t j = 0; j < k; ++j) columns.push_back("log_w_post_" + std::to_string(j));
  std::vector<std::vector<std::string>> rows;

  std::vector<double> lw(k);
  for (long t = 1; t <= horizon; ++t) {
    const int bit = x[static_cast<std::size_t>(t - 1)];
    n1 += bit;
    for (std::size_t j = 0; j < k; ++j) {
      lm[j].add(bit ? log_t[j] : log_1mt[j]);
    }
    corridor_ok = corridor_ok &&
                  std::abs(static_cast<double>(n1) -
                           static_cast<double>(t) * cert.theta_bar) < 1.0 + 1e-9;

    double mx = -kInf;
    for (std::size_t j = 0; j < k; ++j) {
      lw[j] = log_prior[j] + lm[j].value();
      mx = std::max(mx, lw[j]);
    }
    double z = 0;
    for (std::size_t j = 0; j < k; ++j) z += std::exp(lw[j] - mx);
    const double lxi = mx + std::log(z);

    double pred = 0;
    for (std::size_t j = 0; j < k; ++j) pred += std::exp(lw[j] - lxi) * theta_d[j];
    final_pred = pred;
    audit.check(t0d, pred);

    const double dev = std::abs(pred - t0d);
    min_dev = std::min(min_dev, dev);
    if (dev >= threshold) {
      ++exceed_count;
      last_exceed = t;
    }

    const double def0 = std::exp(lm[i0].value() - lxi);
    const double def1 = std::exp(lm[i1].value() - lxi);
    max_def0 = std::max(max_def0, def0);
    max_def1 = std::max(max_def1, def1);
    min_w0 = std::min(min_w0, std::exp(lw[i0] - lxi));
    min_w1 = std::min(min_w1, std::exp(lw[i1] - lxi));

    for (std::size_t j : extras) {
      const double bound = std::log(to_double(weights[j] / weights[i0])) + c_pair[j] -
                           static_cast<double>(t) * delta[j];
      if (lw[j] - lxi > bound + 1e-9) suppression_bound_ok = false;
    }
    if (t == fit_start) {
      for (std::size_t j = 0; j < k; ++j) fit_start_lw[j] = lw[j] - lxi;
    }
    if (t == horizon) {
      for (std::size_t j = 0; j < k; ++j) fit_end_lw[j] = lw[j] - lxi;
    }

    if (t % stride == 0 || t == horizon) {
      std::vector<std::string> row{
          cell(t),
          std::to_string(bit),
          cell(static_cast<double>(n1) / static_cast<double>(t)),
          cell(pred),
          cell(dev),
          cell(def0),
          cell(def1)};
      for (std::size_t j = 0; j < k; ++j) row.push_back(cell(lw[j] - lxi));
      rows.push_back(std::move(row));
    }
  }

  bool slopes_ok = true;
  json slopes = json::array();
  for (std::size_t j : extras) {
    const double slope = -(fit_end_lw[j] - fit_start_lw[j]) /
                         static_cast<double>(horizon - fit_start);
    const double rel = std::abs(slope - delta[j]) / delta[j];
    slopes_ok = slopes_ok && rel <= slope_tol;
    json s;
    s["theta"] = format_fraction(thetas[j]);
    s["delta"] = delta[j];
    s["slope"] = slope;
    s["rel_dev"] = rel;
    slopes.push_back(std::move(s));
  }

  std::vector<std::pair<std::string, bool>> flags;
  flags.emplace_back("nonconvergence_io", exceed_count >= io_min_count);
  flags.emplace_back("tracking_within_corridor", corridor_ok);
  flags.emplace_back("step_audit_clean", audit.violations == 0);
  if (two_class) {
    flags.emplace_back("deficiency_theta0_bounded", max_def0 <= b0.deficiency_bound + 1e-9);
    flags.emplace_back("deficiency_theta1_bounded", max_def1 <= b1.deficiency_bound + 1e-9);
    flags.emplace_back("posterior_floor_theta0", min_w0 >= b0.c0 - 1e-9);
    flags.emplace_back("posterior_floor_theta1", min_w1 >= b1.c0 - 1e-9);
    flags.emplace_back("deviation_floor_holds", min_dev >= derived_floor - 1e-9);
  }
  if (!extras.empty()) {
    flags.emplace_back("suppression_slope_within_tolerance", slopes_ok);
    flags.emplace_back("suppression_bound_holds", suppression_bound_ok);
  }

  json summary;
  summary["theta_bar"] = cert.theta_bar;
  summary["lipschitz_c"] = cert.lipschitz_c;
  summary["threshold"] = threshold;
  summary["exceed_count"] = exceed_count;
  summary["last_exceed"] = last_exceed;
  summary["final_pred_1"] = final_pred;
  summary["min_deviation"] = min_dev;
  summary["max_deficiency_theta0"] = max_def0;
  summary["max_deficiency_theta1"] = max_def1;
  summary["posterior_min_theta0"] = min_w0;
  summary["posterior_min_theta1"] = min_w1;
  summary["steps_evaluated"] = audit.steps;
  summary["hd_violations"] = audit.violations;
  if (two_class) {
    summary["deficiency_bound_theta0"] = b0.deficiency_bound;
    summary["deficiency_bound_theta1"] = b1.deficiency_bound;
    summary["posterior_floor_c0"] = b0.c0;
    summary["derived_deviation_bound"] = derived_floor;
  }
  if (!extras.empty()) summary["suppression"] = std::move(slopes);

  return finalize("bernoulli-mixture", cfg, "n/a", std::move(columns), std::move(rows),
                  std::move(flags), summary);
}

// ---------------------------------------------------------------------------
// bound-check
// ---------------------------------------------------------------------------

json bound_check_defaults() {
  return json{{"backend", "exact"},
              {"horizon", 12},
              {"mu_index", -1},
              {"seed", 0},
              {"thetas", json::array({"3/10", "1/2", "7/10"})},
              {"weights", json::array({"1/3", "1/3", "1/3"})}};
}

}  // namespace

ExperimentReport run_bound_check(const std::string& config_json) {
  const json cfg = merge_defaults(parse_user_config(config_json), bound_check_defaults(),
                                  "bound-check");
  const std::string backend_name_str = cfg_str(cfg, "backend");
  Backend backend;
  try {
    backend = parse_backend(backend_name_str);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  const long horizon = cfg_int(cfg, "horizon", 1, 16);

  MixturePtr mix;
  try {
    constructions::ThetaClass cls(cfg_fraction_list(cfg, "thetas"),
                                  cfg_fraction_list(cfg, "weights"));
    mix = cls.mixture(backend);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  const long size = static_cast<long>(mix->size());
  const long mu_index = cfg_int(cfg, "mu_index", -1, size - 1);

  std::vector<std::size_t> targets;
  if (mu_index < 0) {
    for (long i = 0; i < size; ++i) targets.push_back(static_cast<std::size_t>(i));
  } else {
    targets.push_back(static_cast<std::size_t>(mu_index));
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, bool>> flags;
  json summary;
  for (std::size_t i : targets) {
    const diagnostics::BoundLedger ledger =
        diagnostics::exact_bound_ledger(*mix, i, static_cast<int>(horizon));
    CompensatedSum csq, ch, ckl;
    for (std::size_t t = 0; t < ledger.expected.size(); ++t) {
      const diagnostics::StepDistances& d = ledger.expected[t];
      csq.add(d.sq_ratio);
      ch.add(d.hellinger);
      ckl.add(d.kl);
      rows.push_back({cell(i), cell(t + 1), cell(d.hellinger), cell(d.kl),
                      cell(d.sq_ratio), cell(csq.value()), cell(ch.value()),
                      cell(ckl.value())});
    }
    const std::string tag = "mu_" + std::to_string(i);
    flags.emplace_back("chain_holds_" + tag, ledger.chain_holds());
    json s;
    s["weight_bound"] = ledger.weight_bound;
    s["cum_sq_ratio"] = ledger.cum_sq_ratio;
    s["cum_hellinger"] = ledger.cum_hellinger;
    s["cum_kl"] = ledger.cum_kl;
    s["slack"] = ledger.weight_bound - ledger.cum_kl;
    summary[tag] = std::move(s);
  }
  summary["horizon"] = horizon;

  return finalize("bound-check", cfg, "n/a",
                  {"mu_index", "t", "h_t", "d_t", "sq_ratio", "cum_sq_ratio",
                   "cum_hellinger", "cum_kl"},
                  std::move(rows), std::move(flags), summary);
}

namespace {

// ---------------------------------------------------------------------------
// diagonalize
// ---------------------------------------------------------------------------

json diagonalize_discrete_defaults() {
  return json{{"mode", "discrete"},
              {"backend", "exact"},
              {"chunks", 20},
              {"seed", 0},
              {"target", "inverse-quadratic"}};
}

json diagonalize_continuous_defaults() {
  return json{{"mode", "continuous"},
              {"backend", "exact"},
              {"horizon", 100},
              {"epsilon", "0"},
              {"seed", 0},
              {"environment", json{{"kind", "bernoulli"}, {"theta", "7/10"}}}};
}

ExperimentReport run_diag_discrete(const json& user) {
  const json cfg =
      merge_defaults(user, diagonalize_discrete_defaults(), "diagonalize/discrete");
  require_backend(cfg, "exact", "chunk witnesses are exact rational inequalities");
  const long chunks = cfg_int(cfg, "chunks", 1, 24);
  if (cfg_str(cfg, "target") != "inverse-quadratic") {
    throw config_error("the only built-in target is \"inverse-quadratic\"");
  }

  constructions::DiscreteSemimeasure p;
  p.eval = [](std::uint64_t n) { return Rational(BigInt(1), BigInt(n) * (n + 1)); };
  p.mass_bound = 1;

  const constructions::DiscreteDiagonalization diag =
      constructions::discrete_diagonalize(p, static_cast<int>(chunks));

  bool witnesses = true;
  std::vector<std::vector<std::string>> rows;
  for (const constructions::ChunkWitness& w : diag.chunks) {
    witnesses = witnesses && w.holds;
    rows.push_back({cell(w.n), std::to_string(w.x_n), format_fraction(w.p_at_x),
                    format_fraction(w.q_at_x), format_fraction(w.ratio_bound),
                    w.holds ? "1" : "0"});
  }
  const Rational expected(BigInt(chunks), BigInt(chunks + 1));

  std::vector<std::pair<std::string, bool>> flags;
  flags.emplace_back("witnesses_hold", witnesses);
  flags.emplace_back("partial_mass_telescopes", diag.q_partial_mass == expected);

  json summary;
  summary["chunks"] = chunks;
  summary["q_partial_mass"] = format_fraction(diag.q_partial_mass);
  summary["q_partial_mass_expected"] = format_fraction(expected);

  return finalize("diagonalize", cfg, "n/a",
                  {"n", "x_n", "p_at_x", "q_at_x", "ratio_bound", "holds"},
                  std::move(rows), std::move(flags), summary);
}

ExperimentReport run_diag_continuous(const json& user) {
  const json cfg =
      merge_defaults(user, diagonalize_continuous_defaults(), "diagonalize/continuous");
  const std::string backend_name_str = cfg_str(cfg, "backend");
  Backend backend;
  try {
    backend = parse_backend(backend_name_str);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  const long horizon = cfg_int(cfg, "horizon", 1, 1000);
  const Rational eps = cfg_fraction(cfg, "epsilon");
  if (eps < 0) throw config_error("epsilon must be nonnegative");

  EnvPtr env;
  try {
    env = detail::env_from_json(cfg.at("environment"), backend);
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("key 'environment': ") + e.what());
  }
  if (env->alphabet().size != 2) {
    throw config_error("the adversarial construction needs a binary environment");
  }

  const constructions::AdversarialPath path =
      constructions::continuous_adversarial(*env, eps, static_cast<std::size_t>(horizon));

  const double per_step = std::log(0.5 + 2.0 * to_double(eps));
  bool within_all = true;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t t = 1; t <= path.path.size(); ++t) {
    const double envelope = static_cast<double>(t) * per_step;
    const bool within = path.mu_log_mass[t - 1] <= envelope + 1e-9;
    within_all = within_all && within;
    rows.push_back({cell(t), std::to_string(int(path.path[t - 1])),
                    cell(path.mu_log_mass[t - 1]), cell(envelope), within ? "1" : "0"});
  }
  const bool rho_concentrates = path.rho->mass(path.path) == Prob::one(Backend::exact);

  std::vector<std::pair<std::string, bool>> flags;
  flags.emplace_back("envelope_holds", within_all);
  flags.emplace_back("rho_concentrates_on_path", rho_concentrates);

  json summary;
  summary["path"] = path.path.to_digits();
  summary["epsilon"] = format_fraction(eps);
  summary["per_step_log_budget"] = per_step;
  summary["envelope_log_final"] = path.envelope_log;
  summary["mu_log_final"] = path.mu_log_mass.back();

  return finalize("diagonalize", cfg, "n/a",
                  {"t", "x_t", "mu_log_mass", "envelope_log", "within"}, std::move(rows),
                  std::move(flags), summary);
}

// ---------------------------------------------------------------------------
// toy-m
// ---------------------------------------------------------------------------

json toy_m_defaults() {
  return json{{"backend", "exact"},   {"max_program_bits", 16},
              {"output_horizon", 64}, {"zeros_length", 32},
              {"alt_length", 32},     {"export_table", false},
              {"seed", 0}};
}

FiniteString repeat_bits(const char* unit, std::size_t len) {
  FiniteString out(Alphabet(2));
  const std::size_t ulen = std::string(unit).size();
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(static_cast<uint8_t>(unit[i % ulen] - '0'));
  }
  return out;
}

json audit_to_json(const toym::DetBoundAudit& a) {
  json out;
  out["sum_sq_gap"] = a.sum_sq_gap;
  out["neg_half_log_mass"] = a.neg_half_log_mass;
  out["half_ln2_km"] = a.half_ln2_km;
  out["km"] = a.km;
  out["chain_holds"] = a.chain_holds;
  return out;
}

}  // namespace

ExperimentReport run_toy_m(const std::string& config_json) {
  const json cfg =
      merge_defaults(parse_user_config(config_json), toy_m_defaults(), "toy-m");
  require_backend(cfg, "exact", "the table is exact dyadic by construction");
  const long bits = cfg_int(cfg, "max_program_bits", 2, 24);
  const long horizon = cfg_int(cfg, "output_horizon", 1, 4096);
  const long zeros_len = cfg_int(cfg, "zeros_length", 1, horizon);
  const long alt_len = cfg_int(cfg, "alt_length", 1, horizon);
  const bool export_table = cfg.at("export_table").get<bool>();

  const toym::PriorTable table(static_cast<int>(bits), static_cast<std::size_t>(horizon));
  const std::vector<toym::PriorTable::Entry> entries = table.entries_sorted();

  bool kraft_ok = true, km_consistent = true, monotone = true;
  Rational root_children(0);
  for (const toym::PriorTable::Entry& e : entries) {
    kraft_ok = kraft_ok && e.m <= 1;
    km_consistent =
        km_consistent && e.m * rational_pow(Rational(2), static_cast<unsigned long>(e.km)) >= 1;
    if (e.digits.size() == 1) root_children += e.m;
    if (e.digits.size() < table.output_horizon()) {
      const FiniteString x = FiniteString::from_digits(e.digits, Alphabet(2));
      monotone = monotone && e.m >= table.m(x.append(0)) + table.m(x.append(1));
    }
  }
  monotone = monotone && root_children <= 1;

  const FiniteString zeros = repeat_bits("0", static_cast<std::size_t>(zeros_len));
  const FiniteString alt = repeat_bits("01", static_cast<std::size_t>(alt_len));
  const toym::DetBoundAudit zeros_audit = toym::det_bound_audit(zeros, table);
  const toym::DetBoundAudit alt_audit = toym::det_bound_audit(alt, table);

  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  if (export_table) {
    columns = {"x", "m", "km"};
    rows.reserve(entries.size());
    for (const toym::PriorTable::Entry& e : entries) {
      rows.push_back({e.digits, format_fraction(e.m), cell(e.km)});
    }
  } else {
    columns = {"seq", "t", "conditional", "cum_sq_gap"};
    double cum = 0;
    for (std::size_t t = 0; t < zeros_audit.conditionals.size(); ++t) {
      const double gap = 1.0 - zeros_audit.conditionals[t];
      cum += gap * gap;
      rows.push_back({"zeros", cell(t + 1), cell(zeros_audit.conditionals[t]), cell(cum)});
    }
    cum = 0;
    for (std::size_t t = 0; t < alt_audit.conditionals.size(); ++t) {
      const double gap = 1.0 - alt_audit.conditionals[t];
      cum += gap * gap;
      rows.push_back({"alt", cell(t + 1), cell(alt_audit.conditionals[t]), cell(cum)});
    }
  }

  std::vector<std::pair<std::string, bool>> flags;
  flags.emplace_back("kraft_mass_le_1", kraft_ok);
  flags.emplace_back("m_dominates_2_pow_neg_km", km_consistent);
  flags.emplace_back("semimeasure_monotone", monotone);
  flags.emplace_back("zeros_chain_holds", zeros_audit.chain_holds);
  flags.emplace_back("alt_chain_holds", alt_audit.chain_holds);

  json summary;
  summary["table_size"] = table.size();
  summary["m_zeros"] = format_fraction(table.m(zeros));
  summary["m_alt"] = format_fraction(table.m(alt));
  summary["zeros_audit"] = audit_to_json(zeros_audit);
  summary["alt_audit"] = audit_to_json(alt_audit);

  return finalize("toy-m", cfg, toym::kMachineSpecVersion, std::move(columns),
                  std::move(rows), std::move(flags), summary);
}

ExperimentReport run_bernoulli_mixture(const std::string& config_json) {
  const json user = parse_user_config(config_json);
  std::string mode = "gappy";
  if (user.contains("mode")) {
    if (!user.at("mode").is_string()) throw config_error("key 'mode' must be a string");
    mode = user.at("mode").get<std::string>();
  }
  if (mode == "periodic") return run_bm_periodic(user);
  if (mode == "dense") return run_bm_dense(user);
  if (mode == "gappy") return run_bm_gappy(user);
  throw config_error("unknown mode '" + mode + "' (periodic, dense, gappy)");
}

ExperimentReport run_diagonalize(const std::string& config_json) {
  const json user = parse_user_config(config_json);
  std::string mode = "discrete";
  if (user.contains("mode")) {
    if (!user.at("mode").is_string()) throw config_error("key 'mode' must be a string");
    mode = user.at("mode").get<std::string>();
  }
  if (mode == "discrete") return run_diag_discrete(user);
  if (mode == "continuous") return run_diag_continuous(user);
  throw config_error("unknown mode '" + mode + "' (discrete, continuous)");
}

ExperimentReport run(const std::string& experiment, const std::string& config_json) {
  if (experiment == "divergence") return run_divergence(config_json);
  if (experiment == "bernoulli-mixture") return run_bernoulli_mixture(config_json);
  if (experiment == "bound-check") return run_bound_check(config_json);
  if (experiment == "diagonalize") return run_diagonalize(config_json);
  if (experiment == "toy-m") return run_toy_m(config_json);
  throw config_error("unknown experiment '" + experiment + "'");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "divergence", "bernoulli-mixture", "bound-check", "diagonalize", "toy-m"};
  return names;
}

std::string default_config(const std::string& experiment, const std::string& mode) {
  json d;
  if (experiment == "bernoulli-mixture") {
    if (mode.empty() || mode == "gappy") {
      d = gappy_defaults();
    } else if (mode == "periodic") {
      d = periodic_defaults();
    } else if (mode == "dense") {
      d = dense_defaults();
    } else {
      throw config_error("unknown mode '" + mode + "' (periodic, dense, gappy)");
    }
  } else if (experiment == "diagonalize") {
    if (mode.empty() || mode == "discrete") {
      d = diagonalize_discrete_defaults();
    } else if (mode == "continuous") {
      d = diagonalize_continuous_defaults();
    } else {
      throw config_error("unknown mode '" + mode + "' (discrete, continuous)");
    }
  } else if (experiment == "divergence" || experiment == "bound-check" ||
             experiment == "toy-m") {
    if (!mode.empty()) {
      throw config_error("experiment '" + experiment + "' has no modes");
    }
    if (experiment == "divergence") {
      d = divergence_defaults();
    } else if (experiment == "bound-check") {
      d = bound_check_defaults();
    } else {
      d = toy_m_defaults();
    }
  } else {
    throw config_error("unknown experiment '" + experiment + "'");
  }
  return d.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

namespace {

std::string summary_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "# " << kReportSchema << '\n';
  os << "# experiment=" << experiment << '\n';
  os << "# config_hash=" << config_hash << '\n';
  os << "# library_version=" << library_version << '\n';
  os << "# machine_spec_version=" << machine_spec_version << '\n';
  os << "# config=" << config_canonical << '\n';
  const json summary = json::parse(summary_json);
  for (auto it = summary.begin(); it != summary.end(); ++it) {
    os << "# summary." << it.key() << '=' << summary_scalar(it.value()) << '\n';
  }
  for (const auto& [name, pass] : flags) {
    os << "# flag." << name << '=' << (pass ? "pass" : "fail") << '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string ExperimentReport::to_json() const {
  json doc;
  doc["schema"] = kReportSchema;
  doc["experiment"] = experiment;
  json prov;
  prov["config"] = json::parse(config_canonical);
  prov["config_hash"] = config_hash;
  prov["library_version"] = library_version;
  prov["machine_spec_version"] = machine_spec_version;
  doc["provenance"] = std::move(prov);
  doc["summary"] = json::parse(summary_json);
  json f;
  for (const auto& [name, pass] : flags) f[name] = pass;
  doc["flags"] = std::move(f);
  doc["columns"] = columns;
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

bool ExperimentReport::all_pass() const {
  for (const auto& [name, pass] : flags) {
    if (!pass) return false;
  }
  return true;
}

}  // namespace semimix::experiments
