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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "semimix/errors.hpp"
#include "semimix/experiments.hpp"

using namespace semimix;
using namespace semimix::experiments;
using nlohmann::json;

namespace {

bool flag_value(const ExperimentReport& r, const std::string& name) {
  for (const auto& [n, pass] : r.flags) {
    if (n == name) return pass;
  }
  FAIL("missing flag " << name);
  return false;
}

bool has_flag(const ExperimentReport& r, const std::string& name) {
  for (const auto& [n, pass] : r.flags) {
    if (n == name) return true;
  }
  return false;
}

json summary_of(const ExperimentReport& r) { return json::parse(r.summary_json); }

}  // namespace

TEST_CASE("experiment registry and documented defaults") {
  const auto& names = experiment_names();
  REQUIRE(names.size() == 5);
  CHECK(names[0] == "divergence");
  CHECK(names[1] == "bernoulli-mixture");
  CHECK(names[2] == "bound-check");
  CHECK(names[3] == "diagonalize");
  CHECK(names[4] == "toy-m");

  const json div = json::parse(default_config("divergence"));
  CHECK(div.at("horizon") == 1000000);
  CHECK(div.at("backend") == "logfloat");
  const json bm = json::parse(default_config("bernoulli-mixture"));
  CHECK(bm.at("mode") == "gappy");
  const json dg = json::parse(default_config("diagonalize"));
  CHECK(dg.at("mode") == "discrete");

  // Mode-keyed experiments expose each mode's defaults on request.
  const json bm_dense = json::parse(default_config("bernoulli-mixture", "dense"));
  CHECK(bm_dense.at("mode") == "dense");
  CHECK(bm_dense.contains("num_runs"));
  CHECK(default_config("bernoulli-mixture", "gappy") == default_config("bernoulli-mixture"));
  const json dg_cont = json::parse(default_config("diagonalize", "continuous"));
  CHECK(dg_cont.at("mode") == "continuous");
  CHECK_THROWS_WITH_AS(default_config("bernoulli-mixture", "sparse"),
                       doctest::Contains("sparse"), config_error);
  CHECK_THROWS_WITH_AS(default_config("bound-check", "gappy"),
                       doctest::Contains("no modes"), config_error);

  CHECK_THROWS_AS(default_config("no-such-thing"), config_error);
  CHECK_THROWS_AS(default_config("no-such-thing", "gappy"), config_error);
  CHECK_THROWS_AS(run("no-such-thing", "{}"), config_error);
}

TEST_CASE("configs are validated before anything runs") {
  CHECK_THROWS_WITH_AS(run_divergence(R"({"horizn": 100})"),
                       doctest::Contains("horizn"), config_error);
  CHECK_THROWS_AS(run_divergence("{"), config_error);
  CHECK_THROWS_AS(run_divergence("[1,2]"), config_error);
  CHECK_THROWS_AS(run_bound_check(R"({"horizon": "12"})"), config_error);
  CHECK_THROWS_AS(run_bound_check(R"({"horizon": 40})"), config_error);
  CHECK_THROWS_AS(run_bound_check(R"({"thetas": ["0.3"]})"), config_error);
  CHECK_THROWS_AS(run_bernoulli_mixture(R"({"mode": "weird"})"), config_error);
  // each runner owns its backend discipline
  CHECK_THROWS_AS(run_divergence(R"({"backend": "exact"})"), config_error);
  CHECK_THROWS_AS(run_bernoulli_mixture(R"({"mode": "periodic", "backend": "logfloat"})"),
                  config_error);
  CHECK_THROWS_AS(run_bound_check(R"({"backend": "floatish"})"), config_error);
}

TEST_CASE("resolved configs hash identically however they were written") {
  const ExperimentReport a = run_bound_check("{}");
  const ExperimentReport b = run_bound_check(default_config("bound-check"));
  const ExperimentReport c = run_bound_check(R"({"horizon": 12})");
  CHECK(a.config_hash == b.config_hash);
  CHECK(a.config_hash == c.config_hash);
  REQUIRE(a.config_hash.size() == 16);
  for (char ch : a.config_hash) {
    CHECK((std::isdigit(static_cast<unsigned char>(ch)) || (ch >= 'a' && ch <= 'f')));
  }
  const ExperimentReport d = run_bound_check(R"({"horizon": 11})");
  CHECK(d.config_hash != a.config_hash);
}

TEST_CASE("divergence run reproduces the product constants on a short horizon") {
  const ExperimentReport r = run_divergence(
      R"({"horizon": 20000, "window_lo": 100, "window_hi": 2000,
          "ratio_tolerance": 0.05, "record_points": 64})");
  CHECK(flag_value(r, "product_c1_in_range"));
  CHECK(flag_value(r, "product_c2_in_range"));
  CHECK(flag_value(r, "ratio_linear_growth"));
  CHECK(flag_value(r, "step_audit_clean"));
  CHECK(r.all_pass());

  const json s = summary_of(r);
  // the infinite products converge fast; 2e4 factors pin them this tightly
  CHECK(s.at("c1_hat").get<double>() == doctest::Approx(0.450935373976075).epsilon(1e-6));
  CHECK(s.at("c2_hat").get<double>() == doctest::Approx(0.35818796510707857).epsilon(1e-4));
  const double k_star = s.at("ratio_constant").get<double>();
  const double c1 = s.at("c1_hat").get<double>();
  const double c2 = s.at("c2_hat").get<double>();
  CHECK(k_star == doctest::Approx(0.5 * c2 / (0.5 * c1 + 0.5 * c2)).epsilon(1e-12));
  CHECK(s.at("steps_evaluated").get<long>() == 20000);
  CHECK(s.at("hd_violations").get<long>() == 0);

  REQUIRE(r.columns.size() == 8);
  CHECK(r.columns[0] == "t");
  CHECK(r.rows.front()[0] == "1");
  CHECK(r.rows.back()[0] == "20000");
}

TEST_CASE("periodic mode alternates between exact rational values") {
  const ExperimentReport r = run_bernoulli_mixture(R"({"mode": "periodic"})");
  CHECK(flag_value(r, "predictive_in_unit_interval"));
  CHECK(flag_value(r, "exact_alternation_matches"));
  CHECK(r.all_pass());

  const json s = summary_of(r);
  CHECK(s.at("alternation_checked") == true);
  REQUIRE(s.at("distinct_predictive").size() == 2);
  CHECK(s.at("distinct_predictive")[0] == "3/8");
  CHECK(s.at("distinct_predictive")[1] == "1/2");
  CHECK(s.at("posterior_final").size() == 2);

  // a non-default class still runs, but the alternation check is not claimed
  const ExperimentReport other = run_bernoulli_mixture(
      R"({"mode": "periodic", "thetas": ["1/3", "2/3"], "pattern": "011"})");
  CHECK(!has_flag(other, "exact_alternation_matches"));
  CHECK(summary_of(other).at("alternation_checked") == false);
  CHECK(flag_value(other, "predictive_in_unit_interval"));
}

TEST_CASE("dense mode concentrates on the true coin") {
  const ExperimentReport r = run_bernoulli_mixture(
      R"({"mode": "dense", "num_runs": 8, "horizon": 800, "tolerance": 0.05,
          "required_fraction": 0.75, "seed": 7})");
  CHECK(flag_value(r, "dense_final_within_tolerance"));
  CHECK(flag_value(r, "step_audit_clean"));
  const json s = summary_of(r);
  CHECK(s.at("grid_size").get<long>() == 63);
  CHECK(s.at("runs").get<long>() == 8);
  CHECK(s.at("required_count").get<long>() == 6);
  CHECK(s.at("within_count").get<long>() >= 6);
  CHECK(s.at("steps_evaluated").get<long>() == 8 * 800);
  CHECK(s.at("hd_violations").get<long>() == 0);
  CHECK(s.at("theta_true") == "19/64");
  REQUIRE(r.rows.size() == 8);
}

TEST_CASE("gappy mode: the predictive provably never settles on the truth") {
  const ExperimentReport r = run_bernoulli_mixture(R"({"mode": "gappy", "horizon": 3000})");
  CHECK(flag_value(r, "nonconvergence_io"));
  CHECK(flag_value(r, "tracking_within_corridor"));
  CHECK(flag_value(r, "step_audit_clean"));
  CHECK(flag_value(r, "deficiency_theta0_bounded"));
  CHECK(flag_value(r, "deficiency_theta1_bounded"));
  CHECK(flag_value(r, "posterior_floor_theta0"));
  CHECK(flag_value(r, "posterior_floor_theta1"));
  CHECK(flag_value(r, "deviation_floor_holds"));
  CHECK(r.all_pass());

  const json s = summary_of(r);
  CHECK(s.at("theta_bar").get<double>() ==
        doctest::Approx(0.36907024642854264).epsilon(1e-12));
  CHECK(s.at("lipschitz_c").get<double>() ==
        doctest::Approx(1.0986122886681098).epsilon(1e-12));

  // with the corridor pinned to |n1 - t*theta_bar| < 1 the posterior odds of
  // the two coins stay inside (1/3, 3), so the predictive lives in
  // (0.3125, 0.4375): EVERY step deviates from 1/4 by more than 0.0625
  CHECK(s.at("exceed_count").get<long>() == 3000);
  CHECK(s.at("last_exceed").get<long>() == 3000);
  CHECK(s.at("min_deviation").get<double>() > 0.0625 - 1e-12);
  CHECK(s.at("min_deviation").get<double>() < 0.1875);
  CHECK(s.at("final_pred_1").get<double>() > 0.3125 - 1e-12);
  CHECK(s.at("final_pred_1").get<double>() < 0.4375 + 1e-12);

  CHECK(s.at("deficiency_bound_theta0").get<double>() == doctest::Approx(5.0));
  CHECK(s.at("max_deficiency_theta0").get<double>() <= 5.0);
  CHECK(s.at("max_deficiency_theta1").get<double>() <= 5.0);
  CHECK(s.at("posterior_min_theta0").get<double>() >= 0.1 - 1e-12);
  CHECK(s.at("posterior_min_theta1").get<double>() >= 0.1 - 1e-12);
  CHECK(s.at("derived_deviation_bound").get<double>() == doctest::Approx(0.025));
  CHECK(s.at("posterior_floor_c0").get<double>() == doctest::Approx(0.1));
}

TEST_CASE("gappy mode with far-out coins: posterior suppression is exponential") {
  const ExperimentReport r = run_bernoulli_mixture(
      R"({"mode": "gappy", "horizon": 2000,
          "thetas": ["1/8", "1/4", "1/2", "7/8"],
          "weights": ["1/4", "1/4", "1/4", "1/4"]})");
  CHECK(flag_value(r, "suppression_slope_within_tolerance"));
  CHECK(flag_value(r, "suppression_bound_holds"));
  CHECK(flag_value(r, "nonconvergence_io"));
  CHECK(!has_flag(r, "deficiency_theta0_bounded"));
  CHECK(r.all_pass());

  const json s = summary_of(r);
  REQUIRE(s.at("suppression").size() == 2);
  const json& lo = s.at("suppression")[0];
  const json& hi = s.at("suppression")[1];
  CHECK(lo.at("theta") == "1/8");
  CHECK(hi.at("theta") == "7/8");
  CHECK(lo.at("delta").get<double>() ==
        doctest::Approx(0.15856175030422381).epsilon(1e-9));
  CHECK(hi.at("delta").get<double>() ==
        doctest::Approx(0.6681168228802438).epsilon(1e-9));
  CHECK(lo.at("rel_dev").get<double>() <= 0.1);
  CHECK(hi.at("rel_dev").get<double>() <= 0.1);
}

TEST_CASE("bound-check reproduces the exact cumulative chain") {
  const ExperimentReport r = run_bound_check("{}");
  CHECK(flag_value(r, "chain_holds_mu_0"));
  CHECK(flag_value(r, "chain_holds_mu_1"));
  CHECK(flag_value(r, "chain_holds_mu_2"));
  CHECK(r.all_pass());
  REQUIRE(r.rows.size() == 36);  // three targets, twelve steps each

  const json s = summary_of(r);
  const json& m0 = s.at("mu_0");
  CHECK(m0.at("cum_sq_ratio").get<double>() ==
        doctest::Approx(0.2809165865921548).epsilon(1e-9));
  CHECK(m0.at("cum_hellinger").get<double>() ==
        doctest::Approx(0.28091658659215496).epsilon(1e-9));
  CHECK(m0.at("cum_kl").get<double>() ==
        doctest::Approx(0.5498563169934004).epsilon(1e-9));
  CHECK(m0.at("weight_bound").get<double>() ==
        doctest::Approx(1.0986122886681098).epsilon(1e-12));
  const json& m1 = s.at("mu_1");
  CHECK(m1.at("cum_sq_ratio").get<double>() ==
        doctest::Approx(0.08408268720391172).epsilon(1e-9));
  CHECK(m1.at("cum_kl").get<double>() ==
        doctest::Approx(0.17027349577720677).epsilon(1e-9));
  for (const char* tag : {"mu_0", "mu_1", "mu_2"}) {
    const json& m = s.at(tag);
    CHECK(m.at("cum_sq_ratio").get<double>() <=
          m.at("cum_hellinger").get<double>() + 1e-12);
    CHECK(m.at("cum_hellinger").get<double>() <= m.at("cum_kl").get<double>() + 1e-12);
    CHECK(m.at("cum_kl").get<double>() <= m.at("weight_bound").get<double>() + 1e-12);
    CHECK(m.at("slack").get<double>() ==
          doctest::Approx(m.at("weight_bound").get<double>() -
                          m.at("cum_kl").get<double>()));
  }

  // a single-target run covers just that component
  const ExperimentReport one = run_bound_check(R"({"mu_index": 1})");
  CHECK(one.rows.size() == 12);
  CHECK(has_flag(one, "chain_holds_mu_1"));
  CHECK(!has_flag(one, "chain_holds_mu_0"));
}

TEST_CASE("discrete diagonalization: witnesses hold and the mass telescopes") {
  const ExperimentReport r = run_diagonalize("{}");
  CHECK(flag_value(r, "witnesses_hold"));
  CHECK(flag_value(r, "partial_mass_telescopes"));
  CHECK(r.all_pass());
  const json s = summary_of(r);
  CHECK(s.at("chunks").get<long>() == 20);
  CHECK(s.at("q_partial_mass") == "20/21");
  CHECK(s.at("q_partial_mass_expected") == "20/21");
  REQUIRE(r.rows.size() == 20);
}

TEST_CASE("continuous diagonalization: the adversary walks the unlikely branch") {
  const ExperimentReport r = run_diagonalize(R"({"mode": "continuous"})");
  CHECK(flag_value(r, "envelope_holds"));
  CHECK(flag_value(r, "rho_concentrates_on_path"));
  CHECK(r.all_pass());
  const json s = summary_of(r);
  CHECK(s.at("path").get<std::string>() == std::string(100, '0'));
  CHECK(s.at("per_step_log_budget").get<double>() ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(s.at("mu_log_final").get<double>() ==
        doctest::Approx(100.0 * std::log(0.3)).epsilon(1e-9));
  CHECK(s.at("envelope_log_final").get<double>() ==
        doctest::Approx(100.0 * std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("toy-m audits its own table") {
  const ExperimentReport r = run_toy_m(
      R"({"max_program_bits": 12, "output_horizon": 32,
          "zeros_length": 16, "alt_length": 16})");
  CHECK(flag_value(r, "kraft_mass_le_1"));
  CHECK(flag_value(r, "m_dominates_2_pow_neg_km"));
  CHECK(flag_value(r, "semimeasure_monotone"));
  CHECK(flag_value(r, "zeros_chain_holds"));
  CHECK(flag_value(r, "alt_chain_holds"));
  CHECK(r.all_pass());
  CHECK(r.machine_spec_version == std::string("toym-4op-v1"));

  const json s = summary_of(r);
  CHECK(s.at("table_size").get<long>() > 1000);
  CHECK(s.at("zeros_audit").at("km").get<long>() == 4);
  CHECK(s.at("alt_audit").at("km").get<long>() == 6);
  CHECK(s.at("zeros_audit").at("chain_holds") == true);
  CHECK(s.at("alt_audit").at("chain_holds") == true);

  const ExperimentReport exp = run_toy_m(
      R"({"max_program_bits": 8, "output_horizon": 16,
          "zeros_length": 8, "alt_length": 8, "export_table": true})");
  const json es = summary_of(exp);
  REQUIRE(exp.columns.size() == 3);
  CHECK(exp.columns[0] == "x");
  CHECK(exp.rows.size() == es.at("table_size").get<std::size_t>());
}

TEST_CASE("reports carry provenance in both formats") {
  const ExperimentReport r = run_bound_check(R"({"seed": 3})");
  const json doc = json::parse(r.to_json());
  CHECK(doc.at("schema") == kReportSchema);
  CHECK(doc.at("experiment") == "bound-check");
  CHECK(doc.at("provenance").at("config").at("seed").get<long>() == 3);
  CHECK(doc.at("provenance").at("config_hash") == r.config_hash);
  CHECK(doc.at("provenance").at("library_version") == kLibraryVersion);
  CHECK(doc.at("flags").at("chain_holds_mu_0") == true);
  CHECK(doc.at("rows").size() == r.rows.size());

  const std::string csv = r.to_csv();
  CHECK(csv.rfind("# semimix-report-v1", 0) == 0);
  CHECK(csv.find("# experiment=bound-check") != std::string::npos);
  CHECK(csv.find("# config_hash=" + r.config_hash) != std::string::npos);
  CHECK(csv.find("# flag.chain_holds_mu_0=pass") != std::string::npos);
  CHECK(csv.find("mu_index,t,h_t,d_t,sq_ratio") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical reports") {
  const std::pair<const char*, const char*> cases[] = {
      {"divergence",
       R"({"horizon": 5000, "window_lo": 100, "window_hi": 1000,
           "ratio_tolerance": 0.05})"},
      {"bernoulli-mixture", R"({"mode": "periodic"})"},
      {"bernoulli-mixture",
       R"({"mode": "dense", "num_runs": 2, "horizon": 300, "seed": 11,
           "tolerance": 0.1, "required_fraction": 0.5})"},
      {"bernoulli-mixture", R"({"mode": "gappy", "horizon": 600})"},
      {"bound-check", "{}"},
      {"diagonalize", R"({"chunks": 12})"},
      {"diagonalize", R"({"mode": "continuous", "horizon": 40})"},
      {"toy-m",
       R"({"max_program_bits": 10, "output_horizon": 16,
           "zeros_length": 8, "alt_length": 8})"},
  };
  for (const auto& [name, config] : cases) {
    CAPTURE(name);
    CAPTURE(config);
    const ExperimentReport a = run(name, config);
    const ExperimentReport b = run(name, config);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_json() == b.to_json());
    CHECK(a.config_hash == b.config_hash);
  }
}
