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

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "semimix/diagnostics.hpp"
#include "semimix/environment.hpp"
#include "semimix/mixture.hpp"
#include "semimix/toy_machine.hpp"

using namespace semimix;

namespace {

// One posterior + predictive step of a dyadic-grid coin mixture in the log
// domain, the inner loop of the dense-class experiment.
void BM_DenseGridStep(benchmark::State& state) {
  const long k = state.range(0);
  std::vector<double> log_t(k), log_1mt(k), theta(k), lw(k, 0.0);
  for (long j = 0; j < k; ++j) {
    theta[j] = static_cast<double>(j + 1) / static_cast<double>(k + 1);
    log_t[j] = std::log(theta[j]);
    log_1mt[j] = std::log1p(-theta[j]);
  }
  std::mt19937_64 gen(7);
  for (auto _ : state) {
    const int bit = static_cast<int>(gen() & 1);
    double mx = -1e300;
    for (long j = 0; j < k; ++j) {
      lw[j] += bit ? log_t[j] : log_1mt[j];
      mx = std::max(mx, lw[j]);
    }
    double z = 0, num = 0;
    for (long j = 0; j < k; ++j) {
      const double w = std::exp(lw[j] - mx);
      z += w;
      num += w * theta[j];
    }
    benchmark::DoNotOptimize(num / z);
  }
  state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(BM_DenseGridStep)->Arg(15)->Arg(63)->Arg(255);

// Exact rational posterior update through the public mixture interface.
void BM_ExactPosteriorStep(benchmark::State& state) {
  std::vector<EnvPtr> parts = {
      std::make_shared<BernoulliEnv>(Rational(1, 4), Backend::exact),
      std::make_shared<BernoulliEnv>(Rational(1, 2), Backend::exact),
      std::make_shared<BernoulliEnv>(Rational(3, 4), Backend::exact)};
  MixturePtr mix =
      make_mixture({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, parts);
  FiniteString x(Alphabet(2));
  std::mt19937_64 gen(11);
  for (auto _ : state) {
    if (x.size() >= 64) x = FiniteString(Alphabet(2));
    x.push_back(static_cast<uint8_t>(gen() & 1));
    benchmark::DoNotOptimize(predictive(*mix, x));
  }
}
BENCHMARK(BM_ExactPosteriorStep);

// The per-step work of the divergence experiment: two analytic conditionals,
// the mixture predictive, and the ratio bookkeeping.
void BM_DivergenceStep(benchmark::State& state) {
  double l1 = 0, l2 = 0;
  double t = 2;
  for (auto _ : state) {
    const double f1 = 0.5 / (t * t * t);
    const double f2 = 0.5 / (t * t);
    const double m1 = std::exp(l1), m2 = std::exp(l2);
    const double xp = (0.5 * m1 * f1 + 0.5 * m2 * f2) / (0.5 * m1 + 0.5 * m2);
    benchmark::DoNotOptimize(xp / f1 / t);
    l1 += std::log1p(-f1);
    l2 += std::log1p(-f2);
    t += 1;
    if (t > 1e7) { t = 2; l1 = 0; l2 = 0; }
  }
}
BENCHMARK(BM_DivergenceStep);

// Full enumeration of the toy machine's prior table.
void BM_PriorTableBuild(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) {
    toym::PriorTable table(bits, 64);
    benchmark::DoNotOptimize(table.size());
  }
}
BENCHMARK(BM_PriorTableBuild)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

// Exhaustive expected-distance ledger (exact rationals over all length-n
// histories), the engine behind the bound-check experiment.
void BM_ExactLedger(benchmark::State& state) {
  std::vector<EnvPtr> parts = {
      std::make_shared<BernoulliEnv>(Rational(3, 10), Backend::exact),
      std::make_shared<BernoulliEnv>(Rational(1, 2), Backend::exact),
      std::make_shared<BernoulliEnv>(Rational(7, 10), Backend::exact)};
  MixturePtr mix =
      make_mixture({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, parts);
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagnostics::exact_bound_ledger(*mix, 0, horizon));
  }
}
BENCHMARK(BM_ExactLedger)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
