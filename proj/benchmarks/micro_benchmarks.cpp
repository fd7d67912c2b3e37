/*
 * Copyright 2026 The survsynth Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <random>
#include <vector>

#include "survsynth/cox.hpp"
#include "survsynth/cvae.hpp"
#include "survsynth/dpmm.hpp"
#include "survsynth/kaplan_meier.hpp"
#include "survsynth/metrics.hpp"

namespace {

using namespace survsynth;

struct Survival {
  std::vector<double> time;
  std::vector<int> event;
  std::vector<double> risk;
  Eigen::MatrixXd X;
};

Survival make_survival(std::size_t n, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::exponential_distribution<double> expo(0.1);
  std::bernoulli_distribution censor(0.4);
  Survival s{std::vector<double>(n), std::vector<int>(n), std::vector<double>(n),
             Eigen::MatrixXd(static_cast<Eigen::Index>(n), p)};
  for (std::size_t i = 0; i < n; ++i) {
    double lp = 0.0;
    for (int j = 0; j < p; ++j) {
      const double x = g(rng);
      s.X(static_cast<Eigen::Index>(i), j) = x;
      lp += 0.3 * x;
    }
    s.risk[i] = lp;
    s.time[i] = std::round(expo(rng) / std::exp(lp));
    s.event[i] = censor(rng) ? 0 : 1;
  }
  s.event[0] = 1;
  return s;
}

void BM_CIndex(benchmark::State& state) {
  const auto s = make_survival(static_cast<std::size_t>(state.range(0)), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(c_index(s.risk, s.time, s.event));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CIndex)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_KaplanMeier(benchmark::State& state) {
  const auto s = make_survival(static_cast<std::size_t>(state.range(0)), 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kaplan_meier(s.time, s.event));
}
BENCHMARK(BM_KaplanMeier)->Arg(1000)->Arg(10000);

void BM_CoxFit(benchmark::State& state) {
  const auto s = make_survival(static_cast<std::size_t>(state.range(0)), 10, 3);
  for (auto _ : state) benchmark::DoNotOptimize(fit_cox(s.X, s.time, s.event));
}
BENCHMARK(BM_CoxFit)->Arg(1500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_DpmmFit(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::lognormal_distribution<double> ln(3.0, 0.8);
  std::vector<double> t(static_cast<std::size_t>(state.range(0)));
  for (auto& v : t) v = ln(rng);
  for (auto _ : state) benchmark::DoNotOptimize(fit_dpmm(t, DpmmConfig{}, 1));
}
BENCHMARK(BM_DpmmFit)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

// One forward/backward pass of the default-size network on a 200-row batch.
void BM_CvaeObjective(benchmark::State& state) {
  std::vector<SlotGroup> slots;
  for (std::size_t j = 0; j < 8; ++j) {
    slots.push_back({SlotGroup::Source::covariate, j, SlotKind::continuous, j, 1, 0.0, 1.0});
  }
  const auto arch = CvaeArchitecture::build(slots, 5, 16, {128, 128}, 0.2);
  std::mt19937_64 rng(5);
  const Eigen::VectorXd params = init_parameters(arch, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(arch.data_width, 200);
  const Eigen::MatrixXd c = Eigen::MatrixXd::Random(arch.condition_width, 200);
  const Eigen::MatrixXd noise = Eigen::MatrixXd::Random(arch.latent_dim, 200);
  Eigen::VectorXd grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvae_objective(arch, params, x, c, noise, 1.0, &grad));
  }
}
BENCHMARK(BM_CvaeObjective)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
