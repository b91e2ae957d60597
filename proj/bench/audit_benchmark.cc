// Copyright 2026 The Comment Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference path versus the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "audit/anosim.h"
#include "audit/rank_metrics.h"
#include "audit/report.h"
#include "audit/simulator.h"
#include "audit/structure_analysis.h"

namespace audit {
namespace {

Execution ExecArg(const benchmark::State& state) {
  return state.range(0) ? Execution::kParallel : Execution::kSerial;
}

SimOutput Simulated(int n_videos, int accounts_per_group) {
  SimConfig c;
  c.n_videos = n_videos;
  c.n_left = accounts_per_group;
  c.n_right = accounts_per_group;
  c.n_control = accounts_per_group;
  c.lambda = 0.5;
  c.epsilon = 0.2;
  return *RunSyntheticAudit(c, Execution::kSerial);
}

void BM_DissimilarityMatrix(benchmark::State& state) {
  const SimOutput sim = Simulated(1, 60);
  for (auto _ : state) {
    auto m = ComputeDissimilarityMatrix(sim.dataset.videos[0], Metric::kNdld, 10, ExecArg(state));
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_DissimilarityMatrix)->Arg(0)->Arg(1);

void BM_AnosimPermutations(benchmark::State& state) {
  const SimOutput sim = Simulated(1, 8);
  const auto m = *ComputeDissimilarityMatrix(sim.dataset.videos[0], Metric::kNdld, 10);
  GroupAssignment g;
  for (const auto& a : sim.dataset.accounts) {
    if (a.group != Group::kControl) g.members.push_back({a.account_id, a.group == Group::kLeft ? 0 : 1});
  }
  for (auto _ : state) {
    auto r = AnosimPermutationTest(m, g, 1000, 1, ExecArg(state));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_AnosimPermutations)->Arg(0)->Arg(1);

void BM_KMeans(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> norm;
  std::vector<std::vector<double>> points(2000, std::vector<double>(5));
  for (auto& p : points) {
    for (double& v : p) v = norm(rng);
  }
  KMeansOptions opt;
  opt.restarts = 10;
  for (auto _ : state) {
    auto r = KMeans(points, opt, ExecArg(state));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_KMeans)->Arg(0)->Arg(1);

void BM_Simulate(benchmark::State& state) {
  SimConfig c;
  c.lambda = 0.5;
  for (auto _ : state) {
    auto r = RunSyntheticAudit(c, ExecArg(state));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BuildReport(benchmark::State& state) {
  const SimOutput sim = Simulated(65, 8);
  AnalyzeOptions o;
  o.n_permutations = 200;
  o.exec = ExecArg(state);
  for (auto _ : state) {
    auto r = BuildReport(sim.dataset, o);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_BuildReport)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace audit

BENCHMARK_MAIN();
