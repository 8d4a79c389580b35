// Copyright 2026 The MAQV Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>
#include <vector>

#include "maqv/analytics.h"
#include "maqv/rng.h"
#include "maqv/stats.h"

namespace maqv {
namespace {

std::vector<std::string> RandomSteps(Rng& rng, std::size_t n, std::size_t alphabet) {
  std::vector<std::string> s(n);
  for (auto& x : s) x = "a" + std::to_string(rng.Below(alphabet));
  return s;
}

void BM_NwAlign(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto gold = RandomSteps(rng, n, 9);
  auto pred = RandomSteps(rng, n, 9);
  for (auto _ : state) benchmark::DoNotOptimize(NwAlign(gold, pred));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NwAlign)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_WardLinkage(benchmark::State& state) {
  Rng rng(2);
  std::vector<Vec6> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) {
    for (double& v : p) v = static_cast<double>(rng.Below(1000)) / 1000.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(WardLinkage(pts));
}
BENCHMARK(BM_WardLinkage)->Arg(4)->Arg(16)->Arg(64);

void BM_PcaMap(benchmark::State& state) {
  Rng rng(3);
  std::vector<Vec6> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) {
    for (double& v : p) v = static_cast<double>(rng.Below(1000)) / 1000.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(PcaMap(pts));
}
BENCHMARK(BM_PcaMap)->Arg(4)->Arg(64);

void BM_ReferenceGridIrr(benchmark::State& state) {
  RatingGrid grid = LoadRatingGrid(
      ReadJsonFile(std::filesystem::path(MAQV_FIXTURE_DIR) / "irr/rating_grid.json"));
  const int resamples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ComputeIrr(grid, resamples));
}
BENCHMARK(BM_ReferenceGridIrr)->Arg(0)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MotifCounts(benchmark::State& state) {
  Corpus corpus = LoadCorpusFromPaths(std::vector<std::filesystem::path>{
      std::filesystem::path(MAQV_FIXTURE_DIR) / "corpus"});
  for (auto _ : state) benchmark::DoNotOptimize(MotifCounts(corpus, StepLevel::kCategory));
}
BENCHMARK(BM_MotifCounts);

void BM_GaussianSmooth(benchmark::State& state) {
  Rng rng(4);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (double& x : v) x = static_cast<double>(rng.Below(100)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(GaussianSmooth(v, 2.0));
}
BENCHMARK(BM_GaussianSmooth)->Arg(16)->Arg(256);

}  // namespace
}  // namespace maqv

BENCHMARK_MAIN();
