// Copyright 2026 The confset Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include "confset/scoring.h"
#include "confset/synth.h"
#include "confset/types.h"

namespace confset {
namespace {

std::vector<PredictiveDistribution> Distributions(int k) {
  SynthConfig cfg;
  cfg.n = 1024;
  cfg.k = k;
  std::vector<PredictiveDistribution> out;
  for (const auto& r : GenerateSynthetic(cfg)) {
    out.push_back(Normalize(r.logprobs));
  }
  return out;
}

void BM_ScoreAllLabels(benchmark::State& state) {
  const auto fn = static_cast<ScoreFunction>(state.range(0));
  const auto dists = Distributions(static_cast<int>(state.range(1)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScoreAllLabels(dists[i++ % dists.size()], fn));
  }
  state.SetLabel(std::string(ScoreFunctionName(fn)));
}
BENCHMARK(BM_ScoreAllLabels)
    ->ArgsProduct({{0, 1, 2, 3}, {4, 10}});

void BM_Normalize(benchmark::State& state) {
  SynthConfig cfg;
  cfg.n = 1024;
  cfg.k = static_cast<int>(state.range(0));
  const auto records = GenerateSynthetic(cfg);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Normalize(records[i++ % records.size()].logprobs));
  }
}
BENCHMARK(BM_Normalize)->Arg(4)->Arg(10);

}  // namespace
}  // namespace confset
