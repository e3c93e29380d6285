// Copyright 2026 The Cheshire Authors
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

#include <numbers>

#include <benchmark/benchmark.h>

#include "cheshire/analysis.hpp"
#include "cheshire/experiment.hpp"
#include "cheshire/montecarlo.hpp"

namespace {

using namespace cheshire;

ExperimentConfig rotated() {
    ExperimentConfig cfg = baseline_config();
    cfg.theta1 = 20.0 * std::numbers::pi / 180.0;
    cfg.t2 = 0.852;
    return cfg;
}

void BM_RunPipeline(benchmark::State& state) {
    const ExperimentConfig cfg = rotated();
    double phi = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_pipeline(cfg, phi));
        phi += 0.01;
    }
}
BENCHMARK(BM_RunPipeline);

void BM_DensityOracle(benchmark::State& state) {
    const ExperimentConfig cfg = rotated();
    double phi = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(density_oracle(cfg, phi));
        phi += 0.01;
    }
}
BENCHMARK(BM_DensityOracle);

void BM_Sweep(benchmark::State& state) {
    ExperimentConfig cfg = rotated();
    cfg.phase_grid = uniform_phase_grid(0.0, 4.0 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep(cfg));
}
BENCHMARK(BM_Sweep)->Arg(50)->Arg(1000);

void BM_SimulateSweep(benchmark::State& state) {
    ExperimentConfig cfg = rotated();
    cfg.phase_grid = uniform_phase_grid(0.0, 4.0 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
    const SourceModel src = SourceModel::from_config(cfg);
    const JitterModel jitter{0.035, kJitterAll};
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_sweep(cfg, src, jitter, seed++));
}
BENCHMARK(BM_SimulateSweep)->Arg(50)->Arg(1000);

void BM_FitFringe(benchmark::State& state) {
    ExperimentConfig cfg = rotated();
    cfg.phase_grid = uniform_phase_grid(0.0, 4.0 * std::numbers::pi, static_cast<std::size_t>(state.range(0)));
    const auto recs = simulate_sweep(cfg, SourceModel::from_config(cfg), {}, 7);
    for (auto _ : state) benchmark::DoNotOptimize(fit_fringe(recs));
}
BENCHMARK(BM_FitFringe)->Arg(50)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
