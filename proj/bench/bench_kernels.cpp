/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include "otfs/channel.hpp"
#include "otfs/config.hpp"
#include "otfs/dp.hpp"
#include "otfs/experiment.hpp"
#include "otfs/scenario.hpp"

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

namespace {

using namespace otfs;

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_SlotTable(benchmark::State& state)
{
    ScenarioConfig cfg;
    const auto part = partition_dd_grid(cfg.M, cfg.N, cfg.delta_M, cfg.delta_N);
    const auto ch = mrt_gains(sample_scenario(cfg, 3));
    DpOptions opts;
    opts.delta_p = 10;
    opts.exec = exec_of(state);
    const std::vector<double> alpha(static_cast<std::size_t>(cfg.Q), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_slot_table(part, ch, cfg.P, alpha, opts));
    }
}

void BM_Gains(benchmark::State& state)
{
    ScenarioConfig cfg;
    cfg.M = 16;
    cfg.N = 16;
    cfg.Q = 6;
    cfg.D = 16;
    const auto params = sample_scenario(cfg, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mrt_gains(params, exec_of(state)));
    }
}

void BM_Trials(benchmark::State& state)
{
    ExperimentOptions opts;
    opts.trials = 8;
    opts.schemes = {Scheme::SdmaAll, Scheme::RandomMixedEqual};
    opts.exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(ScenarioConfig{}, opts));
    }
}

} // namespace

BENCHMARK(BM_SlotTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gains)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv)
{
    spdlog::set_level(spdlog::level::warn);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) {
        return 1;
    }
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
