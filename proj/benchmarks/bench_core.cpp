/* Copyright 2026 The ptladder Authors
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

#include <benchmark/benchmark.h>

#include <vector>

#include "ptladder/spectral.hpp"
#include "ptladder/transport_maps.hpp"

using namespace ptladder;

namespace {

LatticeSpec spec(Topology topology, int n, double gamma, double delta = 0.0) {
    LatticeSpec s;
    s.topology = topology;
    s.n_cells = n;
    s.gamma = gamma;
    s.delta = delta;
    return s;
}

// Balanced gain/loss takes the real-arithmetic path.
void BM_SpectrumBalanced(benchmark::State& state) {
    const LatticeSpec s = spec(Topology::CircularPeriodic, static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(lattice_spectrum(s));
}
BENCHMARK(BM_SpectrumBalanced)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// A detuning forces the general complex eigensolver.
void BM_SpectrumDetuned(benchmark::State& state) {
    const LatticeSpec s = spec(Topology::CircularPeriodic, static_cast<int>(state.range(0)), 1.0, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(lattice_spectrum(s));
}
BENCHMARK(BM_SpectrumDetuned)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ScatterBanded(benchmark::State& state) {
    const ScatteringSystem sys =
        assemble_scattering_system(spec(Topology::TwistedOpen, static_cast<int>(state.range(0)), 0.8), LeadSpec{}, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(solve_scattering(sys));
}
BENCHMARK(BM_ScatterBanded)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_ScatterDense(benchmark::State& state) {
    const ScatteringSystem sys =
        assemble_scattering_system(spec(Topology::TwistedOpen, static_cast<int>(state.range(0)), 0.8), LeadSpec{}, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(solve_scattering_dense(sys));
}
BENCHMARK(BM_ScatterDense)->Arg(100)->Unit(benchmark::kMillisecond);

// One energy row of an N = 100 map.
void BM_MapRow(benchmark::State& state) {
    std::vector<double> e(801);
    for (int i = 0; i < 801; ++i) e[static_cast<std::size_t>(i)] = -4.0 + 8.0 * i / 800.0;
    const LatticeSpec s = spec(Topology::OpenLadder, 100, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(transmission_map(s, LeadSpec{}, e, {1.0}, 1));
}
BENCHMARK(BM_MapRow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
