// Copyright 2026 The cvplateau Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cvplateau/cost_functions.hpp"
#include "cvplateau/estimators.hpp"
#include "cvplateau/sampling.hpp"
#include "cvplateau/special_functions.hpp"

#include <benchmark/benchmark.h>

using namespace cvplateau;

// One point per evaluation route.
static void BM_BesselI(benchmark::State &state) {
    const int nu = static_cast<int>(state.range(0));
    const double x = static_cast<double>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_i(nu, x));
    }
    state.SetLabel(bessel_route(nu, x) == BesselRoute::Series   ? "series"
                   : bessel_route(nu, x) == BesselRoute::Hankel ? "hankel"
                                                                : "debye");
}
BENCHMARK(BM_BesselI)->Args({5, 10})->Args({63, 256})->Args({2, 40000})->Args({1000, 50000});

static void BM_HaarOrthogonal(benchmark::State &state) {
    RandomSource rng(1);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(haar_orthogonal(m, rng));
    }
}
BENCHMARK(BM_HaarOrthogonal)->RangeMultiplier(2)->Range(2, 32);

static void BM_CompilingGrad(benchmark::State &state) {
    RandomSource rng(2);
    const int m = static_cast<int>(state.range(0));
    const auto u = uniform_sphere(m, 2.0, rng);
    const auto d = uniform_phase_generator(m).d();
    const auto minus = haar_orthogonal(m, rng);
    const auto plus = haar_orthogonal(m, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compiling_grad(u, d, minus, plus));
    }
}
BENCHMARK(BM_CompilingGrad)->RangeMultiplier(2)->Range(2, 32);

static void BM_EstimatorThroughput(benchmark::State &state) {
    const int m = static_cast<int>(state.range(0));
    RandomSource rng(3);
    const Instance inst = CompilingInstance{uniform_sphere(m, 1.0, rng),
                                            uniform_phase_generator(m)};
    EstimatorOptions opts;
    opts.n_samples = 8192;
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_grad_moments(inst, opts));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(opts.n_samples));
}
BENCHMARK(BM_EstimatorThroughput)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
