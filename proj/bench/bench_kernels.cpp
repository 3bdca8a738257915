// SPDX-License-Identifier: Apache-2.0
//
// ckmbf: environment-aware hybrid beamforming with channel knowledge maps
// Copyright (C) 2026 The ckmbf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Serial reference kernels against their OpenMP counterparts.
#include "ckmbf/bim.hpp"
#include "ckmbf/experiment.hpp"
#include "ckmbf/hybrid.hpp"
#include "ckmbf/spatial_index.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace ckm;

namespace
{

struct Algorithm1Case
{
    ComplexMatrix H;
    Codebook F;
    Codebook W;
    SystemDims dims;
};

// C(16, 3) x C(16, 2) = 67200 selection pairs.
const Algorithm1Case &algorithm1_case()
{
    static const Algorithm1Case c = [] {
        const UpaGeometry tx{4, 4, 0.5}, rx{2, 2, 0.5};
        const Scene scene = default_street_scene();
        Algorithm1Case out;
        out.H = synthesize_channel(tx, rx, generate_scene_paths(scene, {70.0, 3.0, 1.5}));
        out.F = build_kronecker_dft(tx, 1);
        out.W = build_kronecker_dft(rx, 2);
        out.dims = {tx.size(), rx.size(), 3, 2, 2, 1200, 1e10};
        return out;
    }();
    return c;
}

void BM_algorithm1_serial(benchmark::State &state)
{
    const Algorithm1Case &c = algorithm1_case();
    for (auto _ : state)
        benchmark::DoNotOptimize(algorithm1_serial(c.H, c.F, c.W, c.dims).design.rate);
}

void BM_algorithm1_parallel(benchmark::State &state)
{
    const Algorithm1Case &c = algorithm1_case();
    for (auto _ : state)
        benchmark::DoNotOptimize(algorithm1(c.H, c.F, c.W, c.dims).design.rate);
}

const ComplexMatrix &sweep_matrix()
{
    static const ComplexMatrix Y = [] {
        Rng rng(9);
        return complex_gaussian_matrix(rng, 10, 20);
    }();
    return Y;
}

void BM_submatrix_serial(benchmark::State &state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(select_submatrix_exhaustive_serial(sweep_matrix(), 4, 3).energy);
}

void BM_submatrix_parallel(benchmark::State &state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(select_submatrix_exhaustive(sweep_matrix(), 4, 3).energy);
}

const SpatialIndex &index_for(std::size_t limit)
{
    static const std::vector<Vec3> points = draw_sample_locations(default_street_scene(), 20000, 3);
    static const SpatialIndex brute(points, points.size() + 1);
    static const SpatialIndex buckets(points, 0);
    return limit == 0 ? buckets : brute;
}

void BM_knn_brute_force(benchmark::State &state)
{
    const SpatialIndex &idx = index_for(1);
    Rng rng(4);
    for (auto _ : state)
        benchmark::DoNotOptimize(idx.nearest({uniform(rng, 30, 130), uniform(rng, -18, 18), 1.5}, 3));
}

void BM_knn_buckets(benchmark::State &state)
{
    const SpatialIndex &idx = index_for(0);
    Rng rng(4);
    for (auto _ : state)
        benchmark::DoNotOptimize(idx.nearest({uniform(rng, 30, 130), uniform(rng, -18, 18), 1.5}, 3));
}

void BM_trial_loop(benchmark::State &state)
{
    ExperimentConfig cfg;
    cfg.tx_arrays = {{8, 8, 0.5}};
    cfg.snr_db = 100.0;
    cfg.trials = 20;
    cfg.methods = {"cam", "bim", "ls", "location"};
    cfg.ckm.samples = 500;
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_experiment(cfg).size());
}

} // namespace

BENCHMARK(BM_algorithm1_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_algorithm1_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_submatrix_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_submatrix_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_knn_brute_force)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_knn_buckets)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_trial_loop)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
