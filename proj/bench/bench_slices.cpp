// SPDX-License-Identifier: Apache-2.0
//
// Serial reference path vs OpenMP slice parallelism for the forward
// operator and the adjoint gradient on a desk-scale family.

#include <benchmark/benchmark.h>

#include <random>

#include "olv/adjoint.hpp"
#include "olv/data_io.hpp"
#include "olv/dupire.hpp"

using namespace olv;

namespace {

struct Setup {
    SyntheticSpec spec;
    GridPtr grid = spec.coarse_grid();
    SpotAxis axis = spec.axis();
    Surface prior{grid, spec.prior_value};
    SurfaceFamily fam = SurfaceFamily::zeros(axis, grid);
    SurfaceFamily obs = SurfaceFamily::zeros(axis, grid);

    Setup() {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.1, 0.5);
        for (auto& s : fam.slices()) {
            for (double& v : s.values()) v = u(rng);
        }
        obs = forward_operator(SurfaceFamily::constant(axis, Surface(grid, 0.3)), prior, spec.b);
    }
};

const Setup& setup() {
    static const Setup s;
    return s;
}

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_forward(benchmark::State& state) {
    const Setup& s = setup();
    const ForwardModel model(s.axis, s.prior, s.spec.b, exec_of(state));
    for (auto _ : state) benchmark::DoNotOptimize(model.apply(s.fam));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_gradient(benchmark::State& state) {
    const Setup& s = setup();
    const ForwardModel model(s.axis, s.prior, s.spec.b, exec_of(state));
    for (auto _ : state) benchmark::DoNotOptimize(misfit_gradient(model, s.fam, s.obs));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_forward)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_gradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
