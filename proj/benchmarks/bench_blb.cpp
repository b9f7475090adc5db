#include <benchmark/benchmark.h>

#include "blb/certify.hpp"
#include "blb/counterexample.hpp"
#include "blb/defect.hpp"
#include "blb/funcspace.hpp"
#include "blb/oscillate.hpp"
#include "blb/step_function.hpp"

namespace {

blb::StepFunction sample_step() {
    return blb::StepFunction::from_levels({0.9, -0.4, 0.2, -0.7, 0.5},
                                          {0.2, 0.25, 0.15, 0.3, 0.1});
}

void bm_rescale(benchmark::State& state) {
    const auto v = sample_step();
    const auto j = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(blb::rescale(v, j));
}
BENCHMARK(bm_rescale)->Arg(16)->Arg(256);

void bm_integrate_composition(benchmark::State& state) {
    const auto v = blb::rescale(sample_step(), static_cast<unsigned>(state.range(0)));
    const auto phi = blb::maps::F(2.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(blb::integrate_composition(v, phi));
}
BENCHMARK(bm_integrate_composition)->Arg(16)->Arg(256);

void bm_pair_oscillated(benchmark::State& state) {
    const auto v = sample_step();
    const auto psi = blb::StepFunction::from_levels({0.3, -0.8, 0.6}, {0.4, 0.35, 0.25});
    const auto j = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(blb::pair_oscillated(v, psi, j));
}
BENCHMARK(bm_pair_oscillated)->Arg(64)->Arg(1024);

void bm_bl_defect(benchmark::State& state) {
    const auto u = sample_step();
    const auto v = blb::StepFunction::from_levels({1.0, -1.0}, {0.5, 0.5});
    const auto j = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(blb::bl_defect(u, v, 2.5, j));
}
BENCHMARK(bm_bl_defect)->Arg(64)->Arg(1024);

void bm_certify_grid(benchmark::State& state) {
    blb::Residual r;
    r.kind = blb::ResidualKind::g_p;
    r.p = 3.0;
    blb::Box box;
    box.dims = {{-1.0, 1.0}};
    for (auto _ : state)
        benchmark::DoNotOptimize(blb::certify_nonneg(r, box, 1e-3, 1e-3));
}
BENCHMARK(bm_certify_grid);

void bm_step_search(benchmark::State& state) {
    blb::MomentSpec spec;
    spec.p = 1.5;
    for (auto _ : state)
        benchmark::DoNotOptimize(blb::search_step_profile(spec, 3, 0));
}
BENCHMARK(bm_step_search)->Unit(benchmark::kMillisecond);

void bm_profile_ode(benchmark::State& state) {
    blb::DensityDesign flat;
    flat.a = 1.0;
    flat.coefficients = {1.0};
    flat.psi_min = 1.0;
    flat.gamma = 2.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(blb::solve_profile_ode(flat, 1.0, 4096, 1e-10));
}
BENCHMARK(bm_profile_ode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
