#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "tailwalk/compute/kernels.hpp"
#include "tailwalk/spectral.hpp"

using namespace tailwalk;

namespace {

const JumpKernel& cauchy() {
    static const JumpKernel k = make_cauchy2_1d();
    return k;
}

template <bool Parallel>
void radial_symbol(benchmark::State& state) {
    const long n = state.range(0);
    const compute::RadialSymbol f = [](double k) { return std::exp(-1.0 - k) * (1.0 + k); };
    std::vector<double> out;
    for (auto _ : state) {
        if constexpr (Parallel) {
            compute::omp::fill_radial_symbol(f, 2, n, 0.01, out);
        } else {
            compute::serial::fill_radial_symbol(f, 2, n, 0.01, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

template <bool Parallel>
void cosine_sum(benchmark::State& state) {
    const long n = state.range(0);
    std::vector<double> f(static_cast<std::size_t>(n)), x(2048), out(2048);
    for (long m = 0; m < n; ++m) f[std::size_t(m)] = std::exp(-1e-3 * double(m));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.1 * double(i);
    for (auto _ : state) {
        if constexpr (Parallel) {
            compute::omp::cosine_sum(f, 1e-3, x, out);
        } else {
            compute::serial::cosine_sum(f, 1e-3, x, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * n * long(x.size()));
}

template <bool Parallel>
void series_horner(benchmark::State& state) {
    const auto ahat = torus_char_fn(make_lattice_zipf(1, 3.0), state.range(0));
    std::vector<double> out(ahat.size());
    for (auto _ : state) {
        if constexpr (Parallel) {
            compute::omp::series_horner(ahat, 20.0, 100, out);
        } else {
            compute::serial::series_horner(ahat, 20.0, 100, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void ctrw(benchmark::State& state) {
    const auto cells = make_grid(1, 1.0, 60);
    for (auto _ : state) {
        auto tally = Parallel ? compute::omp::ctrw(cauchy(), 10.0, state.range(0), 1, cells)
                              : compute::serial::ctrw(cauchy(), 10.0, state.range(0), 1, cells);
        benchmark::DoNotOptimize(tally.counts.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void branching(benchmark::State& state) {
    const BranchingParams p{0.5, 0.25};
    const std::vector<double> times{4.0, 8.0};
    for (auto _ : state) {
        auto runs = Parallel ? compute::omp::branching_runs(cauchy(), p, times, state.range(0), 1, 100000)
                             : compute::serial::branching_runs(cauchy(), p, times, state.range(0), 1, 100000);
        benchmark::DoNotOptimize(runs.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(radial_symbol<false>)->Name("radial_symbol/serial")->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(radial_symbol<true>)->Name("radial_symbol/omp")->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(cosine_sum<false>)->Name("cosine_sum/serial")->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(cosine_sum<true>)->Name("cosine_sum/omp")->Arg(1 << 14)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(series_horner<false>)->Name("series_horner/serial")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(series_horner<true>)->Name("series_horner/omp")->Arg(1 << 18)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(ctrw<false>)->Name("ctrw/serial")->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(ctrw<true>)->Name("ctrw/omp")->Arg(200000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(branching<false>)->Name("branching/serial")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(branching<true>)->Name("branching/omp")->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
