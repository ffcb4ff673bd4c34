#include <algorithm>

#include <omp.h>

#include "common.hpp"

namespace tailwalk::compute::omp {

void fill_radial_symbol(const RadialSymbol& f, int d, long n, double dk, std::vector<double>& out) {
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    out.resize(total);
    const auto count = static_cast<long long>(total);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = detail::radial_symbol_at(f, d, n, dk, static_cast<std::size_t>(i));
    }
}

void cosine_sum(std::span<const double> f, double dk, std::span<const double> x, std::span<double> out) {
    const auto count = static_cast<long long>(x.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = detail::cosine_sum_at(f, dk, x[static_cast<std::size_t>(i)]);
    }
}

void series_horner(std::span<const double> ahat, double t, int terms, std::span<double> out) {
    const auto count = static_cast<long long>(ahat.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = detail::horner_at(ahat[static_cast<std::size_t>(i)], t, terms);
    }
}

CtrwTally ctrw(const JumpKernel& kernel, double t, long n_paths, std::uint64_t seed, const Grid& cells) {
    CtrwTally tally;
    tally.counts.assign(cells.size(), 0);
    tally.paths = n_paths;
    const long chunks = (n_paths + kCtrwChunk - 1) / kCtrwChunk;
    std::vector<double> sums(static_cast<std::size_t>(chunks)), sums_sq(static_cast<std::size_t>(chunks));
#pragma omp parallel
    {
        std::vector<std::uint64_t> counts(cells.size(), 0);
        std::uint64_t outside = 0;
#pragma omp for schedule(dynamic, 1)
        for (long c = 0; c < chunks; ++c) {
            double s = 0.0, s2 = 0.0;
            detail::ctrw_chunk(kernel, t, c * kCtrwChunk, std::min(n_paths, (c + 1) * kCtrwChunk), seed, c, cells,
                               counts, outside, s, s2);
            sums[static_cast<std::size_t>(c)] = s;
            sums_sq[static_cast<std::size_t>(c)] = s2;
        }
#pragma omp critical
        {
            for (std::size_t i = 0; i < counts.size(); ++i) tally.counts[i] += counts[i];
            tally.outside += outside;
        }
    }
    // Floating-point sums merged in chunk order, as in the serial loop.
    for (long c = 0; c < chunks; ++c) {
        tally.sum += sums[static_cast<std::size_t>(c)];
        tally.sum_sq += sums_sq[static_cast<std::size_t>(c)];
    }
    return tally;
}

std::vector<RunRecord> branching_runs(const JumpKernel& kernel, const BranchingParams& params,
                                      std::span<const double> times, long n_runs, std::uint64_t seed, long cap) {
    std::vector<RunRecord> runs(static_cast<std::size_t>(n_runs));
#pragma omp parallel for schedule(dynamic, 8)
    for (long r = 0; r < n_runs; ++r) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(r));
        runs[static_cast<std::size_t>(r)] = simulate_branching_run(kernel, params, times, rng, cap);
    }
    return runs;
}

}  // namespace tailwalk::compute::omp
