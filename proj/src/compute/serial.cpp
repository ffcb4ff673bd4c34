#include <algorithm>

#include "common.hpp"

namespace tailwalk::compute::serial {

void fill_radial_symbol(const RadialSymbol& f, int d, long n, double dk, std::vector<double>& out) {
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    out.resize(total);
    for (std::size_t i = 0; i < total; ++i) out[i] = detail::radial_symbol_at(f, d, n, dk, i);
}

void cosine_sum(std::span<const double> f, double dk, std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = detail::cosine_sum_at(f, dk, x[i]);
}

void series_horner(std::span<const double> ahat, double t, int terms, std::span<double> out) {
    for (std::size_t i = 0; i < ahat.size(); ++i) out[i] = detail::horner_at(ahat[i], t, terms);
}

CtrwTally ctrw(const JumpKernel& kernel, double t, long n_paths, std::uint64_t seed, const Grid& cells) {
    CtrwTally tally;
    tally.counts.assign(cells.size(), 0);
    tally.paths = n_paths;
    const long chunks = (n_paths + kCtrwChunk - 1) / kCtrwChunk;
    for (long c = 0; c < chunks; ++c) {
        double s = 0.0, s2 = 0.0;
        detail::ctrw_chunk(kernel, t, c * kCtrwChunk, std::min(n_paths, (c + 1) * kCtrwChunk), seed, c, cells,
                           tally.counts, tally.outside, s, s2);
        tally.sum += s;
        tally.sum_sq += s2;
    }
    return tally;
}

std::vector<RunRecord> branching_runs(const JumpKernel& kernel, const BranchingParams& params,
                                      std::span<const double> times, long n_runs, std::uint64_t seed, long cap) {
    std::vector<RunRecord> runs(static_cast<std::size_t>(n_runs));
    for (long r = 0; r < n_runs; ++r) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(r));
        runs[static_cast<std::size_t>(r)] = simulate_branching_run(kernel, params, times, rng, cap);
    }
    return runs;
}

}  // namespace tailwalk::compute::serial
