#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tailwalk/branching.hpp"
#include "tailwalk/grid.hpp"
#include "tailwalk/kernel.hpp"

/// Data-parallel hot loops, each in a serial reference form and an OpenMP
/// form. Both produce bit-identical results: work is cut into fixed pieces
/// (symbol points, path chunks, runs) and floating-point reductions are
/// merged in piece order.
namespace tailwalk::compute {

using RadialSymbol = std::function<double(double knorm)>;

/// Paths per random substream in CTRW ensembles.
inline constexpr long kCtrwChunk = 1024;

struct CtrwTally {
    std::vector<std::uint64_t> counts;
    std::uint64_t outside = 0;
    /// Pooled per-coordinate sums of positions and squared positions.
    double sum = 0.0;
    double sum_sq = 0.0;
    long paths = 0;
};

/// Position at time t of one rate-1 walk started at the origin.
void ctrw_path(const JumpKernel& kernel, double t, Rng& rng, std::span<double> x, std::span<double> scratch);

namespace serial {

/// out[m] = f(dk |m|) over m in [0, n)^d, row-major.
void fill_radial_symbol(const RadialSymbol& f, int d, long n, double dk, std::vector<double>& out);
/// Trapezoid inversion of an even 1-D spectrum sampled at k_m = m dk,
/// m = 0..n-1 (end points half-weighted): (dk / pi) sum' f_m cos(k_m x).
void cosine_sum(std::span<const double> f, double dk, std::span<const double> x, std::span<double> out);
/// out = e^{-t} sum_{n <= terms} (t a_hat)^n / n!, by Horner.
void series_horner(std::span<const double> ahat, double t, int terms, std::span<double> out);
CtrwTally ctrw(const JumpKernel& kernel, double t, long n_paths, std::uint64_t seed, const Grid& cells);
std::vector<RunRecord> branching_runs(const JumpKernel& kernel, const BranchingParams& params,
                                      std::span<const double> times, long n_runs, std::uint64_t seed, long cap);

}  // namespace serial

namespace omp {

void fill_radial_symbol(const RadialSymbol& f, int d, long n, double dk, std::vector<double>& out);
void cosine_sum(std::span<const double> f, double dk, std::span<const double> x, std::span<double> out);
void series_horner(std::span<const double> ahat, double t, int terms, std::span<double> out);
CtrwTally ctrw(const JumpKernel& kernel, double t, long n_paths, std::uint64_t seed, const Grid& cells);
std::vector<RunRecord> branching_runs(const JumpKernel& kernel, const BranchingParams& params,
                                      std::span<const double> times, long n_runs, std::uint64_t seed, long cap);

}  // namespace omp

}  // namespace tailwalk::compute
