#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include "tailwalk/compute/kernels.hpp"

namespace tailwalk::compute::detail {

inline double radial_symbol_at(const RadialSymbol& f, int d, long n, double dk, std::size_t flat) {
    double m2 = 0.0;
    for (int i = 0; i < d; ++i) {
        const double m = double(flat % static_cast<std::size_t>(n));
        flat /= static_cast<std::size_t>(n);
        m2 += m * m;
    }
    return f(dk * std::sqrt(m2));
}

inline double cosine_sum_at(std::span<const double> f, double dk, double x) {
    const std::size_t n = f.size();
    if (n == 0) return 0.0;
    double s = 0.5 * f[0];
    for (std::size_t m = 1; m + 1 < n; ++m) s += f[m] * std::cos(double(m) * dk * x);
    if (n > 1) s += 0.5 * f[n - 1] * std::cos(double(n - 1) * dk * x);
    return s * dk / std::numbers::pi;
}

inline double horner_at(double ahat, double t, int terms) {
    if (t > 700.0) return std::exp(t * (ahat - 1.0));
    double s = 1.0;
    const double x = t * ahat;
    for (int n = terms; n >= 1; --n) s = 1.0 + s * x / double(n);
    return std::exp(-t) * s;
}

/// Paths [begin, end) of chunk `chunk`, all drawn from its own substream.
inline void ctrw_chunk(const JumpKernel& kernel, double t, long begin, long end, std::uint64_t seed, long chunk,
                       const Grid& cells, std::vector<std::uint64_t>& counts, std::uint64_t& outside, double& sum,
                       double& sum_sq) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(chunk));
    const int d = kernel.dimension();
    std::vector<double> x(d), z(d);
    for (long p = begin; p < end; ++p) {
        ctrw_path(kernel, t, rng, x, z);
        for (double v : x) {
            sum += v;
            sum_sq += v * v;
        }
        if (auto cell = cells.locate(x)) {
            ++counts[*cell];
        } else {
            ++outside;
        }
    }
}

}  // namespace tailwalk::compute::detail
