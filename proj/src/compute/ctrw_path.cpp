#include "tailwalk/compute/kernels.hpp"

#include <algorithm>

namespace tailwalk::compute {

void ctrw_path(const JumpKernel& kernel, double t, Rng& rng, std::span<double> x, std::span<double> scratch) {
    std::fill(x.begin(), x.end(), 0.0);
    double clock = standard_exponential(rng);
    while (clock <= t) {
        kernel.sample(rng, scratch);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += scratch[i];
        clock += standard_exponential(rng);
    }
}

}  // namespace tailwalk::compute
