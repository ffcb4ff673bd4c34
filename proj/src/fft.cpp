#include "fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>

namespace tailwalk::detail {

namespace {

// Plans are created once per (transform, rank, size) and reused through the
// new-array execute interface, which is thread-safe.
struct PlanCache {
    std::mutex mutex;
    std::map<std::tuple<int, int, long>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

std::vector<int> dims(int d, long n) { return std::vector<int>(static_cast<std::size_t>(d), static_cast<int>(n)); }

std::size_t total(int d, long n) {
    std::size_t s = 1;
    for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
    return s;
}

fftw_plan plan_for(int kind, int d, long n) {
    auto& c = cache();
    std::lock_guard lock(c.mutex);
    const auto key = std::make_tuple(kind, d, n);
    if (auto it = c.plans.find(key); it != c.plans.end()) return it->second;
    const auto shape = dims(d, n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (kind == 0) {
        std::vector<fftw_r2r_kind> kinds(static_cast<std::size_t>(d), FFTW_REDFT00);
        double* buf = fftw_alloc_real(total(d, n));
        plan = fftw_plan_r2r(d, shape.data(), buf, buf, kinds.data(), flags);
        fftw_free(buf);
    } else {
        fftw_complex* buf = fftw_alloc_complex(total(d, n));
        plan = fftw_plan_dft(d, shape.data(), buf, buf, kind < 0 ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        fftw_free(buf);
    }
    if (!plan) throw std::runtime_error("FFTW could not create a plan");
    c.plans.emplace(key, plan);
    return plan;
}

}  // namespace

void dct1(std::vector<double>& data, int d, long n) {
    if (n < 2) return;
    fftw_execute_r2r(plan_for(0, d, n), data.data(), data.data());
}

void dft(std::vector<std::complex<double>>& data, int d, long n, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_for(sign < 0 ? -1 : 1, d, n), p, p);
}

}  // namespace tailwalk::detail
