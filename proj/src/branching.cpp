#include "tailwalk/branching.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "tailwalk/compute/kernels.hpp"
#include "tailwalk/errors.hpp"

namespace tailwalk {

void BranchingParams::validate() const {
    if (!(beta >= 0.0) || !(mu >= 0.0) || !std::isfinite(beta) || !std::isfinite(mu)) {
        throw DomainError("branching rates must be finite and nonnegative");
    }
}

std::size_t BranchingEnsemble::snapshot_index(double t) const {
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        if (snapshot_times[i] == t) return i;
    }
    throw DomainError("no snapshot at t = " + std::to_string(t));
}

RunRecord simulate_branching_run(const JumpKernel& kernel, const BranchingParams& params,
                                 std::span<const double> times, Rng& rng, long cap) {
    const int d = kernel.dimension();
    const double rate = 1.0 + params.beta + params.mu;
    using Event = std::pair<double, long>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;

    std::vector<double> pos(static_cast<std::size_t>(d), 0.0);
    std::vector<std::uint8_t> alive{1};
    std::vector<double> jump(static_cast<std::size_t>(d));
    long living = 1;
    queue.emplace(standard_exponential(rng) / rate, 0);

    RunRecord run;
    run.positions.resize(times.size());
    run.valid.assign(times.size(), 0);
    std::size_t snap = 0;
    auto take = [&](std::size_t s) {
        auto& out = run.positions[s];
        out.reserve(static_cast<std::size_t>(living * d));
        for (std::size_t id = 0; id < alive.size(); ++id) {
            if (!alive[id]) continue;
            out.insert(out.end(), pos.begin() + static_cast<long>(id) * d, pos.begin() + static_cast<long>(id + 1) * d);
        }
        run.valid[s] = 1;
    };

    while (snap < times.size()) {
        if (queue.empty()) {
            while (snap < times.size()) take(snap++);
            break;
        }
        const auto [tau, id] = queue.top();
        while (snap < times.size() && times[snap] < tau) take(snap++);
        if (snap == times.size()) break;
        queue.pop();
        const double u = uniform_open(rng) * rate;
        if (u < 1.0) {
            kernel.sample(rng, jump);
            for (int i = 0; i < d; ++i) pos[static_cast<std::size_t>(id * d + i)] += jump[static_cast<std::size_t>(i)];
            queue.emplace(tau + standard_exponential(rng) / rate, id);
        } else if (u < 1.0 + params.beta) {
            const long child = static_cast<long>(alive.size());
            alive.push_back(1);
            for (int i = 0; i < d; ++i) pos.push_back(pos[static_cast<std::size_t>(id * d + i)]);
            queue.emplace(tau + standard_exponential(rng) / rate, id);
            queue.emplace(tau + standard_exponential(rng) / rate, child);
            ++living;
            run.peak_population = std::max(run.peak_population, living);
            if (living > cap) {
                run.truncated = true;
                run.truncation_time = tau;
                break;
            }
        } else {
            alive[static_cast<std::size_t>(id)] = 0;
            --living;
        }
    }
    return run;
}

BranchingEnsemble simulate_branching(const JumpKernel& kernel, const BranchingParams& params,
                                     std::span<const double> snapshot_times, long n_runs, std::uint64_t seed,
                                     long cap) {
    params.validate();
    if (n_runs < 1) throw DomainError("n_runs must be >= 1");
    if (cap < 1000) throw DomainError("population cap must be >= 1000");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        if (!(snapshot_times[i] >= 0.0) || (i > 0 && snapshot_times[i] < snapshot_times[i - 1])) {
            throw DomainError("snapshot times must be sorted and nonnegative");
        }
    }
    BranchingEnsemble ens;
    ens.seed = seed;
    ens.params = params;
    ens.dimension = kernel.dimension();
    ens.snapshot_times.assign(snapshot_times.begin(), snapshot_times.end());
    ens.n_runs = n_runs;
    ens.cap = cap;
    ens.runs = compute::omp::branching_runs(kernel, params, snapshot_times, n_runs, seed, cap);
    return ens;
}

PopulationStats population_statistics(const BranchingEnsemble& ensemble, std::size_t snapshot) {
    PopulationStats st;
    st.time = ensemble.snapshot_times.at(snapshot);
    double s = 0.0, s2 = 0.0;
    long n = 0;
    for (const auto& run : ensemble.runs) {
        if (!run.valid[snapshot]) continue;
        const double p = double(run.population(snapshot, ensemble.dimension));
        s += p;
        s2 += p * p;
        ++n;
    }
    st.effective_runs = n;
    st.truncated_fraction = 1.0 - double(n) / double(ensemble.n_runs);
    if (n == 0) return st;
    st.mean = s / n;
    const double var = n > 1 ? (s2 - n * st.mean * st.mean) / (n - 1) : 0.0;
    st.stderr_ = std::sqrt(std::max(var, 0.0) / n);
    return st;
}

EmpiricalField estimate_first_moment(const BranchingEnsemble& ensemble, double t, const Grid& cells) {
    const std::size_t snap = ensemble.snapshot_index(t);
    if (cells.dimension != ensemble.dimension) throw InvalidGrid("grid and ensemble dimensions differ");
    const int d = ensemble.dimension;
    std::vector<double> sum(cells.size(), 0.0), sum_sq(cells.size(), 0.0);
    std::vector<std::uint64_t> counts(cells.size(), 0);
    std::vector<std::uint32_t> local(cells.size(), 0);
    std::vector<std::size_t> touched;
    std::uint64_t outside = 0;
    double pos_sum = 0.0, pos_sq = 0.0;
    std::uint64_t particles = 0;
    long n = 0;
    for (const auto& run : ensemble.runs) {
        if (!run.valid[snap]) continue;
        ++n;
        const auto& p = run.positions[snap];
        for (std::size_t i = 0; i < p.size(); i += static_cast<std::size_t>(d)) {
            std::span<const double> x(p.data() + i, static_cast<std::size_t>(d));
            for (double v : x) {
                pos_sum += v;
                pos_sq += v * v;
            }
            ++particles;
            if (auto c = cells.locate(x)) {
                if (local[*c]++ == 0) touched.push_back(*c);
            } else {
                ++outside;
            }
        }
        for (std::size_t c : touched) {
            const double v = local[c];
            sum[c] += v;
            sum_sq[c] += v * v;
            counts[c] += local[c];
            local[c] = 0;
        }
        touched.clear();
    }
    if (n == 0) throw InsufficientData("every run was truncated before t = " + std::to_string(t));

    EmpiricalField field;
    field.time = t;
    field.grid = cells;
    field.samples = n;
    field.counts = std::move(counts);
    field.outside = outside;
    field.method = "branching_first_moment";
    field.mean.resize(cells.size());
    field.stderr_.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const double m = sum[c] / n;
        field.mean[c] = m;
        const double var = n > 1 ? (sum_sq[c] - n * m * m) / (n - 1) : 0.0;
        field.stderr_[c] = std::sqrt(std::max(var, 0.0) / n);
    }
    if (particles > 0) {
        const double samples = double(particles) * d;
        field.displacement_mean = pos_sum / samples;
        field.displacement_var = pos_sq / samples - field.displacement_mean * field.displacement_mean;
    }
    return field;
}

std::optional<double> empirical_front(const EmpiricalField& field) {
    const auto d = static_cast<std::size_t>(field.grid.dimension);
    const double vol = field.grid.cell_volume();
    std::vector<long> j(d);
    std::optional<double> best;
    for (std::size_t c = 0; c < field.mean.size(); ++c) {
        if (field.mean[c] / vol < 1.0) continue;
        field.grid.unflatten(c, j);
        double r2 = 0.0;
        for (long v : j) r2 += field.grid.coordinate(v) * field.grid.coordinate(v);
        best = std::max(best.value_or(0.0), std::sqrt(r2));
    }
    return best;
}

}  // namespace tailwalk
