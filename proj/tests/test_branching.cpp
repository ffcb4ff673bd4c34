#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tailwalk/branching.hpp"
#include "tailwalk/compute/kernels.hpp"
#include "tailwalk/density.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/front.hpp"

using namespace tailwalk;

namespace {

const BranchingParams kSuper{0.5, 0.25};

}  // namespace

TEST_CASE("without reactions a single walker is a CTRW") {
    const auto k = make_cauchy2_1d();
    const std::vector<double> times{3.0};
    const long n = 20000;
    const auto ens = simulate_branching(k, {0.0, 0.0}, times, n, 11);
    for (const auto& run : ens.runs) {
        REQUIRE(run.population(0, 1) == 1);
        CHECK_FALSE(run.truncated);
    }
    const auto cells = make_grid(1, 1.0, 30);
    const auto f = estimate_first_moment(ens, 3.0, cells);
    const auto p = cell_probabilities(k, 3.0, cells);
    double worst = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (p[c] * n < 20.0) continue;
        const double se = std::sqrt(p[c] * (1.0 - p[c]) / n);
        worst = std::max(worst, std::abs(f.mean[c] - p[c]) / se);
    }
    CHECK(worst < 5.0);
}

TEST_CASE("mean population grows as exp((beta - mu) t)") {
    const std::vector<double> times{4.0};
    const auto ens = simulate_branching(make_cauchy2_1d(), kSuper, times, 10000, 2024);
    const auto st = population_statistics(ens, 0);
    CHECK(st.effective_runs == 10000);
    CHECK(st.truncated_fraction == 0.0);
    CHECK(std::abs(st.mean - std::numbers::e) < 3.0 * st.stderr_);
}

TEST_CASE("pure death never increases a population") {
    const std::vector<double> times{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    const auto ens = simulate_branching(make_cauchy2_1d(), {0.0, 0.5}, times, 2000, 5);
    for (const auto& run : ens.runs) {
        for (std::size_t s = 1; s < times.size(); ++s) CHECK(run.population(s, 1) <= run.population(s - 1, 1));
        CHECK(run.population(0, 1) == 1);
    }
    const auto st = population_statistics(ens, 4);
    CHECK(std::abs(st.mean - std::exp(-2.0)) < 3.0 * st.stderr_);
}

TEST_CASE("discounted population is a martingale") {
    const std::vector<double> times{1.0, 2.0, 4.0, 6.0};
    const auto ens = simulate_branching(make_cauchy2_1d(), kSuper, times, 10000, 77);
    for (std::size_t s = 0; s < times.size(); ++s) {
        const auto st = population_statistics(ens, s);
        const double g = std::exp(-kSuper.delta() * times[s]);
        CHECK(std::abs(st.mean * g - 1.0) < 3.0 * st.stderr_ * g);
    }
}

TEST_CASE("ensembles are reproducible and independent of the execution mode") {
    const auto k = make_gen_cauchy(1, 3.0);
    const std::vector<double> times{1.0, 3.0};
    const auto a = simulate_branching(k, kSuper, times, 300, 9);
    const auto b = simulate_branching(k, kSuper, times, 300, 9);
    const auto s = compute::serial::branching_runs(k, kSuper, times, 300, 9, 100000);
    REQUIRE(a.runs.size() == s.size());
    for (std::size_t r = 0; r < s.size(); ++r) {
        CHECK(a.runs[r].positions == b.runs[r].positions);
        CHECK(a.runs[r].positions == s[r].positions);
        CHECK(a.runs[r].valid == s[r].valid);
    }
    const auto c = simulate_branching(k, kSuper, times, 300, 10);
    bool differs = false;
    for (std::size_t r = 0; r < s.size(); ++r) differs = differs || c.runs[r].positions != a.runs[r].positions;
    CHECK(differs);
}

TEST_CASE("first-moment field matches exp(delta t) times the transition density") {
    const auto k = make_cauchy2_1d();
    const double t = 6.0;
    const long n = 10000;
    const std::vector<double> times{t};
    const auto ens = simulate_branching(k, kSuper, times, n, 31337);
    const auto cells = make_grid(1, 1.0, 60);
    const auto f = estimate_first_moment(ens, t, cells);
    const auto p = cell_probabilities(k, t, cells);
    const double g = std::exp(kSuper.delta() * t);
    long eligible = 0, within = 0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (g * p[c] * n < 10.0) continue;
        ++eligible;
        within += std::abs(f.mean[c] - g * p[c]) <= 3.0 * f.stderr_[c];
    }
    REQUIRE(eligible > 20);
    CHECK(double(within) / double(eligible) >= 0.95);

    const auto st = population_statistics(ens, 0);
    CHECK(f.total_mean() + double(f.outside) / double(n) == doctest::Approx(st.mean).epsilon(1e-12));
}

TEST_CASE("empirical front tracks the numeric front") {
    const auto k = make_cauchy2_1d();
    const std::vector<double> times{8.0, 12.0};
    const auto ens = simulate_branching(k, kSuper, times, 4000, 4242);
    SolverProvider sp(k, {1e-9});
    const auto cells = make_grid(1, 0.25, 200);
    for (double t : times) {
        const auto r = empirical_front(estimate_first_moment(ens, t, cells));
        const auto ref = front_radius(sp, kSuper.delta(), t);
        REQUIRE(r.has_value());
        REQUIRE(ref.has_value());
        CHECK(std::abs(*r / *ref - 1.0) < 0.15);
    }
}

TEST_CASE("population cap truncates and flags runs") {
    const std::vector<double> times{1.0, 40.0};
    const auto ens = simulate_branching(make_cauchy2_1d(), {2.0, 0.0}, times, 4, 1, 1000);
    for (const auto& run : ens.runs) {
        CHECK(run.truncated);
        CHECK(run.truncation_time < 40.0);
        CHECK(run.valid[1] == 0);
        CHECK(run.peak_population == 1001);
    }
    CHECK(population_statistics(ens, 1).truncated_fraction == 1.0);
    CHECK_THROWS_AS(estimate_first_moment(ens, 40.0, make_grid(1, 1.0, 10)), InsufficientData);
    CHECK_NOTHROW(estimate_first_moment(ens, 1.0, make_grid(1, 1.0, 10)));
}

TEST_CASE("bad branching input is rejected") {
    const auto k = make_cauchy2_1d();
    const std::vector<double> ok{1.0}, unsorted{2.0, 1.0}, negative{-1.0};
    CHECK_THROWS_AS(simulate_branching(k, {-0.1, 0.0}, ok, 10, 1), DomainError);
    CHECK_THROWS_AS(simulate_branching(k, {0.0, INFINITY}, ok, 10, 1), DomainError);
    CHECK_THROWS_AS(simulate_branching(k, kSuper, unsorted, 10, 1), DomainError);
    CHECK_THROWS_AS(simulate_branching(k, kSuper, negative, 10, 1), DomainError);
    CHECK_THROWS_AS(simulate_branching(k, kSuper, ok, 0, 1), DomainError);
    CHECK_THROWS_AS(simulate_branching(k, kSuper, ok, 10, 1, 999), DomainError);
    const auto ens = simulate_branching(k, kSuper, ok, 10, 1);
    CHECK_THROWS_AS(estimate_first_moment(ens, 2.0, make_grid(1, 1.0, 10)), DomainError);
    CHECK_THROWS_AS(estimate_first_moment(ens, 1.0, make_grid(2, 1.0, 10)), InvalidGrid);
}
