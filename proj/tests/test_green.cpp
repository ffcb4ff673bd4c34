#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles/resolvent.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/green.hpp"

using namespace tailwalk;

namespace {

AsymptoticModel cauchy_model() { return make_isotropic_model(1, 3.0, 2.0 / std::numbers::pi, 1.0); }

}  // namespace

TEST_CASE("Green asymptotic values and homogeneity") {
    const auto m = cauchy_model();
    CHECK(theorem3_green(m, 1.0, 30.0) == doctest::Approx(7.858e-7).epsilon(1e-4));
    CHECK(theorem3_green(m, 1.0, 30.0) == doctest::Approx((2.0 / std::numbers::pi) / 810000.0).epsilon(1e-15));
    CHECK(theorem3_green(m, 2.0, 7.0) == doctest::Approx(theorem3_green(m, 1.0, 7.0) / 4.0).epsilon(1e-15));
    for (double x : {3.0, 11.0, 40.0}) {
        for (double lam : {0.5, 1.0, 2.0}) {
            CHECK(lam * lam * std::pow(x, 4) * theorem3_green(m, lam, x) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));
        }
    }
    std::vector<double> small{5.0}, large{10.0};
    CHECK_FALSE(theorem3_reliable(1.0, small));
    CHECK(theorem3_reliable(1.0, large));
    CHECK_THROWS_AS(theorem3_green(m, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(theorem3_green(m, 1.0, 0.0), DomainError);
}

TEST_CASE("time quadrature reproduces the Laplace moments") {
    for (double lam : {0.5, 1.0, 2.0}) {
        for (double X : {1.0, 10.0, 100.0, 1000.0}) {
            const double exact = (1.0 - std::exp(-lam * X) * (1.0 + lam * X)) / (lam * lam);
            CHECK(std::abs(laplace_integral([](double t) { return t; }, lam, 0.0, X) - exact) < 1e-10);
        }
    }
    CHECK_THROWS_AS(laplace_integral([](double) { return 1.0; }, 1.0, 0.0, 1e9, 100), IntegrationBudgetExceeded);
}

TEST_CASE("numeric Green function against the resolvent in Fourier space") {
    const auto k = make_cauchy2_1d();
    const auto m = make_model(k);
    SolverProvider sp(k, {1e-13});
    std::vector<double> xs{0.5, 3.0, 10.0, 30.0};
    for (double lam : {0.5, 2.0}) {
        const auto s = green_function(sp, m, lam, xs, {1e-14});
        for (const auto& e : s.entries) {
            const double oracle = oracles::cauchy2_green(lam, e.x[0]);
            INFO("lambda = " << lam << ", x = " << e.x[0]);
            // Near the origin only the Gaussian term is integrated beyond T1 = 10 / lambda.
            CHECK(std::abs(e.numeric / oracle - 1.0) < (e.x[0] < 5.0 ? 1e-4 : 1e-6));
        }
    }
}

TEST_CASE("Green function tail: value at x = 30 and monotone in lambda") {
    const auto k = make_cauchy2_1d();
    const auto m = make_model(k);
    SolverProvider sp(k, {1e-13});
    const double g1 = green_function(sp, m, 1.0, 30.0, {1e-14});
    CHECK(std::abs(g1 / 7.86e-7 - 1.0) < 0.1);
    const double g05 = green_function(sp, m, 0.5, 30.0, {1e-14});
    const double g2 = green_function(sp, m, 2.0, 30.0, {1e-14});
    CHECK(g05 > g1);
    CHECK(g1 > g2);
}

TEST_CASE("normalized Green error is small and shrinks with lambda |x|^2") {
    const auto k = make_cauchy2_1d();
    const auto m = make_model(k);
    for (double lam : {0.5, 1.0, 2.0}) {
        SolverProvider sp(k, {1e-13});
        std::vector<double> xs;
        for (double q : {500.0, 2000.0, 8000.0}) xs.push_back(std::sqrt(q / lam));
        const auto s = green_function(sp, m, lam, xs, {1e-14});
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK(s.entries[i].normalized_error < 0.1);
            CHECK(s.entries[i].theorem3_reliable);
            if (i > 0) CHECK(s.entries[i].normalized_error < s.entries[i - 1].normalized_error);
        }
        CHECK(s.truncation_bound < 1e-10);
    }
}

TEST_CASE("Green function integrates to 1 / lambda") {
    const auto k = make_cauchy2_1d();
    const auto m = make_model(k);
    SolverProvider sp(k, {1e-12});
    const auto f = green_field(sp, m, 1.0, make_grid(1, 0.1, 1500), {1e-13});
    CHECK(f.atom == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(f.mass() - 1.0) < 1e-4);
}

TEST_CASE("Green function of a lattice walk has no separate atom") {
    const auto k = make_lattice_zipf(1, 3.0);
    const auto m = make_model(k);
    SolverProvider sp(k, {1e-12});
    const auto f = green_field(sp, m, 1.0, make_grid(1, 1.0, 200, Support::Lattice), {1e-13});
    CHECK(f.atom == 0.0);
    CHECK(std::abs(f.mass() - 1.0) < 1e-4);
}

TEST_CASE("Green function rejects a non-positive rate") {
    SolverProvider sp(make_cauchy2_1d());
    CHECK_THROWS_AS(green_function(sp, cauchy_model(), 0.0, 1.0), DomainError);
}
