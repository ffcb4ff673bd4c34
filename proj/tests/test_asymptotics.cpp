#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tailwalk/asymptotics.hpp"
#include "tailwalk/density.hpp"
#include "tailwalk/errors.hpp"

using namespace tailwalk;

namespace {

AsymptoticModel cauchy_model() { return make_isotropic_model(1, 3.0, 2.0 / std::numbers::pi, 1.0); }

}  // namespace

TEST_CASE("Gaussian term values and symmetry") {
    const auto m = cauchy_model();
    CHECK(gaussian_term(m, 1.0, 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(gaussian_term(m, 2.0, 2.0) == doctest::Approx(std::exp(-1.0) / std::sqrt(4.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(gaussian_term(m, 2.0, 2.0) == doctest::Approx(0.103777).epsilon(1e-5));
    CHECK(gaussian_term(m, 3.0, 1.7) == gaussian_term(m, 3.0, -1.7));
    CHECK_THROWS_AS(gaussian_term(m, 0.0, 1.0), DomainError);
    const auto m2 = make_isotropic_model(2, 3.0, 1.0, 2.0);
    std::vector<double> x{1.0, 2.0};
    CHECK(gaussian_term(m2, 1.5, x) == doctest::Approx(std::exp(-5.0 / 6.0) / (6.0 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("tail formula at a tail-zone point") {
    const auto m = cauchy_model();
    const auto v = theorem1_density(m, 10.0, 50.0);
    CHECK(v.reliable);
    CHECK(v.value == doctest::Approx(1.0186e-6).epsilon(1e-4));
    CHECK(v.tail == doctest::Approx(10.0 * (2.0 / std::numbers::pi) / std::pow(50.0, 4)).epsilon(1e-15));
    CHECK(v.gaussian < 1e-50);
}

TEST_CASE("tail formula outside its zone") {
    const auto m = cauchy_model();
    CHECK_THROWS_AS(theorem1_density(m, 10.0, 0.0), OutsideValidityZone);
    CHECK_THROWS_AS(theorem1_density(m, 10.0, 8.0), OutsideValidityZone);
    CHECK_THROWS_AS(theorem1_density(m, 0.5, 7.0), OutsideValidityZone);
    CHECK_NOTHROW(theorem1_density(m, 0.5, 7.1));
    const auto v = theorem1_density(m, 10.0, 8.0, true);
    CHECK_FALSE(v.reliable);
    CHECK(v.tail == doctest::Approx(1.55e-3).epsilon(2e-3));
    CHECK(v.gaussian == doctest::Approx(5.1e-3).epsilon(1e-2));
    CHECK(v.gaussian / v.tail < 10.0);
    CHECK(v.gaussian / v.tail > 0.1);
}

TEST_CASE("tail term is homogeneous in t and |x|") {
    const auto m = make_isotropic_model(2, 2.5, 0.7, 1.3);
    std::vector<double> x{30.0, 40.0}, x2{60.0, 80.0};
    const double a = theorem1_density(m, 7.0, x).tail;
    CHECK(theorem1_density(m, 14.0, x).tail == doctest::Approx(2.0 * a).epsilon(1e-15));
    CHECK(theorem1_density(m, 7.0, x2).tail == doctest::Approx(a / std::pow(2.0, 4.5)).epsilon(1e-15));
    CHECK(a == doctest::Approx(7.0 * 0.7 / std::pow(50.0, 4.5)).epsilon(1e-15));
}

TEST_CASE("regime classification") {
    const auto m = cauchy_model();
    CHECK(classify_regime(m, 100.0, 5.0) == Regime::Central);
    CHECK(classify_regime(m, 100.0, 0.0) == Regime::Central);
    CHECK(classify_regime(m, 10.0, 50.0) == Regime::Tail);
    CHECK(classify_regime(m, 10.0, 8.0) == Regime::Crossover);
    CHECK(classify_regime(m, 10.0, crossover_radius(m, 10.0)) == Regime::Crossover);
    CHECK(to_string(Regime::Tail) == "tail");
}

TEST_CASE("crossover radius follows the logarithmic paraboloid") {
    const auto m = cauchy_model();
    for (double t : {1e2, 1e3, 1e4}) {
        const double r = crossover_radius(m, t);
        const double s = r * r / (2.0 * t * std::log(t));
        CHECK(s >= 0.3);
        CHECK(s <= 3.0);
    }
    double prev = 0.0;
    for (double t = 1.0; t <= 1024.0; t *= 2.0) {
        const double r = crossover_radius(m, t);
        CHECK(r > prev);
        prev = r;
        const double tail = t * m.c0_at(std::vector<double>{1.0}) / std::pow(r, 4.0);
        CHECK(std::abs(tail / gaussian_term(m, t, r) - 1.0) < 1e-10);
        CHECK(r > std::sqrt(4.0 * t));
    }
    CHECK_THROWS_AS(crossover_radius(m, 0.5), DomainError);
}

TEST_CASE("model from a kernel") {
    const auto m = make_model(make_gen_cauchy(2, 2.5), 0.25);
    CHECK(m.dimension == 2);
    CHECK(m.alpha == 2.5);
    CHECK(m.sigma2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.delta == 0.25);
    CHECK(m.threshold == 50.0);
    CHECK_THROWS_AS(make_model(make_kernel({Family::Gaussian, 1, 3.0, {}})), NoPowerTail);
    CHECK_THROWS_AS(make_isotropic_model(1, 2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_isotropic_model(1, 3.0, 1.0, 0.0), DomainError);
}

TEST_CASE("solver tail error decays like t / x^2") {
    const auto k = make_cauchy2_1d();
    const double c0 = 2.0 / std::numbers::pi;
    for (double t : {20.0, 50.0}) {
        const auto f = solve_fourier_continuum(k, t, plan_continuum_grid(k, t, 1.05 * std::sqrt(400.0 * t)));
        std::vector<double> err;
        for (double q : {50.0, 100.0, 200.0, 400.0}) {
            std::vector<double> x{std::sqrt(q * t)};
            err.push_back(std::abs(f.interpolate(x) * std::pow(x[0], 4) / t - c0) / c0);
        }
        for (std::size_t i = 1; i < err.size(); ++i) {
            CHECK(err[i] < err[i - 1]);
            CHECK(err[i - 1] / err[i] == doctest::Approx(2.0).epsilon(0.2));
        }
    }
}
