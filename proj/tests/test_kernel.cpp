#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tailwalk/errors.hpp"
#include "tailwalk/kernel.hpp"

using namespace tailwalk;

namespace {

constexpr double kPi = std::numbers::pi;

double cauchy_tail_closed(double r) { return (2.0 / kPi) * (kPi / 2.0 - std::atan(r) - r / (1.0 + r * r)); }

/// P(|Z| > r) by adaptive quadrature of the density itself.
double tail_by_quadrature(const JumpKernel& k, double r) {
    const int d = k.dimension();
    const double area = unit_sphere_area(d);
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return area * std::pow(s, d - 1) * k.radial_density(s); }, r,
        std::numeric_limits<double>::infinity(), 15, 1e-13);
}

}  // namespace

TEST_CASE("Cauchy-squared density values and tail metadata") {
    const auto k = make_cauchy2_1d();
    const double z0[] = {0.0}, z1[] = {1.0};
    CHECK(k.density(z0) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
    CHECK(k.density(z1) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-15));
    CHECK(k.dimension() == 1);
    CHECK(k.alpha() == 3.0);
    CHECK(k.c0() == doctest::Approx(2.0 / kPi).epsilon(1e-14));
    CHECK(k.sigma2() == 1.0);
}

TEST_CASE("GenCauchy(1, 3) coincides with the Cauchy-squared kernel") {
    const auto a = make_cauchy2_1d();
    const auto b = make_gen_cauchy(1, 3.0);
    for (double r : {0.0, 0.3, 1.0, 7.0, 120.0}) {
        CHECK(b.radial_density(r) == doctest::Approx(a.radial_density(r)).epsilon(1e-13));
    }
    CHECK(b.c0() == doctest::Approx(a.c0()).epsilon(1e-13));
}

TEST_CASE("symmetry a(z) = a(-z) at sampled points") {
    std::vector<JumpKernel> kernels{make_cauchy2_1d(), make_gen_cauchy(2, 2.5), make_gen_cauchy(3, 4.0),
                                    make_lattice_zipf(1, 3.0), make_lattice_zipf(2, 3.0)};
    Rng rng = make_stream(7, 0);
    for (const auto& k : kernels) {
        for (int i = 0; i < 200; ++i) {
            std::vector<double> z(k.dimension()), mz(k.dimension());
            for (int a = 0; a < k.dimension(); ++a) {
                z[a] = 40.0 * (uniform_open(rng) - 0.5);
                mz[a] = -z[a];
            }
            CHECK(k.density(z) == k.density(mz));
        }
    }
}

TEST_CASE("normalization of every builtin family") {
    for (const auto& k : {make_cauchy2_1d(), make_gen_cauchy(2, 2.5), make_gen_cauchy(3, 3.5)}) {
        CHECK(tail_by_quadrature(k, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const auto& k : {make_lattice_zipf(1, 3.0), make_lattice_zipf(2, 2.5), make_lattice_zipf(3, 3.0)}) {
        double s = k.lattice_residual_mass();
        for (const auto& j : k.lattice_jumps()) s += j.weight;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(make_gen_cauchy(1, 2.0), TailTooHeavy);
    CHECK_THROWS_AS(make_gen_cauchy(2, 1.5), TailTooHeavy);
    CHECK_THROWS_AS(make_lattice_zipf(1, 2.0), TailTooHeavy);
    CHECK_THROWS_AS(make_gen_cauchy(0, 3.0), InvalidKernel);
    CHECK_THROWS_AS(make_kernel({Family::GenCauchy, 1, std::nan(""), {}}), InvalidKernel);
    CHECK_THROWS_AS(make_kernel({Family::LatticeTable, 1, 3.0, {{{1}, 0.5}}}), InvalidKernel);
    CHECK_THROWS_AS(make_kernel({Family::LatticeTable, 1, 3.0, {{{1}, 0.7}, {{-1}, 0.3}}}), InvalidKernel);
}

TEST_CASE("moments of the Cauchy-squared kernel") {
    const auto k = make_cauchy2_1d();
    CHECK(moment(k, 0) == 1.0);
    CHECK(moment(k, 1) == 0.0);
    CHECK(moment(k, 2) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(moment(k, 4), MomentDiverges);
    CHECK_THROWS_AS(moment(k, 3), MomentDiverges);
    CHECK_THROWS_AS(moment(k, -1), DomainError);

    // Truncated fourth moment grows linearly: increments approach (4/pi) R.
    auto truncated = [&](double R) {
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double x) { return 2.0 * std::pow(x, 4) * k.radial_density(x); }, 0.0, R, 15, 1e-12);
    };
    for (double R : {100.0, 1000.0}) {
        const double slope = (truncated(2 * R) - truncated(R)) / R;
        CHECK(slope == doctest::Approx(4.0 / kPi).epsilon(0.01));
    }
}

TEST_CASE("second moment matches sigma^2 on continuum families") {
    for (const auto& k : {make_cauchy2_1d(), make_gen_cauchy(2, 2.5), make_gen_cauchy(3, 4.5)}) {
        CHECK(moment(k, 2) == doctest::Approx(k.sigma2()).epsilon(1e-6));
    }
}

TEST_CASE("lattice Zipf second moment by direct summation") {
    const auto k = make_lattice_zipf(1, 3.0);
    long double s = 0.0L;
    const double C = k.c0();
    const long N = 2000000;
    for (long n = 1; n <= N; ++n) s += 2.0L * C * (long double)n * n / std::pow(1.0L + n, 4.0L);
    // Remainder of the sum, ~ int_{N+1/2}^inf dx / x^2.
    s += 2.0L * C / (N + 0.5L);
    CHECK(k.sigma2() == doctest::Approx(double(s)).epsilon(1e-6));
    CHECK(moment(k, 2) == doctest::Approx(k.sigma2()).epsilon(1e-12));
}

TEST_CASE("sampling statistics of the Cauchy-squared kernel") {
    const auto k = make_cauchy2_1d();
    Rng rng = make_stream(20240601, 0);
    const long n = 1000000;
    double s1 = 0, s2 = 0, s4 = 0;
    long above = 0;
    for (long i = 0; i < n; ++i) {
        double z;
        k.sample(rng, std::span<double>(&z, 1));
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
        above += std::abs(z) > 10.0;
    }
    const double mean = s1 / n;
    CHECK(std::abs(mean) < 4.0 * std::sqrt(1.0 / n));
    const double m2 = s2 / n;
    const double se_m2 = std::sqrt((s4 / n - m2 * m2) / n);
    CHECK(std::abs(m2 - 1.0) < 4.0 * se_m2);

    const double p_oracle = tail_by_quadrature(k, 10.0);
    CHECK(p_oracle == doctest::Approx(cauchy_tail_closed(10.0)).epsilon(1e-10));
    const double p_hat = double(above) / n;
    CHECK(std::abs(p_hat - p_oracle) < 4.0 * std::sqrt(p_oracle * (1 - p_oracle) / n));
}

TEST_CASE("sampler reproducibility") {
    const auto k = make_gen_cauchy(2, 2.5);
    Rng a = make_stream(5, 3), b = make_stream(5, 3);
    for (int i = 0; i < 1000; ++i) CHECK(sample_jump(k, a) == sample_jump(k, b));
}

TEST_CASE("Kolmogorov-Smirnov test of sampled radii") {
    for (const auto& k : {make_cauchy2_1d(), make_gen_cauchy(2, 2.5), make_gen_cauchy(3, 3.5)}) {
        Rng rng = make_stream(99, 1);
        const int n = 100000;
        std::vector<double> r(n), z(k.dimension());
        for (int i = 0; i < n; ++i) {
            k.sample(rng, z);
            double s = 0;
            for (double v : z) s += v * v;
            r[i] = std::sqrt(s);
        }
        std::sort(r.begin(), r.end());
        double ks = 0.0;
        // Oracle CDF evaluated on a subsample of order statistics.
        for (int i = 0; i < n; i += 97) {
            const double F = 1.0 - tail_by_quadrature(k, r[i]);
            ks = std::max({ks, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)});
        }
        CAPTURE(k.id());
        CHECK(ks < 1.949 / std::sqrt(double(n)));
    }
}

TEST_CASE("radial_tail agrees with quadrature") {
    for (const auto& k : {make_cauchy2_1d(), make_gen_cauchy(2, 2.5)}) {
        for (double r : {0.5, 3.0, 10.0, 100.0, 1e4}) {
            CHECK(k.radial_tail(r) == doctest::Approx(tail_by_quadrature(k, r)).epsilon(1e-6));
        }
    }
}

TEST_CASE("tail coefficient convergence over R = 10, 20, 40, 80") {
    std::vector<JumpKernel> kernels{make_cauchy2_1d(), make_gen_cauchy(2, 2.5), make_gen_cauchy(3, 3.0),
                                    make_lattice_zipf(1, 3.0)};
    for (const auto& k : kernels) {
        CAPTURE(k.id());
        const int d = k.dimension();
        double previous = std::numeric_limits<double>::infinity();
        for (double R : {10.0, 20.0, 40.0, 80.0}) {
            double worst = 0.0;
            std::vector<std::vector<double>> dirs;
            dirs.push_back(std::vector<double>(d, 0.0));
            dirs.back()[0] = 1.0;
            if (d > 1) dirs.push_back(std::vector<double>(d, 1.0 / std::sqrt(double(d))));
            for (const auto& e : dirs) {
                std::vector<double> z(d);
                for (int a = 0; a < d; ++a) z[a] = R * e[a];
                worst = std::max(worst, std::abs(std::pow(R, d + k.alpha()) * k.density(z) - k.c0(e)));
            }
            CHECK(worst < previous);
            previous = worst;
            if (R == 80.0) CHECK(worst < 0.05 * k.c0());
        }
    }
}

TEST_CASE("lattice direction table") {
    const auto k = make_lattice_zipf(2, 3.0);
    const auto table = k.direction_table();
    REQUIRE(table.size() == 3);
    for (const auto& e : table) CHECK(std::abs(e.value - k.c0()) < 0.05 * k.c0());
}

TEST_CASE("Gaussian diagnostic kernel has no power tail") {
    const auto g = make_kernel({Family::Gaussian, 1, 3.0, {}});
    CHECK_FALSE(g.has_power_tail());
    CHECK(moment(g, 4) == doctest::Approx(3.0));
    CHECK(g.sigma2() == 1.0);
}
