#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "oracles/char_fn_quadrature.hpp"
#include "oracles/matrix_exponential.hpp"
#include "tailwalk/compute/kernels.hpp"
#include "tailwalk/density.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/spectral.hpp"

using namespace tailwalk;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double torus_value(const DensityField& f, long j) {
    std::vector<long> idx{j};
    return f.value(idx);
}

}  // namespace

TEST_CASE("series solver matches a dense matrix exponential on the 32-torus") {
    const long side = 32;
    const auto zipf = make_lattice_zipf(1, 3.0);
    const double c = 1.0 / (2.0 * (std::riemann_zeta(4.0) - 1.0));
    auto zipf_weight = [&](long z) { return z == 0 ? 0.0 : c / std::pow(1.0 + std::abs(double(z)), 4.0); };
    const auto table = make_kernel({Family::LatticeTable, 1, 3.0, {{{1}, 0.3}, {{-1}, 0.3}, {{3}, 0.2}, {{-3}, 0.2}}});
    auto table_weight = [](long z) {
        if (std::abs(z) == 1) return 0.3;
        if (std::abs(z) == 3) return 0.2;
        return 0.0;
    };
    for (double t : {0.5, 3.0, 20.0}) {
        const auto a = solve_series_lattice(zipf, t, side, {kInf});
        const auto oa = oracles::torus_walk_1d(zipf_weight, 200000, side, t);
        const auto b = solve_series_lattice(table, t, side, {kInf});
        const auto ob = oracles::torus_walk_1d(table_weight, 3, side, t);
        for (long j = -side / 2; j < side / 2; ++j) {
            const auto r = static_cast<std::size_t>((j + side) % side);
            CHECK(std::abs(torus_value(a, j) - oa[r]) < 1e-12);
            CHECK(std::abs(torus_value(b, j) - ob[r]) < 1e-12);
        }
    }
}

TEST_CASE("series solver at t = 0 is the delta at the origin") {
    const auto f = solve_series_lattice(make_lattice_zipf(2, 2.5), 0.0, 16);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::vector<long> j(2);
        f.grid.unflatten(i, j);
        CHECK(f.values[i] == ((j[0] == 0 && j[1] == 0) ? 1.0 : 0.0));
    }
}

TEST_CASE("series solver conserves mass and is symmetric") {
    const auto f = solve_series_lattice(make_lattice_zipf(1, 3.0), 10.0, 512, {kInf});
    CHECK(std::abs(f.mass() - 1.0) < 1e-10);
    CHECK(f.max_mirror_gap() == 0.0);
    CHECK(f.budget.truncation < 1e-15);
    const auto g = solve_series_lattice(make_lattice_zipf(2, 3.0), 5.0, 128, {kInf});
    CHECK(std::abs(g.mass() - 1.0) < 1e-10);
    CHECK(g.max_mirror_gap() == 0.0);
}

TEST_CASE("series solver obeys Chapman-Kolmogorov on the torus") {
    const long side = 128;
    const auto k = make_lattice_zipf(1, 2.5);
    const auto p1 = solve_series_lattice(k, 1.5, side, {kInf});
    const auto p2 = solve_series_lattice(k, 2.5, side, {kInf});
    const auto p3 = solve_series_lattice(k, 4.0, side, {kInf});
    auto at = [&](const DensityField& f, long j) {
        long r = ((j % side) + side) % side;
        if (r >= side / 2) r -= side;
        return torus_value(f, r);
    };
    double worst = 0.0;
    for (long x = -side / 2; x < side / 2; ++x) {
        double conv = 0.0;
        for (long y = -side / 2; y < side / 2; ++y) conv += at(p1, y) * at(p2, x - y);
        worst = std::max(worst, std::abs(conv - at(p3, x)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("series solver refuses an aliased torus and suggests a side") {
    const auto k = make_lattice_zipf(1, 3.0);
    try {
        solve_series_lattice(k, 50.0, 32);
        FAIL("expected GridTooSmallSuggest");
    } catch (const GridTooSmallSuggest& e) {
        CHECK(e.suggested_side() > 32);
        CHECK(lattice_aliasing_estimate(k, 50.0, e.suggested_side()) <= 1e-8);
        CHECK_NOTHROW(solve_series_lattice(k, 50.0, e.suggested_side()));
    }
    CHECK_THROWS_AS(solve_series_lattice(k, -1.0, 32), DomainError);
    CHECK_THROWS_AS(solve_series_lattice(k, 1.0, 31), InvalidGrid);
    CHECK_THROWS_AS(solve_series_lattice(make_cauchy2_1d(), 1.0, 32), InvalidGrid);
}

TEST_CASE("series terms bound the Poisson truncation") {
    for (double t : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
        const int n = series_terms(t);
        CHECK(n == int(std::ceil(t + 12.0 * std::sqrt(t) + 25.0)));
    }
}

TEST_CASE("continuum solver against an independent cosine inversion") {
    const auto k = make_cauchy2_1d();
    for (double t : {0.5, 2.0}) {
        const Grid grid = plan_continuum_grid(k, t, 30.0);
        const auto f = solve_fourier_continuum(k, t, grid);
        CHECK(f.atom == doctest::Approx(std::exp(-t)).epsilon(1e-15));
        auto symbol = [&](double q) {
            const double ahat = (1.0 + q) * std::exp(-q);
            return std::exp(-t) * std::expm1(t * ahat);
        };
        for (double x : {0.0, 0.5, 1.0, 3.0, 10.0}) {
            const long j = std::lround(x / grid.spacing);
            std::vector<long> idx{j};
            const double xj = grid.coordinate(j);
            // p(x) = (1/pi) int_0^inf symbol(q) cos(q x) dq: the oracle transforms in q.
            const double oracle =
                xj == 0.0 ? boost::math::quadrature::gauss_kronrod<double, 61>::integrate(symbol, 0.0, kInf, 15, 1e-14) /
                                std::numbers::pi
                          : oracles::cosine_transform_1d(symbol, xj) / (2.0 * std::numbers::pi);
            CHECK(std::abs(f.value(idx) - oracle) < 1e-9);
        }
    }
}

TEST_CASE("continuum solver conserves mass at large times") {
    const auto k = make_cauchy2_1d();
    const double t = 100.0;
    const auto f = solve_fourier_continuum(k, t, plan_continuum_grid(k, t, 1500.0));
    CHECK(std::abs(f.mass() - 1.0) < 1e-6);
    CHECK(f.max_mirror_gap() == 0.0);
    CHECK(f.budget.quadrature <= 1e-9);
}

TEST_CASE("continuum solver in two dimensions is symmetric and normalized") {
    const auto k = make_gen_cauchy(2, 3.0);
    const double t = 4.0;
    const auto f = solve_fourier_continuum(k, t, plan_continuum_grid(k, t, 15.0));
    CHECK(f.max_mirror_gap() == 0.0);
    CHECK(std::abs(f.mass() - 1.0) < f.budget.outside + 1e-6);
    std::vector<long> a{3, 0}, b{0, 3}, c{-3, 0};
    CHECK(f.value(a) == doctest::Approx(f.value(b)).epsilon(1e-10));
    CHECK(f.value(a) == f.value(c));
}

TEST_CASE("continuum solver tail decays monotonically") {
    const auto k = make_cauchy2_1d();
    const auto f = solve_fourier_continuum(k, 5.0, plan_continuum_grid(k, 5.0, 60.0));
    for (long j = 1; j <= f.grid.half_points; ++j) {
        std::vector<long> a{j - 1}, b{j};
        CHECK(f.value(b) <= f.value(a) + 1e-12);
    }
}

TEST_CASE("continuum solver rejects bad input") {
    const auto k = make_cauchy2_1d();
    const Grid g = make_grid(1, 0.25, 40);
    CHECK_THROWS_AS(solve_fourier_continuum(k, 0.0, g), DomainError);
    CHECK_THROWS_AS(solve_fourier_continuum(make_lattice_zipf(1, 3.0), 1.0, make_grid(1, 1.0, 40, Support::Lattice)),
                    InvalidGrid);
    CHECK_THROWS_AS(solve_fourier_continuum(k, 1.0, make_grid(2, 0.25, 10)), InvalidGrid);
}

TEST_CASE("CTRW displacement moments") {
    const auto k = make_gen_cauchy(1, 5.0);
    const double t = 10.0;
    const long n = 200000;
    const auto e = simulate_ctrw(k, t, n, 7, make_grid(1, 0.5, 40));
    CHECK(std::abs(e.displacement_mean) < 5.0 * std::sqrt(t / n));
    // E X^4 = 3 t^2 + t m4 bounds the variance of X^2.
    const double se = std::sqrt((3.0 * t * t + t * moment(k, 4)) / n);
    CHECK(std::abs(e.displacement_var - t) < 5.0 * se);
}

TEST_CASE("CTRW cell frequencies agree with exact cell probabilities") {
    for (const auto& k : {make_cauchy2_1d(), make_lattice_zipf(1, 3.0)}) {
        const double t = 3.0;
        const Grid cells = k.support() == Support::Lattice ? make_grid(1, 1.0, 12, Support::Lattice) : make_grid(1, 0.5, 12);
        const auto exact = cell_probabilities(k, t, cells);
        const long n = 400000;
        const auto e = simulate_ctrw(k, t, n, 11, cells);
        double worst = 0.0;
        for (std::size_t i = 0; i < exact.size(); ++i) {
            const double se = std::sqrt(exact[i] * (1.0 - exact[i]) / n);
            worst = std::max(worst, std::abs(e.mean[i] - exact[i]) / se);
        }
        CHECK(worst < 5.0);
    }
}

TEST_CASE("cell probabilities sum to one on a wide grid") {
    const auto k = make_cauchy2_1d();
    const auto p = cell_probabilities(k, 2.0, make_grid(1, 0.5, 400));
    double s = 0.0;
    for (double v : p) s += v;
    CHECK(s == doctest::Approx(1.0 - 2.0 * k.radial_tail(200.25)).epsilon(1e-6));
}

TEST_CASE("serial and OpenMP CTRW are bit-identical") {
    const auto k = make_gen_cauchy(2, 2.5);
    const Grid cells = make_grid(2, 0.5, 10);
    const auto a = compute::serial::ctrw(k, 4.0, 5000, 3, cells);
    const auto b = compute::omp::ctrw(k, 4.0, 5000, 3, cells);
    CHECK(a.counts == b.counts);
    CHECK(a.outside == b.outside);
    CHECK(a.sum == b.sum);
    CHECK(a.sum_sq == b.sum_sq);
}

TEST_CASE("serial and OpenMP spectral kernels agree exactly") {
    const auto k = make_gen_cauchy(2, 3.0);
    compute::RadialSymbol f = [&](double q) { return radial_char_fn(k, q); };
    std::vector<double> a, b;
    compute::serial::fill_radial_symbol(f, 2, 33, 0.1, a);
    compute::omp::fill_radial_symbol(f, 2, 33, 0.1, b);
    CHECK(a == b);
    std::vector<double> x{0.0, 0.3, 2.0, 7.5}, ca(4), cb(4);
    std::vector<double> spec(a.begin(), a.begin() + 33);
    compute::serial::cosine_sum(spec, 0.1, x, ca);
    compute::omp::cosine_sum(spec, 0.1, x, cb);
    CHECK(ca == cb);
    std::vector<double> ha(spec.size()), hb(spec.size());
    compute::serial::series_horner(spec, 3.0, 40, ha);
    compute::omp::series_horner(spec, 3.0, 40, hb);
    CHECK(ha == hb);
    CHECK(ha[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("CTRW is reproducible and rejects bad input") {
    const auto k = make_cauchy2_1d();
    const Grid cells = make_grid(1, 0.5, 10);
    const auto a = simulate_ctrw(k, 2.0, 3000, 5, cells);
    const auto b = simulate_ctrw(k, 2.0, 3000, 5, cells);
    CHECK(a.counts == b.counts);
    CHECK_THROWS_AS(simulate_ctrw(k, 2.0, 0, 5, cells), DomainError);
}
