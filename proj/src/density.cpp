#include "tailwalk/density.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "fft.hpp"
#include "tailwalk/compute/kernels.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/spectral.hpp"

namespace tailwalk {

namespace {

double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Internal sizes are powers of two, so that FFT plans (cached per size)
// repeat across solves.
long next_pow2(long n) {
    long m = 1;
    while (m < n) m *= 2;
    return m;
}

std::size_t ipow(std::size_t base, int d) {
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) n *= base;
    return n;
}

}  // namespace

int series_terms(double t) { return static_cast<int>(std::ceil(t + 12.0 * std::sqrt(t) + 25.0)); }

double lattice_aliasing_estimate(const JumpKernel& kernel, double t, long side) {
    if (t <= 0.0) return 0.0;
    const double w = 0.5 * double(side);
    const double jump = 1.5 * t * kernel.radial_tail(w);
    const double bulk = 2.0 * normal_tail(w / std::sqrt(kernel.sigma2() * t));
    return kernel.dimension() * (jump + bulk);
}

DensityField solve_series_lattice(const JumpKernel& kernel, double t, long side, const LatticeSolveOptions& options) {
    if (kernel.support() != Support::Lattice) throw InvalidGrid("the series solver needs a lattice kernel");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
    if (side < 2 || side % 2 != 0) throw InvalidGrid("torus side must be even and >= 2");
    const int d = kernel.dimension();

    const double alias = lattice_aliasing_estimate(kernel, t, side);
    if (alias > options.alias_tolerance) {
        long suggested = side;
        while (lattice_aliasing_estimate(kernel, t, suggested) > options.alias_tolerance && suggested < (1L << 26)) {
            suggested *= 2;
        }
        throw GridTooSmallSuggest("torus side " + std::to_string(side) + " aliases an estimated " +
                                      std::to_string(alias) + " of the mass at t = " + std::to_string(t),
                                  suggested);
    }

    DensityField field;
    field.time = t;
    field.grid = make_grid(d, 1.0, side / 2, Support::Lattice);
    field.kernel_id = kernel.id();
    field.method = "series_lattice";
    field.budget.aliasing = alias;

    const std::size_t total = ipow(static_cast<std::size_t>(side), d);
    std::vector<double> torus(total, 0.0);
    if (t == 0.0) {
        torus[0] = 1.0;
    } else {
        const int terms = series_terms(t);
        field.budget.truncation = boost::math::gamma_p(double(terms + 1), t);
        const auto ahat = torus_char_fn(kernel, side);
        std::vector<double> phat(ahat.size());
        compute::omp::series_horner(ahat, t, terms, phat);
        std::vector<std::complex<double>> buf(phat.begin(), phat.end());
        detail::dft(buf, d, side, +1);
        const double norm = 1.0 / double(total);
        for (std::size_t i = 0; i < total; ++i) torus[i] = buf[i].real() * norm;
    }

    // Map j in [-M, M]^d onto the torus; average j and -j for exact symmetry.
    field.values.resize(field.grid.size());
    std::vector<long> j(d);
    auto torus_index = [&](int sign) {
        std::size_t flat = 0;
        for (int i = 0; i < d; ++i) {
            long r = (sign * j[i]) % side;
            if (r < 0) r += side;
            flat = flat * static_cast<std::size_t>(side) + static_cast<std::size_t>(r);
        }
        return flat;
    };
    double clipped = 0.0;
    for (std::size_t flat = 0; flat < field.values.size(); ++flat) {
        field.grid.unflatten(flat, j);
        double v = 0.5 * (torus[torus_index(+1)] + torus[torus_index(-1)]);
        if (v < 0.0) {
            clipped += -v * field.grid.trapezoid_weight(flat);
            v = 0.0;
        }
        field.values[flat] = v;
    }
    field.budget.clipped = clipped;
    return field;
}

double symbol_cutoff_radius(const JumpKernel& kernel, double t, double eps) {
    if (kernel.support() == Support::Lattice) return std::numbers::pi;
    auto f = [&](double k) {
        const double a = radial_char_fn(kernel, k);
        return std::abs(std::exp(-t) * std::expm1(t * a));
    };
    double hi = 1.0;
    while ((f(hi) >= eps || f(1.5 * hi) >= eps) && hi < 1e8) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= eps ? lo : hi) = mid;
    }
    return hi;
}

Grid plan_continuum_grid(const JumpKernel& kernel, double t, double radius, double max_spacing, double eps) {
    if (!(t > 0.0)) throw DomainError("time must be > 0");
    const double k_max = symbol_cutoff_radius(kernel, t, eps);
    double h = std::min(max_spacing, std::numbers::pi / k_max);
    // For t < 1 the regular part is close to t a(x), smooth on the kernel scale.
    h = std::min(h, std::sqrt(kernel.sigma2() * std::max(t, 1.0)) / 8.0);
    const long m = std::max(8L, static_cast<long>(std::ceil(radius / h)));
    return make_grid(kernel.dimension(), h, m);
}

namespace {

struct OrthantSolve {
    std::vector<double> values;  // (M + 1)^d, nonnegative orthant
    double edge_symbol = 0.0;
    double period = 0.0;
};

OrthantSolve continuum_orthant(const JumpKernel& kernel, double t, const Grid& grid, long oversample, int padding) {
    const int d = grid.dimension;
    const long m_out = grid.half_points;
    const double h_int = grid.spacing / double(oversample);
    const long m_int = next_pow2(long(padding) * m_out * oversample);
    const double dk = std::numbers::pi / (double(m_int) * h_int);
    const double decay = std::exp(-t);
    compute::RadialSymbol symbol = [&](double k) {
        if (t < 1.0) return decay * std::expm1(t * radial_char_fn(kernel, k));
        return std::exp(-t * radial_one_minus_char_fn(kernel, k)) - decay;
    };
    std::vector<double> spectrum;
    compute::omp::fill_radial_symbol(symbol, d, m_int + 1, dk, spectrum);
    OrthantSolve out;
    out.edge_symbol = std::abs(symbol(dk * double(m_int)));
    out.period = 2.0 * double(m_int) * h_int;
    detail::dct1(spectrum, d, m_int + 1);
    const double norm = std::pow(2.0 * double(m_int) * h_int, -d);

    // Subsample every `oversample`-th point of the internal orthant.
    const std::size_t n_out = static_cast<std::size_t>(m_out + 1);
    const std::size_t n_int = static_cast<std::size_t>(m_int + 1);
    out.values.resize(ipow(n_out, d));
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        std::size_t rem = flat, src = 0, stride = 1;
        for (int i = 0; i < d; ++i) {
            const std::size_t j = rem % n_out;
            rem /= n_out;
            src += j * static_cast<std::size_t>(oversample) * stride;
            stride *= n_int;
        }
        out.values[flat] = spectrum[src] * norm;
    }
    return out;
}

}  // namespace

DensityField solve_fourier_continuum(const JumpKernel& kernel, double t, const Grid& grid,
                                     const ContinuumSolveOptions& options) {
    if (kernel.support() != Support::Continuum || grid.support != Support::Continuum) {
        throw InvalidGrid("the Fourier solver needs a continuum kernel and grid");
    }
    if (!kernel.isotropic()) throw InvalidKernel("the Fourier solver needs an isotropic kernel");
    if (grid.dimension != kernel.dimension()) throw InvalidGrid("grid and kernel dimensions differ");
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and > 0");
    const int d = grid.dimension;

    const double k_max = symbol_cutoff_radius(kernel, t, options.symbol_cutoff);
    const long oversample = std::max(1L, static_cast<long>(std::ceil(grid.spacing * k_max / std::numbers::pi)));
    // Internal half-width: the nearest periodic image must sit beyond the
    // distance where both the Gaussian bulk and the power tail fall below
    // a tenth of the tolerance.
    const double w = grid.extent();
    const double target = 0.1 * options.tolerance;
    double gap = std::sqrt(2.0 * kernel.sigma2() * t * std::log(std::pow(2.0, d) / target));
    if (kernel.has_power_tail()) {
        gap = std::max(gap, std::pow(std::pow(2.0, d) * t * kernel.c0() / target, 1.0 / (d + kernel.alpha())));
    }
    const long needed = static_cast<long>(std::ceil(0.5 * (w + gap) / w));
    const int padding = static_cast<int>(std::clamp<long>(needed, std::max(options.padding, 2), 1L << 20));

    OrthantSolve solve = continuum_orthant(kernel, t, grid, oversample, padding);
    double quadrature = 0.0;
    if (options.certify) {
        OrthantSolve fine = continuum_orthant(kernel, t, grid, 2 * oversample, 2 * padding);
        for (std::size_t i = 0; i < fine.values.size(); ++i) {
            quadrature = std::max(quadrature, std::abs(fine.values[i] - solve.values[i]));
        }
        if (quadrature > options.tolerance) {
            throw QuadratureFailure("continuum inversion at t = " + std::to_string(t) +
                                        " changed under resolution doubling",
                                    quadrature);
        }
        solve = std::move(fine);
    }

    DensityField field;
    field.time = t;
    field.grid = grid;
    field.atom = std::exp(-t);
    field.kernel_id = kernel.id();
    field.method = "fourier_continuum";
    field.values.resize(grid.size());
    const std::size_t n_out = static_cast<std::size_t>(grid.half_points + 1);
    std::vector<long> j(d);
    double clipped = 0.0;
    for (std::size_t flat = 0; flat < field.values.size(); ++flat) {
        grid.unflatten(flat, j);
        std::size_t src = 0;
        for (int i = 0; i < d; ++i) src = src * n_out + static_cast<std::size_t>(std::labs(j[i]));
        double v = solve.values[src];
        if (v < 0.0) {
            clipped += -v * grid.trapezoid_weight(flat);
            v = 0.0;
        }
        field.values[flat] = v;
    }
    const double image_gap = solve.period - w;
    field.budget.quadrature = quadrature;
    field.budget.clipped = clipped * grid.cell_volume();
    field.budget.truncation = solve.edge_symbol;
    double alias = std::pow(2.0, d) * std::pow(2.0 * std::numbers::pi * kernel.sigma2() * t, -0.5 * d) *
                   std::exp(-image_gap * image_gap / (2.0 * kernel.sigma2() * t));
    if (kernel.has_power_tail()) alias += std::pow(2.0, d) * t * kernel.c0() / std::pow(image_gap, d + kernel.alpha());
    field.budget.aliasing = alias;
    field.budget.outside = t * kernel.radial_tail(w) + d * 2.0 * normal_tail(w / std::sqrt(kernel.sigma2() * t));
    return field;
}

EmpiricalField simulate_ctrw(const JumpKernel& kernel, double t, long n_paths, std::uint64_t seed, const Grid& cells) {
    if (n_paths < 1) throw DomainError("n_paths must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
    if (cells.dimension != kernel.dimension()) throw InvalidGrid("grid and kernel dimensions differ");
    const auto tally = compute::omp::ctrw(kernel, t, n_paths, seed, cells);
    EmpiricalField field;
    field.time = t;
    field.grid = cells;
    field.counts = tally.counts;
    field.samples = n_paths;
    field.outside = tally.outside;
    field.method = "ctrw";
    const double n = double(n_paths);
    field.mean.resize(cells.size());
    field.stderr_.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double p = double(tally.counts[i]) / n;
        field.mean[i] = p;
        field.stderr_[i] = std::sqrt(p * (1.0 - p) / n);
    }
    const double samples = n * kernel.dimension();
    field.displacement_mean = tally.sum / samples;
    field.displacement_var = tally.sum_sq / samples - field.displacement_mean * field.displacement_mean;
    return field;
}

std::vector<double> cell_probabilities(const JumpKernel& kernel, double t, const Grid& cells) {
    const int d = kernel.dimension();
    if (cells.dimension != d) throw InvalidGrid("grid and kernel dimensions differ");
    std::vector<double> out(cells.size(), 0.0);
    std::vector<long> j(d);

    if (kernel.support() == Support::Lattice) {
        long side = 2;
        while (side < 2 * cells.half_points + 2) side *= 2;
        while (lattice_aliasing_estimate(kernel, t, side) > 1e-10 && side < (1L << 24)) side *= 2;
        const auto field = solve_series_lattice(kernel, t, side, {std::numeric_limits<double>::infinity()});
        for (std::size_t flat = 0; flat < out.size(); ++flat) {
            cells.unflatten(flat, j);
            out[flat] = field.value(j);
        }
        return out;
    }

    if (t == 0.0) {
        std::vector<long> origin(d, 0);
        out[cells.flatten(origin)] = 1.0;
        return out;
    }
    const Grid fine = make_grid(d, cells.spacing / 4.0, 4 * cells.half_points + 2);
    const auto field = solve_fourier_continuum(kernel, t, fine);
    static constexpr double kSimpson[5] = {1.0, 4.0, 2.0, 4.0, 1.0};
    const double w1 = cells.spacing / 12.0;
    std::vector<long> q(d);
    const long corners = static_cast<long>(ipow(5, d));
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        cells.unflatten(flat, j);
        double s = 0.0;
        for (long c = 0; c < corners; ++c) {
            long rem = c;
            double w = 1.0;
            for (int i = 0; i < d; ++i) {
                const long o = rem % 5 - 2;
                rem /= 5;
                q[i] = 4 * j[i] + o;
                w *= w1 * kSimpson[o + 2];
            }
            s += w * field.value(q);
        }
        out[flat] = s;
    }
    std::vector<long> origin(d, 0);
    out[cells.flatten(origin)] += field.atom;
    return out;
}

}  // namespace tailwalk
