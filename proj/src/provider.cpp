#include "tailwalk/provider.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tailwalk/errors.hpp"

namespace tailwalk {

void DensityProvider::densities(double t, std::span<const double> xs, std::span<double> out) {
    const auto d = static_cast<std::size_t>(dimension());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = density(t, xs.subspan(i * d, d));
}

SolverProvider::SolverProvider(JumpKernel kernel, SolverProviderOptions options)
    : kernel_(std::move(kernel)), options_(options) {
    if (!(options_.tolerance > 0.0)) throw DomainError("provider tolerance must be positive");
    options_.cache_size = std::max<std::size_t>(options_.cache_size, 1);
}

std::string SolverProvider::name() const {
    return kernel_.support() == Support::Lattice ? "series_lattice" : "fourier_continuum";
}

double SolverProvider::tolerance_at(double t) const { return options_.tolerance * std::exp(-options_.growth * t); }

double SolverProvider::atom(double t) const {
    return kernel_.support() == Support::Continuum ? std::exp(-t) : 0.0;
}

double SolverProvider::included_atom(double t) const {
    return kernel_.support() == Support::Lattice ? std::exp(-t) : 0.0;
}

const DensityField& SolverProvider::field(double t, double radius) {
    const double want = std::max({radius, options_.min_radius, 8.0 * std::sqrt(kernel_.sigma2() * t), 1.0});
    for (auto it = cache_.begin(); it != cache_.end(); ++it) {
        if (it->first != t) continue;
        if (it->second.grid.extent() >= want) {
            cache_.splice(cache_.begin(), cache_, it);
            return cache_.front().second;
        }
        cache_.erase(it);
        break;
    }
    const double tol = tolerance_at(t);
    DensityField f;
    if (kernel_.support() == Support::Lattice) {
        long side = 2;
        while (double(side) < 4.0 * want + 2.0) side *= 2;
        while (lattice_aliasing_estimate(kernel_, t, side) > tol && side < (1L << 26)) side *= 2;
        f = solve_series_lattice(kernel_, t, side, {tol});
    } else {
        ContinuumSolveOptions opts;
        opts.tolerance = tol;
        opts.symbol_cutoff = std::min(opts.symbol_cutoff, 1e-2 * tol);
        f = solve_fourier_continuum(kernel_, t,
                                    plan_continuum_grid(kernel_, t, 2.0 * want, options_.max_spacing, opts.symbol_cutoff),
                                    opts);
    }
    cache_.emplace_front(t, std::move(f));
    while (cache_.size() > options_.cache_size) cache_.pop_back();
    return cache_.front().second;
}

double SolverProvider::density(double t, std::span<const double> x) {
    double out = 0.0;
    densities(t, x, std::span<double>(&out, 1));
    return out;
}

void SolverProvider::densities(double t, std::span<const double> xs, std::span<double> out) {
    if (!(t >= 0.0)) throw DomainError("time must be >= 0");
    const auto d = static_cast<std::size_t>(dimension());
    if (t == 0.0 && kernel_.support() == Support::Continuum) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    double reach = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t c = 0; c < d; ++c) reach = std::max(reach, std::abs(xs[i * d + c]));
    }
    const DensityField& f = field(t, reach);
    std::vector<long> j(d);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto x = xs.subspan(i * d, d);
        if (kernel_.support() == Support::Lattice) {
            for (std::size_t c = 0; c < d; ++c) j[c] = std::lround(x[c]);
            out[i] = f.value(j);
        } else {
            out[i] = f.interpolate(x);
        }
    }
}

double SolverProvider::peak(double t) {
    if (t == 0.0) return kernel_.support() == Support::Lattice ? 1.0 : 0.0;
    return field(t, 0.0).max_value();
}

double Theorem1Provider::density(double t, std::span<const double> x) {
    return theorem1_density(model_, t, x, true).value;
}

double Theorem1Provider::peak(double) { return std::numeric_limits<double>::infinity(); }

void EmpiricalProvider::add(EmpiricalField field) {
    if (!fields_.empty() && field.grid.dimension != fields_.begin()->second.grid.dimension) {
        throw InvalidGrid("empirical fields must share a dimension");
    }
    const double t = field.time;
    fields_.insert_or_assign(t, std::move(field));
}

int EmpiricalProvider::dimension() const { return fields_.empty() ? 1 : fields_.begin()->second.grid.dimension; }

const EmpiricalField& EmpiricalProvider::at(double t) const {
    const auto it = fields_.find(t);
    if (it == fields_.end()) throw DomainError("no empirical field at t = " + std::to_string(t));
    return it->second;
}

double EmpiricalProvider::density(double t, std::span<const double> x) {
    const auto& f = at(t);
    const auto cell = f.grid.locate(x);
    if (!cell) return 0.0;
    return f.mean[*cell] / f.grid.cell_volume() * std::exp(-growth_ * t);
}

double EmpiricalProvider::peak(double t) {
    const auto& f = at(t);
    const double m = f.mean.empty() ? 0.0 : *std::max_element(f.mean.begin(), f.mean.end());
    return m / f.grid.cell_volume() * std::exp(-growth_ * t);
}

}  // namespace tailwalk
