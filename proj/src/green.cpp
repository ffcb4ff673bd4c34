#include "tailwalk/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "tailwalk/errors.hpp"
#include "tailwalk/quadrature.hpp"

namespace tailwalk {

namespace {

const GaussLegendre<15>& rule() {
    static const GaussLegendre<15> r;
    return r;
}

std::vector<std::pair<double, double>> time_panels(double lambda, double a, double b, long max_panels) {
    std::vector<std::pair<double, double>> out;
    double t = a;
    if (t == 0.0 && b > 0.0) {
        out.emplace_back(0.0, std::min(b, 1e-3));
        t = out.back().second;
    }
    while (t < b) {
        const double next = t < 1.0 ? std::min(4.0 * t, 1.0) : t + std::min(std::max(1.0, 0.5 * t), 4.0 / lambda);
        out.emplace_back(t, std::min(next, b));
        t = out.back().second;
        if (long(out.size()) > max_panels) {
            throw IntegrationBudgetExceeded("Laplace quadrature needs more than " + std::to_string(max_panels) +
                                            " panels");
        }
    }
    return out;
}

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double horizon(const AsymptoticModel& model, double lambda, const GreenOptions& opt) {
    const int d = model.dimension;
    auto excess = [&](double T) {
        return std::exp(-lambda * T) * (1.0 + opt.margin) * std::pow(2.0 * std::numbers::pi * model.sigma2 * T, -0.5 * d) /
                   lambda -
               opt.tol;
    };
    double hi = std::max(1.0, 2.0 * opt.t_min);
    while (excess(hi) > 0.0) hi *= 2.0;
    double lo = hi / 2.0;
    if (excess(lo) <= 0.0) return lo;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

double laplace_integral(const std::function<double(double)>& f, double lambda, double a, double b, long max_panels) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
    if (!(b >= a) || !(a >= 0.0)) throw DomainError("need 0 <= a <= b");
    double s = 0.0;
    for (const auto& [lo, hi] : time_panels(lambda, a, b, max_panels)) {
        s += rule().integrate([&](double t) { return std::exp(-lambda * t) * f(t); }, lo, hi);
    }
    return s;
}

double theorem3_green(const AsymptoticModel& model, double lambda, std::span<const double> x) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
    const double r = norm(x);
    if (!(r > 0.0)) throw DomainError("the Green asymptotic needs x != 0");
    return model.c0_at(x) / (lambda * lambda * std::pow(r, model.dimension + model.alpha));
}

double theorem3_green(const AsymptoticModel& model, double lambda, double x1) {
    return theorem3_green(model, lambda, std::span<const double>(&x1, 1));
}

bool theorem3_reliable(double lambda, std::span<const double> x) {
    const double r = norm(x);
    return lambda * r * r >= 100.0;
}

GreenSamples green_function(DensityProvider& provider, const AsymptoticModel& model, double lambda,
                            std::span<const double> xs, const GreenOptions& options) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
    if (!(options.t_min > 0.0) || !(options.tol > 0.0)) throw DomainError("t_min and tol must be positive");
    const auto d = static_cast<std::size_t>(provider.dimension());
    if (xs.size() % d != 0) throw DomainError("point list length is not a multiple of the dimension");
    const std::size_t n = xs.size() / d;

    GreenSamples out;
    out.lambda = lambda;
    out.horizon = horizon(model, lambda, options);
    const auto panels = time_panels(lambda, options.t_min, out.horizon, options.max_panels);

    std::vector<double> split(n), acc(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = norm(xs.subspan(i * d, d));
        split[i] = std::max(10.0 / lambda, 4.0 * r * r / model.sigma2);
    }

    std::vector<double> buf, vals;
    std::vector<std::size_t> which;
    const auto& gl = rule();
    for (const auto& [a, b] : panels) {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double t = c + h * gl.nodes[q];
            const double w = h * gl.weights[q] * std::exp(-lambda * t);
            buf.clear();
            which.clear();
            for (std::size_t i = 0; i < n; ++i) {
                const auto x = xs.subspan(i * d, d);
                if (t <= split[i]) {
                    buf.insert(buf.end(), x.begin(), x.end());
                    which.push_back(i);
                } else {
                    acc[i] += w * gaussian_term(model, t, x);
                }
            }
            if (!which.empty()) {
                vals.resize(which.size());
                provider.densities(t, buf, vals);
                for (std::size_t k = 0; k < which.size(); ++k) acc[which[k]] += w * vals[k];
            }
            ++out.time_nodes;
        }
    }

    std::vector<double> start(n);
    provider.densities(options.t_min, xs, start);
    const double tail_bound = std::exp(-lambda * out.horizon) * (1.0 + options.margin) *
                              std::pow(2.0 * std::numbers::pi * model.sigma2 * out.horizon, -0.5 * double(d)) / lambda;

    out.entries.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& e = out.entries[i];
        const auto x = xs.subspan(i * d, d);
        e.x.assign(x.begin(), x.end());
        const double r = norm(x);
        // Apart from a no-jump atom at the origin, p is close to t a(x) on [0, t_min].
        const double held = r == 0.0 ? provider.included_atom(options.t_min) : 0.0;
        const double regular = start[i] - held;
        e.numeric = acc[i] + 0.5 * options.t_min * regular;
        if (held > 0.0) e.numeric += -std::expm1(-(1.0 + lambda) * options.t_min) / (1.0 + lambda);
        e.truncation_bound = tail_bound + options.t_min * regular;
        if (r == 0.0) {
            // Continuum providers keep the atom e^{-t} apart; its transform is 1/(1 + lambda).
            e.atom = provider.atom(1.0) > 0.0 ? 1.0 / (1.0 + lambda) : 0.0;
        } else {
            e.theorem3 = theorem3_green(model, lambda, x);
            e.theorem3_reliable = theorem3_reliable(lambda, x);
            const double c0 = model.c0_at(x);
            e.normalized_error = std::abs(lambda * lambda * std::pow(r, model.dimension + model.alpha) * e.numeric - c0) / c0;
        }
        out.truncation_bound = std::max(out.truncation_bound, e.truncation_bound);
    }
    return out;
}

double green_function(DensityProvider& provider, const AsymptoticModel& model, double lambda, double x1,
                      const GreenOptions& options) {
    const auto s = green_function(provider, model, lambda, std::span<const double>(&x1, 1), options);
    return s.entries[0].numeric;
}

DensityField green_field(DensityProvider& provider, const AsymptoticModel& model, double lambda, const Grid& grid,
                         const GreenOptions& options) {
    const auto d = static_cast<std::size_t>(grid.dimension);
    std::vector<double> xs(grid.size() * d);
    std::vector<long> j(d);
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        grid.unflatten(flat, j);
        for (std::size_t c = 0; c < d; ++c) xs[flat * d + c] = grid.coordinate(j[c]);
    }
    const auto s = green_function(provider, model, lambda, xs, options);
    DensityField f;
    f.time = 0.0;
    f.grid = grid;
    f.method = "green";
    f.kernel_id = provider.name();
    f.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f.values[i] = s.entries[i].numeric;
        f.atom += s.entries[i].atom;
    }
    f.budget.truncation = s.truncation_bound;
    return f;
}

}  // namespace tailwalk
