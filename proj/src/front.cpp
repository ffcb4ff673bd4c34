#include "tailwalk/front.hpp"

#include <cmath>
#include <vector>

#include "tailwalk/errors.hpp"

namespace tailwalk {

namespace {

std::vector<double> unit_direction(std::span<const double> direction, int d) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    if (direction.empty()) {
        e[0] = 1.0;
        return e;
    }
    if (direction.size() != e.size()) throw DomainError("direction has the wrong dimension");
    double n = 0.0;
    for (double v : direction) n += v * v;
    n = std::sqrt(n);
    if (!(n > 0.0)) throw DomainError("direction must be nonzero");
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = direction[i] / n;
    return e;
}

}  // namespace

std::optional<double> front_radius(DensityProvider& provider, double delta, double t,
                                   std::span<const double> direction) {
    if (!(delta > 0.0)) throw DomainError("front needs delta = beta - mu > 0");
    if (!(t > 0.0)) throw DomainError("front needs t > 0");
    const auto e = unit_direction(direction, provider.dimension());
    const double growth = std::exp(delta * t);
    if (growth * provider.peak(t) < 1.0) return std::nullopt;

    std::vector<double> x(e.size());
    auto excess = [&](double r) {
        for (std::size_t i = 0; i < e.size(); ++i) x[i] = r * e[i];
        return growth * provider.density(t, x) - 1.0;
    };
    const double r0 = std::sqrt(provider.sigma2() * t);
    constexpr double kMaxRadius = 1e15;

    // Expand until negative, then probe two further doublings so that a
    // later positive stretch moves the bracket outward.
    double hi = r0;
    for (;;) {
        while (excess(hi) >= 0.0) {
            hi *= 2.0;
            if (hi > kMaxRadius) throw DomainError("front radius exceeds the search range");
        }
        if (excess(2.0 * hi) >= 0.0) {
            hi *= 2.0;
            continue;
        }
        if (excess(4.0 * hi) >= 0.0) {
            hi *= 4.0;
            continue;
        }
        break;
    }
    double lo = 0.5 * hi;
    if (hi == r0) {
        // The front lies inside sqrt(sigma2 t): halve until positive.
        bool found = false;
        for (int i = 0; i < 60 && !found; ++i) {
            lo = hi * std::ldexp(1.0, -(i + 1));
            found = excess(lo) >= 0.0;
        }
        if (!found) {
            lo = 0.0;
            if (excess(0.0) < 0.0) return std::nullopt;
        }
    }
    while (hi - lo > 1e-8 * hi) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double theorem2_radius(const AsymptoticModel& model, double t, std::span<const double> direction) {
    if (!(t > 0.0)) throw DomainError("theorem2_radius needs t > 0");
    if (!(model.delta > 0.0)) throw DomainError("theorem2_radius needs delta > 0");
    const auto e = unit_direction(direction, model.dimension);
    const double n = model.dimension + model.alpha;
    return std::pow(t * model.c0(e), 1.0 / n) * std::exp(model.delta * t / n);
}

double eigenfront_radius(const AsymptoticModel& model, double lambda0, double t, std::span<const double> direction) {
    if (!(lambda0 > 0.0)) throw DomainError("eigenfront_radius needs lambda0 > 0");
    const auto e = unit_direction(direction, model.dimension);
    const double n = model.dimension + model.alpha;
    return std::pow(model.c0(e) / (lambda0 * lambda0), 1.0 / n) * std::exp(lambda0 * t / n);
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2 || x.size() != y.size()) throw InsufficientData("a line fit needs two or more points");
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientData("a line fit needs distinct abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

FrontCurve front_curve(DensityProvider& provider, const AsymptoticModel& model, std::span<const double> times,
                       std::span<const double> direction) {
    FrontCurve curve;
    curve.direction = unit_direction(direction, model.dimension);
    std::vector<double> ts, logs;
    for (double t : times) {
        const auto r = front_radius(provider, model.delta, t, curve.direction);
        if (!r) continue;
        curve.points.push_back({t, *r, theorem2_radius(model, t, curve.direction)});
        ts.push_back(t);
        logs.push_back(std::log(*r));
    }
    if (ts.size() < 2) throw InsufficientData("fewer than two nonempty fronts");
    std::tie(curve.fitted_slope, curve.fitted_intercept) = fit_line(ts, logs);
    return curve;
}

}  // namespace tailwalk
