#include "tailwalk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "tailwalk/errors.hpp"

namespace tailwalk {

namespace {

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

std::vector<double> axis(int d) {
    std::vector<double> e(static_cast<std::size_t>(d), 0.0);
    e[0] = 1.0;
    return e;
}

double log_ratio(const AsymptoticModel& m, double t, double r, double c0) {
    const double log_tail = std::log(t * c0) - (m.dimension + m.alpha) * std::log(r);
    const double log_gauss = -0.5 * m.dimension * std::log(2.0 * std::numbers::pi * m.sigma2 * t) -
                             r * r / (2.0 * m.sigma2 * t);
    return log_tail - log_gauss;
}

double ratio_minimum_radius(const AsymptoticModel& m, double t) {
    return std::sqrt((m.dimension + m.alpha) * m.sigma2 * t);
}

}  // namespace

void AsymptoticModel::validate() const {
    if (dimension < 1) throw DomainError("dimension must be >= 1");
    if (!(alpha > 2.0)) throw DomainError("alpha must exceed 2");
    if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be positive");
    if (!(threshold > 0.0)) throw DomainError("tail-zone threshold A must be positive");
    if (!c0) throw DomainError("tail coefficient c0 is not set");
}

double AsymptoticModel::c0_at(std::span<const double> x) const {
    const double r = norm(x);
    std::vector<double> e(x.begin(), x.end());
    for (double& v : e) v /= r;
    return c0(e);
}

AsymptoticModel make_model(const JumpKernel& kernel, double delta, double threshold) {
    if (!kernel.has_power_tail()) throw NoPowerTail(kernel.id() + " has no power tail");
    AsymptoticModel m;
    m.dimension = kernel.dimension();
    m.alpha = kernel.alpha();
    m.c0 = [kernel](std::span<const double> e) { return kernel.c0(e); };
    m.sigma2 = kernel.sigma2();
    m.delta = delta;
    m.threshold = threshold;
    m.validate();
    return m;
}

AsymptoticModel make_isotropic_model(int dimension, double alpha, double c0, double sigma2, double delta,
                                     double threshold) {
    if (!(c0 > 0.0)) throw DomainError("c0 must be positive");
    AsymptoticModel m;
    m.dimension = dimension;
    m.alpha = alpha;
    m.c0 = [c0](std::span<const double>) { return c0; };
    m.sigma2 = sigma2;
    m.delta = delta;
    m.threshold = threshold;
    m.validate();
    return m;
}

double gaussian_term(const AsymptoticModel& model, double t, std::span<const double> x) {
    if (!(t > 0.0)) throw DomainError("time must be > 0");
    const double r = norm(x);
    const double v = model.sigma2 * t;
    return std::pow(2.0 * std::numbers::pi * v, -0.5 * model.dimension) * std::exp(-r * r / (2.0 * v));
}

double gaussian_term(const AsymptoticModel& model, double t, double x1) {
    return gaussian_term(model, t, std::span<const double>(&x1, 1));
}

Theorem1Value theorem1_density(const AsymptoticModel& model, double t, std::span<const double> x, bool force) {
    const double r = norm(x);
    Theorem1Value out;
    out.gaussian = gaussian_term(model, t, x);
    const bool inside = r * r >= model.threshold * std::max(t, 1.0);
    if (!inside && !force) {
        throw OutsideValidityZone("|x|^2 = " + std::to_string(r * r) + " is below A max(t, 1) = " +
                                  std::to_string(model.threshold * std::max(t, 1.0)));
    }
    out.reliable = inside;
    out.tail = r > 0.0 ? t * model.c0_at(x) / std::pow(r, model.dimension + model.alpha)
                       : std::numeric_limits<double>::infinity();
    out.value = out.tail + out.gaussian;
    return out;
}

Theorem1Value theorem1_density(const AsymptoticModel& model, double t, double x1, bool force) {
    return theorem1_density(model, t, std::span<const double>(&x1, 1), force);
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::Central: return "central";
        case Regime::Crossover: return "crossover";
        case Regime::Tail: return "tail";
    }
    return "unknown";
}

double tail_to_gaussian_ratio(const AsymptoticModel& model, double t, double r, std::span<const double> direction) {
    if (!(t > 0.0)) throw DomainError("time must be > 0");
    const auto e = direction.empty() ? axis(model.dimension) : std::vector<double>(direction.begin(), direction.end());
    return std::exp(log_ratio(model, t, r, model.c0_at(e)));
}

Regime classify_regime(const AsymptoticModel& model, double t, std::span<const double> x) {
    if (!(t > 0.0)) throw DomainError("time must be > 0");
    const double r = norm(x);
    const auto e = r > 0.0 ? std::vector<double>(x.begin(), x.end()) : axis(model.dimension);
    const double lr = log_ratio(model, t, std::max(r, ratio_minimum_radius(model, t)), model.c0_at(e));
    if (lr < std::log(0.1)) return Regime::Central;
    if (lr > std::log(10.0)) return Regime::Tail;
    return Regime::Crossover;
}

Regime classify_regime(const AsymptoticModel& model, double t, double x1) {
    return classify_regime(model, t, std::span<const double>(&x1, 1));
}

double crossover_radius(const AsymptoticModel& model, double t, std::span<const double> direction) {
    if (!(t >= 1.0)) throw DomainError("crossover radius needs t >= 1");
    const auto e = direction.empty() ? axis(model.dimension) : std::vector<double>(direction.begin(), direction.end());
    const double c0 = model.c0_at(e);
    auto f = [&](double r) { return log_ratio(model, t, r, c0); };
    double lo = ratio_minimum_radius(model, t);
    if (f(lo) >= 0.0) return lo;
    double hi = 2.0 * lo;
    while (f(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (a + b);
}

}  // namespace tailwalk
