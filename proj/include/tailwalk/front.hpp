#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tailwalk/asymptotics.hpp"
#include "tailwalk/provider.hpp"

namespace tailwalk {

/// Outermost r with exp(delta t) p(t, r e) = 1 along the unit direction e
/// (empty: first axis). The root is bracketed by doubling from
/// sqrt(sigma2 t) and bisected to relative tolerance 1e-8. Empty when
/// exp(delta t) sup p(t, .) < 1.
///   delta <= 0 or t <= 0 -> DomainError
std::optional<double> front_radius(DensityProvider& provider, double delta, double t,
                                   std::span<const double> direction = {});

/// (t c0(e))^{1/(d+alpha)} exp(delta t / (d+alpha)).
///   t <= 0 or model.delta <= 0 -> DomainError
double theorem2_radius(const AsymptoticModel& model, double t, std::span<const double> direction = {});

/// (c0(e) / lambda0^2)^{1/(d+alpha)} exp(lambda0 t / (d+alpha)).
///   lambda0 <= 0 -> DomainError
double eigenfront_radius(const AsymptoticModel& model, double lambda0, double t,
                         std::span<const double> direction = {});

struct FrontPoint {
    double t = 0.0;
    double r_numeric = 0.0;
    double r_theorem2 = 0.0;
};

struct FrontCurve {
    std::vector<double> direction;
    std::vector<FrontPoint> points;
    /// Least-squares slope and intercept of log r_numeric against t.
    double fitted_slope = 0.0;
    double fitted_intercept = 0.0;
};

/// Slope and intercept of the least-squares line through (x, y).
///   fewer than two points -> InsufficientData
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

/// Numeric and formula fronts over sorted times, with delta = model.delta.
/// Times with an empty front are skipped.
///   fewer than two nonempty fronts -> InsufficientData
FrontCurve front_curve(DensityProvider& provider, const AsymptoticModel& model, std::span<const double> times,
                       std::span<const double> direction = {});

}  // namespace tailwalk
