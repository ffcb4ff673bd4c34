#pragma once

#include <functional>
#include <span>
#include <vector>

#include "tailwalk/asymptotics.hpp"
#include "tailwalk/grid.hpp"
#include "tailwalk/provider.hpp"

namespace tailwalk {

struct GreenOptions {
    /// Bound on the neglected Laplace tail beyond the horizon T.
    double tol = 1e-12;
    /// Start of the time quadrature; on [0, t_min] p is taken as linear in t
    /// apart from the no-jump atom of lattice providers, integrated exactly.
    double t_min = 1e-3;
    /// Panels allowed before IntegrationBudgetExceeded.
    long max_panels = 20000;
    /// Safety factor on the bound p(t, x) <= (2 pi sigma2 t)^{-d/2}.
    double margin = 0.1;
};

struct GreenEntry {
    std::vector<double> x;
    /// Regular part of G_lambda(x).
    double numeric = 0.0;
    /// Weight 1/(1 + lambda) of the delta at the origin (x = 0 only).
    double atom = 0.0;
    double theorem3 = 0.0;
    /// |lambda^2 |x|^{d+alpha} G - c0| / c0 (0 at the origin).
    double normalized_error = 0.0;
    /// lambda |x|^2 >= 100.
    bool theorem3_reliable = false;
    /// Bound on the error from [0, t_min] and (T, inf).
    double truncation_bound = 0.0;
};

struct GreenSamples {
    double lambda = 0.0;
    std::vector<GreenEntry> entries;
    /// Largest per-entry truncation bound.
    double truncation_bound = 0.0;
    /// Quadrature horizon T.
    double horizon = 0.0;
    long time_nodes = 0;
};

/// int_a^b e^{-lambda t} f(t) dt on the panels used for Green functions:
/// panels growing fourfold up to t = 1, then widths max(1, t/2) capped at
/// 4/lambda, 15-point Gauss-Legendre on each.
///   more than max_panels panels -> IntegrationBudgetExceeded
double laplace_integral(const std::function<double(double)>& f, double lambda, double a, double b,
                        long max_panels = 20000);

/// Laplace transform of p(., x) at the points `xs` (flattened, d per point).
/// For each x the provider is used on [t_min, T1], T1 = max(10/lambda,
/// 4|x|^2/sigma2); beyond T1 only the Gaussian term is integrated. The
/// horizon T satisfies e^{-lambda T} (1 + margin) (2 pi sigma2 T)^{-d/2} /
/// lambda <= tol.
///   lambda <= 0 -> DomainError
///   too many panels -> IntegrationBudgetExceeded
GreenSamples green_function(DensityProvider& provider, const AsymptoticModel& model, double lambda,
                            std::span<const double> xs, const GreenOptions& options = {});
double green_function(DensityProvider& provider, const AsymptoticModel& model, double lambda, double x1,
                      const GreenOptions& options = {});

/// G on every point of `grid`, as a field whose mass() is int G dx.
DensityField green_field(DensityProvider& provider, const AsymptoticModel& model, double lambda, const Grid& grid,
                         const GreenOptions& options = {});

/// c0(x/|x|) / (lambda^2 |x|^{d+alpha}).
///   lambda <= 0 or x = 0 -> DomainError
double theorem3_green(const AsymptoticModel& model, double lambda, std::span<const double> x);
double theorem3_green(const AsymptoticModel& model, double lambda, double x1);
bool theorem3_reliable(double lambda, std::span<const double> x);

}  // namespace tailwalk
