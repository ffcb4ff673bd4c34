#pragma once

#include <functional>
#include <span>
#include <string>

#include "tailwalk/kernel.hpp"

namespace tailwalk {

/// Parameters of the large-time, large-distance description of p(t, x).
struct AsymptoticModel {
    int dimension = 1;
    double alpha = 3.0;
    /// Tail coefficient along a unit direction.
    std::function<double(std::span<const double> direction)> c0;
    double sigma2 = 1.0;
    /// Rate gap beta - mu (1/time), used by the front formulas.
    double delta = 0.0;
    /// Tail-zone threshold: |x|^2 >= A max(t, 1).
    double threshold = 50.0;

    /// DomainError unless alpha > 2, sigma2 > 0, threshold > 0 and c0 is set.
    void validate() const;
    /// c0 along the direction of x (x != 0).
    double c0_at(std::span<const double> x) const;
};

AsymptoticModel make_model(const JumpKernel& kernel, double delta = 0.0, double threshold = 50.0);
AsymptoticModel make_isotropic_model(int dimension, double alpha, double c0, double sigma2, double delta = 0.0,
                                     double threshold = 50.0);

/// (2 pi sigma2 t)^{-d/2} exp(-|x|^2 / (2 sigma2 t)).
///   t <= 0 -> DomainError
double gaussian_term(const AsymptoticModel& model, double t, std::span<const double> x);
double gaussian_term(const AsymptoticModel& model, double t, double x1);

struct Theorem1Value {
    double value = 0.0;
    double tail = 0.0;
    double gaussian = 0.0;
    /// False when evaluated outside the tail zone with `force`.
    bool reliable = true;
};

/// t c0(x/|x|) / |x|^{d+alpha} + gaussian_term.
///   |x|^2 < A max(t, 1) and !force -> OutsideValidityZone
Theorem1Value theorem1_density(const AsymptoticModel& model, double t, std::span<const double> x, bool force = false);
Theorem1Value theorem1_density(const AsymptoticModel& model, double t, double x1, bool force = false);

enum class Regime { Central, Crossover, Tail };
std::string to_string(Regime regime);

/// Compares the tail term with the Gaussian term: Central below 0.1x, Tail
/// above 10x. The ratio is taken at max(|x|, sqrt((d+alpha) sigma2 t)),
/// where it is smallest; inside that radius the tail term is a singular
/// artefact of the leading-order formula.
///   t <= 0 -> DomainError
Regime classify_regime(const AsymptoticModel& model, double t, std::span<const double> x);
Regime classify_regime(const AsymptoticModel& model, double t, double x1);

/// Ratio of the tail term to the Gaussian term at radius r along `direction`.
double tail_to_gaussian_ratio(const AsymptoticModel& model, double t, double r, std::span<const double> direction);

/// Radius beyond sqrt((d+alpha) sigma2 t) where the tail term equals the
/// Gaussian term; that radius itself when the tail already dominates there.
/// An empty direction means the first axis.
///   t < 1 -> DomainError
double crossover_radius(const AsymptoticModel& model, double t, std::span<const double> direction = {});

}  // namespace tailwalk
