#pragma once

#include <cmath>
#include <numbers>

#include "oracles/char_fn_quadrature.hpp"

namespace oracles {

/// Regular part of the Laplace transform of the Cauchy-squared walk,
/// (1/pi) int_0^inf [1/(lambda + 1 - a_hat) - 1/(1 + lambda)] cos(k x) dk
/// with a_hat(k) = (1 + k) e^{-k}.
inline double cauchy2_green(double lambda, double x) {
    auto f = [lambda](double k) {
        const double ahat = (1.0 + k) * std::exp(-k);
        return ahat / ((lambda + 1.0 - ahat) * (1.0 + lambda));
    };
    return cosine_transform_1d(f, x) / (2.0 * std::numbers::pi);
}

}  // namespace oracles
