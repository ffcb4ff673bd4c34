#pragma once

#include <array>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

namespace tailwalk {

/// Gauss-Legendre rule with N nodes on [-1, 1], expanded from Boost's
/// half-rule tables.
template <std::size_t N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre() {
        using Rule = boost::math::quadrature::gauss<double, N>;
        const auto& x = Rule::abscissa();
        const auto& w = Rule::weights();
        std::size_t k = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                nodes[k] = 0.0;
                weights[k++] = w[i];
            } else {
                nodes[k] = -x[i];
                weights[k++] = w[i];
                nodes[k] = x[i];
                weights[k++] = w[i];
            }
        }
    }

    /// Integral of f over [a, b].
    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += weights[i] * f(c + h * nodes[i]);
        return s * h;
    }
};

}  // namespace tailwalk
