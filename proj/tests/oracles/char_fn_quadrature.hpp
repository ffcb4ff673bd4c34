#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracles {

/// 2 * int_0^inf f(x) cos(k x) dx for an even, eventually monotone f, by
/// Gauss-Kronrod over half-periods. Slow and independent of the library.
template <class F>
double cosine_transform_1d(F f, double k, double eps = 1e-17) {
    const double half = std::numbers::pi / k;
    double sum = 0.0, x = 0.0;
    int quiet = 0;
    for (int i = 0; i < 2000000 && quiet < 4; ++i) {
        const double piece = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double s) { return f(s) * std::cos(k * s); }, x, x + half, 8, 1e-14);
        sum += piece;
        x += half;
        quiet = std::abs(piece) < eps ? quiet + 1 : 0;
    }
    return 2.0 * sum;
}

}  // namespace oracles
