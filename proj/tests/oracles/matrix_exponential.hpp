#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

/// exp(A) by scaling and squaring of a 30-term Taylor series.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
    const Eigen::MatrixXd b = a / std::ldexp(1.0, squarings);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd sum = term;
    for (int n = 1; n <= 30; ++n) {
        term = term * b / double(n);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

/// Transition probabilities from 0 after time t of the rate-1 walk on the
/// 1-D torus Z/L with jump law `weight(z)`, z summed over |z| <= reach.
inline std::vector<double> torus_walk_1d(const std::function<double(long)>& weight, long reach, long side, double t) {
    std::vector<double> wrapped(static_cast<std::size_t>(side), 0.0);
    for (long z = -reach; z <= reach; ++z) {
        long r = z % side;
        if (r < 0) r += side;
        wrapped[static_cast<std::size_t>(r)] += weight(z);
    }
    Eigen::MatrixXd q(side, side);
    for (long i = 0; i < side; ++i) {
        for (long j = 0; j < side; ++j) q(i, j) = wrapped[static_cast<std::size_t>(((j - i) % side + side) % side)];
        q(i, i) -= 1.0;
    }
    const Eigen::MatrixXd p = expm(t * q);
    std::vector<double> out(static_cast<std::size_t>(side));
    for (long j = 0; j < side; ++j) out[static_cast<std::size_t>(j)] = p(0, j);
    return out;
}

}  // namespace oracles
