#include "tailwalk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tailwalk/errors.hpp"

namespace tailwalk {

std::size_t Grid::size() const {
    std::size_t n = 1;
    for (int i = 0; i < dimension; ++i) n *= static_cast<std::size_t>(axis_points());
    return n;
}

double Grid::cell_volume() const { return std::pow(spacing, dimension); }

void Grid::unflatten(std::size_t flat, std::span<long> j) const {
    const auto n = static_cast<std::size_t>(axis_points());
    for (int i = dimension - 1; i >= 0; --i) {
        j[i] = static_cast<long>(flat % n) - half_points;
        flat /= n;
    }
}

std::size_t Grid::flatten(std::span<const long> j) const {
    const auto n = static_cast<std::size_t>(axis_points());
    std::size_t flat = 0;
    for (int i = 0; i < dimension; ++i) flat = flat * n + static_cast<std::size_t>(j[i] + half_points);
    return flat;
}

std::size_t Grid::mirror(std::size_t flat) const { return size() - 1 - flat; }

std::optional<std::size_t> Grid::locate(std::span<const double> x) const {
    const auto n = static_cast<std::size_t>(axis_points());
    std::size_t flat = 0;
    for (int i = 0; i < dimension; ++i) {
        const double j = std::round(x[i] / spacing);
        if (!(std::abs(j) <= double(half_points))) return std::nullopt;
        flat = flat * n + static_cast<std::size_t>(static_cast<long>(j) + half_points);
    }
    return flat;
}

double Grid::trapezoid_weight(std::size_t flat) const {
    const auto n = static_cast<std::size_t>(axis_points());
    double w = 1.0;
    for (int i = 0; i < dimension; ++i) {
        const auto j = flat % n;
        flat /= n;
        if (half_points > 0 && (j == 0 || j == n - 1)) w *= 0.5;
    }
    return w;
}

Grid make_grid(int dimension, double spacing, long half_points, Support support) {
    if (dimension < 1) throw InvalidGrid("grid dimension must be >= 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidGrid("grid spacing must be positive");
    if (half_points < 0) throw InvalidGrid("grid half-width must be >= 0");
    if (support == Support::Lattice && spacing != 1.0) throw InvalidGrid("lattice grids have unit spacing");
    return Grid{dimension, half_points, spacing, support};
}

double DensityField::mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += grid.trapezoid_weight(i) * values[i];
    return atom + s * grid.cell_volume();
}

double DensityField::max_mirror_gap() const {
    double g = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) g = std::max(g, std::abs(values[i] - values[grid.mirror(i)]));
    return g;
}

double DensityField::max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double DensityField::interpolate(std::span<const double> x) const {
    const int d = grid.dimension;
    const long M = grid.half_points;
    std::vector<double> u(d);
    for (int i = 0; i < d; ++i) {
        u[i] = x[i] / grid.spacing;
        if (!(std::abs(u[i]) <= double(M))) return 0.0;
    }
    if (d == 1) {
        // Catmull-Rom on the four surrounding points (clamped at the edge).
        const long j = std::clamp(static_cast<long>(std::floor(u[0])), -M, std::max(-M, M - 1));
        const double s = u[0] - double(j);
        auto at = [&](long q) { return values[static_cast<std::size_t>(std::clamp(q, -M, M) + M)]; };
        const double p0 = at(j - 1), p1 = at(j), p2 = at(j + 1), p3 = at(j + 2);
        const double v = p1 + 0.5 * s * (p2 - p0 + s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + s * (3.0 * (p1 - p2) + p3 - p0)));
        return std::max(v, 0.0);
    }
    std::vector<long> base(d), idx(d);
    std::vector<double> frac(d);
    for (int i = 0; i < d; ++i) {
        base[i] = std::clamp(static_cast<long>(std::floor(u[i])), -M, std::max(-M, M - 1));
        frac[i] = u[i] - double(base[i]);
    }
    double v = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            const bool up = (corner >> i) & 1;
            idx[i] = std::min(base[i] + (up ? 1 : 0), M);
            w *= up ? frac[i] : 1.0 - frac[i];
        }
        v += w * values[grid.flatten(idx)];
    }
    return v;
}

double EmpiricalField::total_mean() const { return std::accumulate(mean.begin(), mean.end(), 0.0); }

}  // namespace tailwalk
