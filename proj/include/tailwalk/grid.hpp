#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailwalk/kernel.hpp"

namespace tailwalk {

/// Origin-centred regular grid: points j h for j in [-M, M]^d, stored
/// row-major with the first axis slowest. Lattice grids have h = 1 and, when
/// they represent a full torus of side 2M, the two shells j = +-M coincide.
struct Grid {
    int dimension = 1;
    long half_points = 0;
    double spacing = 1.0;
    Support support = Support::Continuum;

    long axis_points() const { return 2 * half_points + 1; }
    std::size_t size() const;
    double coordinate(long j) const { return double(j) * spacing; }
    double extent() const { return double(half_points) * spacing; }
    double cell_volume() const;

    void unflatten(std::size_t flat, std::span<long> j) const;
    std::size_t flatten(std::span<const long> j) const;
    std::size_t mirror(std::size_t flat) const;
    /// Cell (width h, centred on a grid point) containing x, if any.
    std::optional<std::size_t> locate(std::span<const double> x) const;
    /// Trapezoid weight of a point: 1/2 per coordinate on the +-M shell.
    double trapezoid_weight(std::size_t flat) const;
};

Grid make_grid(int dimension, double spacing, long half_points, Support support = Support::Continuum);

struct ErrorBudget {
    double truncation = 0.0;
    double aliasing = 0.0;
    double quadrature = 0.0;
    double clipped = 0.0;
    /// Probability mass estimated to lie outside the grid window.
    double outside = 0.0;

    double total() const { return truncation + aliasing + quadrature + clipped + outside; }
};

/// p(t, .) on a grid. Continuum fields hold the regular part v and keep the
/// atom e^{-t} at the origin separately; lattice fields hold the full mass.
struct DensityField {
    double time = 0.0;
    Grid grid;
    std::vector<double> values;
    double atom = 0.0;
    ErrorBudget budget;
    std::string kernel_id;
    std::string method;

    /// atom + trapezoid sum of values times the cell volume.
    double mass() const;
    /// max |p(x) - p(-x)| over the grid.
    double max_mirror_gap() const;
    double value(std::span<const long> j) const { return values[grid.flatten(j)]; }
    double max_value() const;
    /// Regular part at an off-grid point: cubic (d = 1) or multilinear
    /// interpolation; 0 outside the window.
    double interpolate(std::span<const double> x) const;
};

/// Monte-Carlo estimate on a cell grid.
struct EmpiricalField {
    double time = 0.0;
    Grid grid;
    /// Per-cell estimate: fraction of paths (CTRW) or mean particle count per
    /// run (branching).
    std::vector<double> mean;
    std::vector<double> stderr_;
    /// Raw per-cell totals (paths, or particles summed over runs).
    std::vector<std::uint64_t> counts;
    /// Paths (CTRW) or non-truncated runs (branching).
    long samples = 0;
    /// Totals that fell outside the grid.
    std::uint64_t outside = 0;
    /// Per-coordinate mean and variance of the recorded positions.
    double displacement_mean = 0.0;
    double displacement_var = 0.0;
    std::string method;

    /// Sum of the per-cell means (fraction of paths inside the grid, or mean
    /// population inside the grid).
    double total_mean() const;
};

}  // namespace tailwalk
