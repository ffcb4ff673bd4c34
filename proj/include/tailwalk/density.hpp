#pragma once

#include <cstdint>

#include "tailwalk/grid.hpp"
#include "tailwalk/kernel.hpp"

namespace tailwalk {

struct LatticeSolveOptions {
    /// GridTooSmall when the aliasing estimate exceeds this. Use +inf to
    /// solve the walk on the torus itself.
    double alias_tolerance = 1e-8;
};

/// Series N = ceil(t + 12 sqrt(t) + 25).
int series_terms(double t);

/// p(t, .) of a lattice walk on the torus of side `side` (even), by the
/// truncated exponential series of the wrapped kernel in Fourier space.
/// The field covers the whole torus (half_points = side / 2).
///   t < 0, odd or non-positive side   -> DomainError / InvalidGrid
///   aliasing estimate > tolerance     -> GridTooSmallSuggest
DensityField solve_series_lattice(const JumpKernel& kernel, double t, long side, const LatticeSolveOptions& options = {});

/// Estimated mass that wraps around a torus of side `side` by time t.
double lattice_aliasing_estimate(const JumpKernel& kernel, double t, long side);

struct ContinuumSolveOptions {
    /// The symbol e^{-t}(e^{t a_hat} - 1) is treated as zero below this.
    double symbol_cutoff = 1e-18;
    /// Minimum internal torus half-width as a multiple of the output
    /// half-width; raised until periodic images alias below tolerance / 10.
    int padding = 2;
    /// Certify by a second solve with twice the k-range and half the k-step.
    bool certify = true;
    /// Maximum allowed change under that doubling.
    double tolerance = 1e-9;
};

/// Smallest K with e^{-t}(e^{t a_hat(k)} - 1) < eps for |k| >= K.
double symbol_cutoff_radius(const JumpKernel& kernel, double t, double eps = 1e-18);

/// Grid for the continuum solver at time t covering |x| <= radius, with
/// spacing at most `max_spacing` and fine enough to resolve the symbol.
Grid plan_continuum_grid(const JumpKernel& kernel, double t, double radius, double max_spacing = 0.25,
                         double eps = 1e-18);

/// Regular part v(t, .) of an isotropic continuum walk by a DCT-I of the
/// symbol on a padded torus; the atom e^{-t} is stored separately.
///   t <= 0                               -> DomainError
///   lattice kernel or lattice grid       -> InvalidGrid
///   resolution doubling disagrees        -> QuadratureFailure
DensityField solve_fourier_continuum(const JumpKernel& kernel, double t, const Grid& grid,
                                     const ContinuumSolveOptions& options = {});

/// Monte-Carlo CTRW: positions at time t of n_paths independent walks,
/// binned on the cells of `cells` (width h around each grid point).
///   n_paths < 1 -> DomainError
EmpiricalField simulate_ctrw(const JumpKernel& kernel, double t, long n_paths, std::uint64_t seed, const Grid& cells);

/// Exact cell probabilities P(X_t in cell) for the cells of `cells`:
/// continuum by 5-point tensor Simpson on a 4x finer solver grid plus the
/// atom in the origin cell; lattice by the lattice solver.
std::vector<double> cell_probabilities(const JumpKernel& kernel, double t, const Grid& cells);

}  // namespace tailwalk
