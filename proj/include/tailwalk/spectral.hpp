#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailwalk/kernel.hpp"

namespace tailwalk {

enum class CharFnMode { Auto, Closed, Quadrature };

/// Characteristic function of a symmetric kernel. Lattice kernels reduce k
/// onto the torus [-pi, pi]^d first.
///   Auto        closed form when available, else quadrature / Fourier series
///   Closed      closed form, InvalidKernel if there is none
///   Quadrature  cosine-transform quadrature of the density (continuum)
///   non-convergent quadrature -> QuadratureFailure
double char_fn(const JumpKernel& kernel, std::span<const double> k, CharFnMode mode = CharFnMode::Auto,
               double tol = 1e-8);
double char_fn(const JumpKernel& kernel, double k1, CharFnMode mode = CharFnMode::Auto, double tol = 1e-8);

/// 1 - a_hat(k), computed without the cancellation of 1 - char_fn near 0.
double one_minus_char_fn(const JumpKernel& kernel, std::span<const double> k);

/// |k|-only form for isotropic continuum kernels.
double radial_char_fn(const JumpKernel& kernel, double knorm, CharFnMode mode = CharFnMode::Auto,
                      double tol = 1e-8);
double radial_one_minus_char_fn(const JumpKernel& kernel, double knorm);

/// Wrapped kernel a_L(j) = sum_m a(j + L m) on the torus (Z / L)^d, row-major
/// over j in [0, L)^d. Table mass beyond the jump table is spread uniformly,
/// so the result sums to 1.
std::vector<double> wrapped_lattice_kernel(const JumpKernel& kernel, long side);

/// a_hat on the discrete torus frequencies 2 pi j / L, row-major over
/// j in [0, L)^d. Real by symmetry; symmetrized exactly.
std::vector<double> torus_char_fn(const JumpKernel& kernel, long side);

struct SpectralGridSpec {
    /// Continuum scan radius in |k|.
    double k_max = 20.0;
    /// Continuum radial scan points.
    int radial_points = 4001;
    /// Lattice torus side for the frequency scan (0 picks a default).
    long torus_side = 0;
};

struct AssumptionCheck {
    std::string name;
    /// "pass", "fail" or "assumed".
    std::string status;
    double worst = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct AssumptionReport {
    std::string kernel_id;
    std::vector<AssumptionCheck> checks;

    bool all_pass() const;
    /// First failing check, or nullptr.
    const AssumptionCheck* first_failure() const;
    nlohmann::ordered_json to_json() const;
};

/// Runs every check and returns the report without throwing.
AssumptionReport check_assumptions(const JumpKernel& kernel, const SpectralGridSpec& grid = {});

/// Same, raising AssumptionViolated on the first failed check.
AssumptionReport validate_assumptions(const JumpKernel& kernel, const SpectralGridSpec& grid = {});

/// sigma^2 recovered from (1 - a_hat(k)) / (k^2 / 2) by Richardson
/// extrapolation at k, 2k, 4k along the first axis.
double richardson_sigma2(const JumpKernel& kernel, double k = 1e-3);

struct TailFit {
    double alpha_hat = 0.0;
    /// Fitted c0 per probed direction (the axis first).
    std::vector<double> c0_hat;
    /// RMS of the log residuals, worst direction.
    double residual = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    int points = 0;
};

/// Least squares of log a(r e) on log r (with a 1/r correction regressor)
/// over [r1, r2] along the first axis, plus the diagonal for d >= 2 lattices.
///   r1 <= 0 or r2 < 4 r1                     -> DomainError
///   non-positive values, residual > 0.05,
///   or alpha_hat <= 2                         -> NoPowerTail
TailFit extract_tail_coefficients(const JumpKernel& kernel, double r1, double r2, int points = 32);

}  // namespace tailwalk
