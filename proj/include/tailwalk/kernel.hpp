#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailwalk/rng.hpp"

namespace tailwalk {

enum class Support { Continuum, Lattice };

enum class Family {
    Cauchy2_1D,    ///< a(x) = 2 / (pi (1 + x^2)^2) on R
    GenCauchy,     ///< multivariate Student-t shape, rescaled to unit covariance
    LatticeZipf,   ///< a(z) = C / (1 + |z|)^(d + alpha) on Z^d \ {0}
    LatticeTable,  ///< finite explicit jump table on Z^d (diagnostics)
    Gaussian,      ///< standard normal jumps; light tail (diagnostics)
};

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// A lattice point with its jump probability.
struct LatticeJump {
    std::vector<long> site;
    double weight;

    bool operator==(const LatticeJump&) const = default;
};

struct KernelSpec {
    Family family = Family::Cauchy2_1D;
    int dimension = 1;
    double alpha = 3.0;
    /// LatticeTable only.
    std::vector<LatticeJump> table;

    bool operator==(const KernelSpec&) const = default;
};

/// Measured |z|^(d+alpha) a(z) at the largest tabulated radius along one
/// lattice direction.
struct DirectionalTail {
    std::vector<double> direction;
    double radius;
    double value;
};

/// Symmetric jump density with power-law tail metadata. The jump rate is 1;
/// a walk with rate chi is the same walk run on the clock chi * t.
///
/// Immutable after construction and cheap to copy (shared state). Safe for
/// concurrent use; sampling takes a caller-owned generator.
class JumpKernel {
public:
    Family family() const;
    Support support() const;
    int dimension() const;
    bool isotropic() const;
    bool has_power_tail() const;

    /// Tail exponent alpha; +inf for light-tailed kernels.
    double alpha() const;
    /// Isotropic tail coefficient c0; 0 when there is no power tail.
    double c0() const;
    /// c0 along `direction` (unit vector). Builtins are isotropic.
    double c0(std::span<const double> direction) const;
    /// Per-coordinate variance.
    double sigma2() const;
    /// Spatial scale s of the GenCauchy family (1 otherwise).
    double scale() const;
    std::string id() const;

    /// a(z). Lattice kernels round z to the nearest site.
    double density(std::span<const double> z) const;
    /// a at |z| = r (isotropic kernels only).
    double radial_density(double r) const;
    /// max_z a(z).
    double sup_density() const;
    /// P(|Z| > r).
    double radial_tail(double r) const;

    /// Closed form of the characteristic function at |k|, when known.
    std::optional<double> closed_char_fn(double knorm) const;
    /// Same, as 1 - a_hat(|k|) evaluated without cancellation where possible.
    std::optional<double> closed_one_minus_char_fn(double knorm) const;

    /// Explicit jump table of a lattice kernel (sites with 0 < |z| <= table
    /// radius) and the probability mass not covered by it.
    const std::vector<LatticeJump>& lattice_jumps() const;
    double lattice_residual_mass() const;
    /// Radius rho such that the residual mass placed on the sphere |z| = rho
    /// carries the residual's second moment.
    double lattice_residual_radius() const;
    /// Per-direction table of the lattice tail coefficient (axes, diagonals).
    std::vector<DirectionalTail> direction_table() const;

    /// Draw one jump into `out` (size d).
    void sample(Rng& rng, std::span<double> out) const;

    struct Impl;
    explicit JumpKernel(std::shared_ptr<const Impl> impl);
    const Impl& impl() const { return *impl_; }

private:
    std::shared_ptr<const Impl> impl_;
};

/// Builds a kernel and checks its invariants.
///   alpha <= 2            -> TailTooHeavy
///   bad dimension/table   -> InvalidKernel
JumpKernel make_kernel(const KernelSpec& spec);

inline JumpKernel make_cauchy2_1d() { return make_kernel({Family::Cauchy2_1D, 1, 3.0, {}}); }
inline JumpKernel make_gen_cauchy(int d, double alpha) {
    return make_kernel({Family::GenCauchy, d, alpha, {}});
}
inline JumpKernel make_lattice_zipf(int d, double alpha) {
    return make_kernel({Family::LatticeZipf, d, alpha, {}});
}

/// Per-coordinate raw moment E[Z_1^order]: zero for odd orders, the absolute
/// moment for even orders.
///   order < 0      -> DomainError
///   order >= alpha -> MomentDiverges
double moment(const JumpKernel& kernel, int order);

/// sample_jump with a freshly allocated vector.
std::vector<double> sample_jump(const JumpKernel& kernel, Rng& rng);

/// Surface area of the unit sphere S^{d-1} (2 for d = 1).
double unit_sphere_area(int d);
/// E|u_1|^p for u uniform on S^{d-1}.
double sphere_coordinate_moment(int d, double p);

}  // namespace tailwalk
