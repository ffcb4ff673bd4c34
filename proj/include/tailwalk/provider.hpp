#pragma once

#include <cstddef>
#include <list>
#include <map>
#include <memory>
#include <span>
#include <string>

#include "tailwalk/asymptotics.hpp"
#include "tailwalk/density.hpp"
#include "tailwalk/grid.hpp"
#include "tailwalk/kernel.hpp"

namespace tailwalk {

/// Source of p(t, x) for the front and Green computations. Values are the
/// regular part; a continuum atom e^{-t} at the origin is reported by atom().
/// Providers cache work and are not thread-safe.
class DensityProvider {
public:
    virtual ~DensityProvider() = default;
    virtual int dimension() const = 0;
    virtual double sigma2() const = 0;
    virtual std::string name() const = 0;
    virtual double density(double t, std::span<const double> x) = 0;
    /// p(t, .) at n points, `xs` flattened (d per point).
    virtual void densities(double t, std::span<const double> xs, std::span<double> out);
    /// sup_x of the regular part; +inf when unbounded.
    virtual double peak(double t) = 0;
    virtual double atom(double /*t*/) const { return 0.0; }
    /// No-jump mass e^{-t} already contained in density(t, 0) (lattice).
    virtual double included_atom(double /*t*/) const { return 0.0; }
};

struct SolverProviderOptions {
    /// Absolute accuracy target at time t: tolerance * exp(-growth * t).
    double tolerance = 1e-9;
    double growth = 0.0;
    /// Smallest window half-width solved for.
    double min_radius = 0.0;
    double max_spacing = 0.25;
    /// Number of solved times kept.
    std::size_t cache_size = 4;
};

/// Deterministic solver: continuum Fourier inversion for continuum kernels,
/// the series solver for lattice kernels. Each time is solved once on a
/// window of twice the largest radius requested so far; off-grid points are
/// interpolated.
class SolverProvider : public DensityProvider {
public:
    explicit SolverProvider(JumpKernel kernel, SolverProviderOptions options = {});
    int dimension() const override { return kernel_.dimension(); }
    double sigma2() const override { return kernel_.sigma2(); }
    std::string name() const override;
    double density(double t, std::span<const double> x) override;
    void densities(double t, std::span<const double> xs, std::span<double> out) override;
    double peak(double t) override;
    double atom(double t) const override;
    double included_atom(double t) const override;

    /// Field covering |x| <= radius at time t (solved or cached).
    const DensityField& field(double t, double radius);
    double tolerance_at(double t) const;
    const JumpKernel& kernel() const { return kernel_; }

private:
    JumpKernel kernel_;
    SolverProviderOptions options_;
    std::list<std::pair<double, DensityField>> cache_;
};

/// Leading-order tail formula plus the Gaussian term, evaluated everywhere
/// (outside the tail zone the values are unreliable). peak() is +inf.
class Theorem1Provider : public DensityProvider {
public:
    explicit Theorem1Provider(AsymptoticModel model) : model_(std::move(model)) {}
    int dimension() const override { return model_.dimension; }
    double sigma2() const override { return model_.sigma2; }
    std::string name() const override { return "theorem1"; }
    double density(double t, std::span<const double> x) override;
    double peak(double t) override;

private:
    AsymptoticModel model_;
};

/// Monte-Carlo fields indexed by time: density = mean / cell volume, times
/// exp(-growth t) (growth = beta - mu undoes the branching first-moment
/// factor).
class EmpiricalProvider : public DensityProvider {
public:
    EmpiricalProvider(double sigma2, double growth = 0.0) : sigma2_(sigma2), growth_(growth) {}
    void add(EmpiricalField field);
    int dimension() const override;
    double sigma2() const override { return sigma2_; }
    std::string name() const override { return "empirical"; }
    /// DomainError when no field was added at time t.
    double density(double t, std::span<const double> x) override;
    double peak(double t) override;

private:
    const EmpiricalField& at(double t) const;
    double sigma2_;
    double growth_;
    std::map<double, EmpiricalField> fields_;
};

}  // namespace tailwalk
