#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tailwalk/grid.hpp"
#include "tailwalk/kernel.hpp"

namespace tailwalk {

/// Birth rate beta and death rate mu (1/time); the jump rate is 1.
struct BranchingParams {
    double beta = 0.0;
    double mu = 0.0;

    double delta() const { return beta - mu; }
    /// DomainError unless both rates are finite and nonnegative.
    void validate() const;
};

/// One realization from a single ancestor at the origin.
struct RunRecord {
    /// Per snapshot: positions of the living particles, flattened (d per
    /// particle), ordered by particle id.
    std::vector<std::vector<double>> positions;
    /// Per snapshot: 1 if the run had not been truncated by then.
    std::vector<std::uint8_t> valid;
    bool truncated = false;
    double truncation_time = 0.0;
    long peak_population = 1;

    long population(std::size_t snapshot, int dimension) const {
        return static_cast<long>(positions[snapshot].size()) / dimension;
    }
};

struct BranchingEnsemble {
    std::uint64_t seed = 0;
    BranchingParams params;
    int dimension = 1;
    std::vector<double> snapshot_times;
    long n_runs = 0;
    long cap = 0;
    std::vector<RunRecord> runs;

    /// Index of snapshot time t (exact match); DomainError if absent.
    std::size_t snapshot_index(double t) const;
};

struct PopulationStats {
    double time = 0.0;
    double mean = 0.0;
    double stderr_ = 0.0;
    long effective_runs = 0;
    double truncated_fraction = 0.0;
};

/// Event-driven simulation: every particle carries an Exp(1 + beta + mu)
/// clock; at its ring the particle jumps, splits in place, or dies with
/// probabilities (1, beta, mu) / (1 + beta + mu). Run r uses substream r of
/// `seed`. Runs whose population exceeds `cap` stop and are flagged.
///   unsorted or negative times, cap < 1000, n_runs < 1 -> DomainError
BranchingEnsemble simulate_branching(const JumpKernel& kernel, const BranchingParams& params,
                                     std::span<const double> snapshot_times, long n_runs, std::uint64_t seed,
                                     long cap = 100000);

/// Single run, for the compute layer.
RunRecord simulate_branching_run(const JumpKernel& kernel, const BranchingParams& params,
                                 std::span<const double> snapshot_times, Rng& rng, long cap);

/// Mean population at a snapshot over the non-truncated runs.
PopulationStats population_statistics(const BranchingEnsemble& ensemble, std::size_t snapshot);

/// Mean particle count per cell and run, with standard errors taken across
/// runs. Truncated runs are excluded.
///   time not a snapshot      -> DomainError
///   every run truncated      -> InsufficientData
EmpiricalField estimate_first_moment(const BranchingEnsemble& ensemble, double t, const Grid& cells);

/// Distance from the origin of the centre of the outermost cell whose
/// density (mean count / cell volume) is >= 1; nullopt if there is none.
std::optional<double> empirical_front(const EmpiricalField& field);

}  // namespace tailwalk
